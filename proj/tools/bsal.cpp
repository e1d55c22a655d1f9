// Command-line front end: saliency map extraction, threshold calibration,
// dataset evaluation and synthetic fixture generation over dataset manifests.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
// Human-readable log goes to stderr; machine artifacts only into --out.

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "bsal/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"billboard saliency toolkit"};
  app.require_subcommand(1);

  bsal::RunConfig config;
  std::string threshold_record;

  auto add_common = [&](CLI::App* cmd, bool needs_manifest) {
    if (needs_manifest) {
      cmd->add_option("--manifest", config.manifest, "dataset manifest file")->required();
    }
    cmd->add_option("--out", config.out, "output directory")->required();
    cmd->add_option("--workers", config.workers, "parallel image workers")
        ->check(CLI::PositiveNumber);
  };
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", config.method,
                    "saliency method: spectral-residual | external:<dir>");
    cmd->add_option("--working-width", config.params.working_width,
                    "spectral-residual working width (px)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mean-filter", config.params.mean_filter_size,
                    "log-amplitude mean filter size (odd)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--blur-sigma", config.params.post_blur_sigma,
                    "post blur sigma (working-scale px)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* saliency = app.add_subcommand("saliency", "write one map per image");
  add_common(saliency, true);
  add_method(saliency);
  saliency->add_flag("--preview", config.preview, "also write .pgm previews");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "calibrate the significance threshold");
  add_common(calibrate, true);
  add_method(calibrate);
  calibrate->add_option("--threshold", config.threshold_override,
                        "record this threshold instead of calibrating")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate the test split");
  add_common(evaluate, true);
  add_method(evaluate);
  evaluate->add_option("--threshold", config.threshold_override,
                       "significance threshold override")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--threshold-record", threshold_record,
                       "threshold record written by 'calibrate'");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_common(synth, false);
  synth->add_option("--seed", config.seed, "random seed");
  synth->add_option("--size", config.synth_size, "number of images")
      ->check(CLI::PositiveNumber);
  synth->add_option("--width", config.synth_width, "image width")
      ->check(CLI::PositiveNumber);
  synth->add_option("--height", config.synth_height, "image height")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
  }

  if (!threshold_record.empty()) config.threshold_record = threshold_record;

  try {
    if (saliency->parsed()) return bsal::run_saliency(config);
    if (calibrate->parsed()) return bsal::run_calibrate(config);
    if (evaluate->parsed()) return bsal::run_evaluate(config);
    if (synth->parsed()) return bsal::run_synth(config);
  } catch (const bsal::Error& e) {
    std::cerr << "bsal: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bsal: internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
