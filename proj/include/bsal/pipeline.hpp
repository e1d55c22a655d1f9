#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bsal/saliency.hpp"

namespace bsal {

inline constexpr const char* kToolName = "bsal";
inline constexpr const char* kToolVersion = "0.1.0";

/// Batch run configuration shared by the CLI commands. `method` is either
/// "spectral-residual" or "external:<dir>" where <dir> holds one map per
/// image id (<id>.salf or <id>.pgm).
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::string method = "spectral-residual";
  SpectralResidualParams params;
  std::optional<double> threshold_override;
  std::optional<std::filesystem::path> threshold_record;
  int workers = 1;
  std::uint64_t seed = 0;
  int synth_size = 4;
  int synth_width = 160;
  int synth_height = 120;
  bool preview = false;
};

// Commands return a process exit code: 0 on success, 2 when any data error
// was logged. Usage errors (1) and internal errors (3) are mapped by the CLI
// wrapper. Work is distributed per image; aggregation happens in manifest
// order regardless of completion order, so results do not depend on the
// worker count.

/// Writes one <id>.salf map per manifest image (plus a .pgm preview when
/// configured) into the output directory.
int run_saliency(const RunConfig& config);

/// Calibrates the significance threshold on the train split (or records the
/// override) and writes <out>/significance.threshold.
int run_calibrate(const RunConfig& config);

/// Evaluates the test split and writes <out>/evaluation.report. Sections
/// without inputs are marked skipped; per-image failures become error
/// entries and the run continues.
int run_evaluate(const RunConfig& config);

/// Generates a deterministic synthetic dataset (images, boxes, detections,
/// gaze, manifest) for self-tests.
int run_synth(const RunConfig& config);

}  // namespace bsal
