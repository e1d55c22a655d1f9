#include "bsal/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "bsal/io.hpp"
#include "bsal/metrics.hpp"
#include "bsal/significance.hpp"

namespace bsal {

namespace fs = std::filesystem;

namespace {

void log_line(const std::string& msg) { std::cerr << kToolName << ": " << msg << "\n"; }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct MethodSpec {
  bool external = false;
  fs::path map_dir;
};

MethodSpec parse_method(const std::string& method) {
  MethodSpec spec;
  if (method == "spectral-residual") return spec;
  if (method.rfind("external:", 0) == 0) {
    spec.external = true;
    spec.map_dir = method.substr(9);
    if (spec.map_dir.empty()) {
      throw Error(ErrorCode::InvalidParams, "external method needs a map directory");
    }
    return spec;
  }
  throw Error(ErrorCode::InvalidParams,
              "unknown saliency method '" + method +
                  "' (expected 'spectral-residual' or 'external:<dir>')");
}

// Index-sharded worker pool. Results must be written to per-index slots so
// the caller can fold them in manifest order.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto drain = [&] {
    for (size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Computes or imports the (normalized) map for one manifest entry.
SaliencyMap compute_map(const ManifestEntry& entry, const RasterImage& image,
                        const RunConfig& config, const MethodSpec& method) {
  if (!method.external) {
    return spectral_residual(image, config.params);
  }
  fs::path map_path = method.map_dir / (entry.image_id + ".salf");
  if (!fs::exists(map_path)) map_path = method.map_dir / (entry.image_id + ".pgm");
  if (!fs::exists(map_path)) {
    throw Error(ErrorCode::MissingFile,
                method.map_dir.string() + ": no map for image '" + entry.image_id +
                    "' (<id>.salf or <id>.pgm)");
  }
  SaliencyMap map = read_map(map_path);
  if (map.width() != image.width() || map.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                map_path.string() + ": map is " + std::to_string(map.width()) + "x" +
                    std::to_string(map.height()) + " but image '" + entry.image_id +
                    "' is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()));
  }
  return normalize_map(map);
}

void require_external_dir(const MethodSpec& method) {
  if (method.external && !fs::is_directory(method.map_dir)) {
    throw Error(ErrorCode::MissingFile,
                "external map directory " + method.map_dir.string() + " does not exist");
  }
}

std::vector<const ManifestEntry*> entries_of_split(const DatasetManifest& manifest,
                                                   Split split) {
  std::vector<const ManifestEntry*> out;
  for (const ManifestEntry& entry : manifest.entries) {
    if (entry.split == split) out.push_back(&entry);
  }
  return out;
}

/// Region means over already-loaded boxes; regions whose boxes miss the
/// frame entirely are dropped and reported in `notes`.
std::vector<RegionScore> score_regions(const std::string& image_id,
                                       const std::vector<BoundingBox>& boxes,
                                       const SaliencyMap& map,
                                       std::vector<std::string>* notes) {
  std::vector<RegionScore> scores;
  for (size_t b = 0; b < boxes.size(); ++b) {
    RegionScore score;
    score.image_id = image_id;
    score.box = boxes[b];
    try {
      score.mean_saliency = region_mean_saliency(map, boxes[b]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyIntersection && notes) {
        notes->push_back(image_id + ": region #" + std::to_string(b) +
                         " excluded: " + e.what());
        continue;
      }
      throw;
    }
    scores.push_back(std::move(score));
  }
  return scores;
}

}  // namespace

int run_saliency(const RunConfig& config) {
  const MethodSpec method = parse_method(config.method);
  require_external_dir(method);
  const DatasetManifest manifest = load_manifest(config.manifest);
  fs::create_directories(config.out);

  const size_t n = manifest.entries.size();
  std::vector<std::string> errors(n);
  parallel_for(n, config.workers, [&](size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const RasterImage image = read_image(entry.image_path);
      const SaliencyMap map = compute_map(entry, image, config, method);
      write_salf(map, config.out / (entry.image_id + ".salf"));
      if (config.preview) write_pgm(map, config.out / (entry.image_id + ".pgm"));
    } catch (const Error& e) {
      errors[i] = entry.image_id + ": " + e.what();
    }
  });

  int failed = 0;
  for (const std::string& err : errors) {
    if (!err.empty()) {
      ++failed;
      log_line("error: " + err);
    }
  }
  log_line("saliency: wrote " + std::to_string(n - size_t(failed)) + "/" +
           std::to_string(n) + " maps to " + config.out.string());
  return failed ? 2 : 0;
}

int run_calibrate(const RunConfig& config) {
  fs::create_directories(config.out);
  const fs::path record_path = config.out / "significance.threshold";

  if (config.threshold_override) {
    if (!(*config.threshold_override >= 0.0 && *config.threshold_override <= 1.0)) {
      throw Error(ErrorCode::InvalidParams, "threshold override outside [0, 1]");
    }
    SignificanceThreshold threshold;
    threshold.value = *config.threshold_override;
    threshold.n_regions = 0;
    threshold.source = "override";
    threshold.method = config.method;
    save_threshold(threshold, record_path);
    log_line("calibrate: recorded override threshold " +
             std::to_string(threshold.value) + " in " + record_path.string());
    return 0;
  }

  const MethodSpec method = parse_method(config.method);
  require_external_dir(method);
  const DatasetManifest manifest = load_manifest(config.manifest);
  const std::vector<const ManifestEntry*> train = entries_of_split(manifest, Split::Train);

  std::vector<std::vector<RegionScore>> per_image(train.size());
  std::vector<std::string> errors(train.size());
  std::vector<std::vector<std::string>> notes(train.size());
  parallel_for(train.size(), config.workers, [&](size_t i) {
    try {
      const RasterImage image = read_image(train[i]->image_path);
      const SaliencyMap map = compute_map(*train[i], image, config, method);
      const std::vector<BoundingBox> boxes =
          load_annotations(train[i]->annotation_path, train[i]->image_id);
      per_image[i] = score_regions(train[i]->image_id, boxes, map, &notes[i]);
    } catch (const Error& e) {
      errors[i] = train[i]->image_id + ": " + e.what();
    }
  });

  int failed = 0;
  std::vector<RegionScore> scores;
  for (size_t i = 0; i < train.size(); ++i) {
    for (const std::string& note : notes[i]) log_line(note);
    if (!errors[i].empty()) {
      ++failed;
      log_line("error: " + errors[i]);
      continue;
    }
    scores.insert(scores.end(), per_image[i].begin(), per_image[i].end());
  }
  if (failed) return 2;  // a partial calibration would silently bias the threshold

  const SignificanceThreshold threshold = calibrate_threshold(scores, config.method);
  save_threshold(threshold, record_path);
  log_line("calibrate: threshold " + std::to_string(threshold.value) + " over " +
           std::to_string(threshold.n_regions) + " train regions -> " +
           record_path.string());
  return 0;
}

namespace {

// Everything one test image contributes to the report and to the pooled
// detector evaluation.
struct EvalItem {
  ImageReport report;
  std::vector<Detection> detections;
  std::vector<BoundingBox> gt_boxes;
  std::vector<RegionScore> regions;
  bool had_gaze_points = false;
  std::vector<std::string> errors;
};

EvalItem evaluate_image(const ManifestEntry& entry, const RunConfig& config,
                        const MethodSpec& method,
                        const std::optional<SignificanceThreshold>& threshold) {
  EvalItem item;
  item.report.image_id = entry.image_id;

  RasterImage image;
  SaliencyMap map;
  try {
    image = read_image(entry.image_path);
    map = compute_map(entry, image, config, method);
  } catch (const Error& e) {
    item.errors.push_back(entry.image_id + ": " + e.what());
    return item;
  }

  try {
    item.gt_boxes = load_annotations(entry.annotation_path, entry.image_id);
    item.regions = score_regions(entry.image_id, item.gt_boxes, map, &item.report.notes);
  } catch (const Error& e) {
    item.errors.push_back(entry.image_id + ": " + e.what());
    return item;
  }

  if (entry.detection_path) {
    try {
      item.detections = load_detections(*entry.detection_path, entry.image_id);
    } catch (const Error& e) {
      item.errors.push_back(entry.image_id + ": " + e.what());
    }
  }

  std::optional<FixationSet> gaze;
  if (entry.gaze_path) {
    try {
      gaze = load_gaze(*entry.gaze_path, entry.image_id);
    } catch (const Error& e) {
      item.errors.push_back(entry.image_id + ": " + e.what());
    }
  }

  if (gaze && !gaze->points.empty()) {
    item.had_gaze_points = true;
    try {
      const BinaryFixationMap fixmap =
          build_fixation_map(*gaze, image.width(), image.height());
      item.report.auc = auc_judd(map, fixmap);
      try {
        item.report.nss = nss(map, fixmap);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
        item.errors.push_back(entry.image_id + ": " + e.what());
        item.report.notes.push_back(entry.image_id + ": NSS skipped (constant map)");
      }
    } catch (const Error& e) {
      item.errors.push_back(entry.image_id + ": " + e.what());
    }
  } else if (gaze) {
    item.report.notes.push_back(entry.image_id +
                                ": gaze file has no points; saliency metrics skipped");
  }

  for (RegionScore& region : item.regions) {
    if (threshold) region.predicted_salient = classify_region(region, *threshold);
    if (gaze) region.truth_salient = ground_truth_salience(*gaze, region.box);
    RegionReport rr;
    rr.box = region.box;
    rr.mean_saliency = region.mean_saliency;
    rr.predicted_salient = region.predicted_salient;
    rr.truth_salient = region.truth_salient;
    item.report.regions.push_back(std::move(rr));
  }
  return item;
}

}  // namespace

int run_evaluate(const RunConfig& config) {
  const MethodSpec method = parse_method(config.method);
  require_external_dir(method);
  const DatasetManifest manifest = load_manifest(config.manifest);
  fs::create_directories(config.out);

  const std::vector<const ManifestEntry*> test = entries_of_split(manifest, Split::Test);
  if (test.empty()) {
    throw Error(ErrorCode::EmptyGroundTruth, "manifest has no test-split entries");
  }

  EvaluationReport report;
  report.metadata.tool = kToolName;
  report.metadata.version = kToolVersion;
  report.metadata.method = config.method;
  report.metadata.aggregation = "mean-of-per-image-scores";
  report.metadata.created_utc = utc_now();

  // Threshold: explicit override, then a calibration record, then on-the-fly
  // calibration on the train split when one is available.
  std::optional<SignificanceThreshold> threshold;
  if (config.threshold_override) {
    if (!(*config.threshold_override >= 0.0 && *config.threshold_override <= 1.0)) {
      throw Error(ErrorCode::InvalidParams, "threshold override outside [0, 1]");
    }
    threshold = SignificanceThreshold{*config.threshold_override, 0, "override",
                                      config.method};
  } else if (config.threshold_record) {
    threshold = load_threshold(*config.threshold_record);
  } else {
    const std::vector<const ManifestEntry*> train =
        entries_of_split(manifest, Split::Train);
    if (!train.empty()) {
      try {
        std::vector<RegionScore> scores;
        for (const ManifestEntry* entry : train) {
          const RasterImage image = read_image(entry->image_path);
          const SaliencyMap map = compute_map(*entry, image, config, method);
          const std::vector<BoundingBox> boxes =
              load_annotations(entry->annotation_path, entry->image_id);
          const std::vector<RegionScore> s =
              score_regions(entry->image_id, boxes, map, nullptr);
          scores.insert(scores.end(), s.begin(), s.end());
        }
        threshold = calibrate_threshold(scores, config.method);
        log_line("evaluate: auto-calibrated threshold " +
                 std::to_string(threshold->value) + " on " +
                 std::to_string(threshold->n_regions) + " train regions");
      } catch (const Error& e) {
        log_line(std::string("evaluate: auto-calibration failed: ") + e.what());
      }
    }
  }

  std::vector<EvalItem> items(test.size());
  parallel_for(test.size(), config.workers, [&](size_t i) {
    items[i] = evaluate_image(*test[i], config, method, threshold);
  });

  // Fold in manifest order.
  bool any_gaze_ref = false, any_det_ref = false;
  for (const ManifestEntry* entry : test) {
    any_gaze_ref |= entry->gaze_path.has_value();
    any_det_ref |= entry->detection_path.has_value();
  }

  std::vector<Detection> all_detections;
  std::vector<BoundingBox> all_gt;
  std::vector<RegionScore> labeled_regions;
  double auc_sum = 0.0, nss_sum = 0.0;
  std::int64_t auc_count = 0, nss_count = 0;
  for (EvalItem& item : items) {
    for (const std::string& err : item.errors) {
      report.errors.push_back(err);
      log_line("error: " + err);
    }
    if (item.report.auc) {
      auc_sum += *item.report.auc;
      ++auc_count;
    }
    if (item.report.nss) {
      nss_sum += *item.report.nss;
      ++nss_count;
    }
    all_detections.insert(all_detections.end(), item.detections.begin(),
                          item.detections.end());
    all_gt.insert(all_gt.end(), item.gt_boxes.begin(), item.gt_boxes.end());
    for (const RegionScore& region : item.regions) {
      if (region.predicted_salient && region.truth_salient) {
        labeled_regions.push_back(region);
      }
    }
    report.per_image.push_back(std::move(item.report));
  }

  if (auc_count > 0) report.aggregates.mean_auc = auc_sum / double(auc_count);
  if (nss_count > 0) report.aggregates.mean_nss = nss_sum / double(nss_count);
  if (!any_gaze_ref) {
    report.skipped["saliency_metrics"] = "skipped: missing input (no gaze files)";
  }

  if (!any_det_ref) {
    report.skipped["detection_metrics"] = "skipped: missing input (no detection files)";
  } else if (all_gt.empty()) {
    report.errors.push_back("detection metrics: empty ground truth in test split");
    log_line("error: detection metrics: empty ground truth in test split");
  } else {
    const ApRange ap = ap_range(all_detections, all_gt);
    report.aggregates.ap50 = ap.ap50;
    report.aggregates.ap50_95 = ap.ap50_95;
  }

  if (!threshold) {
    report.skipped["significance"] =
        "skipped: missing input (no threshold; run calibrate or pass --threshold)";
  } else {
    report.aggregates.threshold = threshold->value;
    if (labeled_regions.empty()) {
      report.skipped["significance"] =
          "skipped: missing input (no regions with both prediction and ground truth)";
    } else {
      const SignificanceStats stats = confusion_stats(labeled_regions);
      report.aggregates.accuracy = stats.accuracy;
      report.aggregates.sensitivity = stats.sensitivity;
      report.aggregates.specificity = stats.specificity;
      report.aggregates.precision = stats.precision;
      report.aggregates.confusion = stats.counts;
    }
  }

  const fs::path report_path = config.out / "evaluation.report";
  write_report(report, report_path);
  log_line("evaluate: report written to " + report_path.string());
  if (!report.errors.empty()) {
    log_line("evaluate: " + std::to_string(report.errors.size()) +
             " error(s); report is partial");
    return 2;
  }
  return 0;
}

}  // namespace bsal
