#include "bsal/significance.hpp"

namespace bsal {

double region_mean_saliency(const SaliencyMap& map, const BoundingBox& box) {
  if (!map.normalized) {
    throw Error(ErrorCode::InvalidParams,
                "region means are defined over normalized maps; normalize first");
  }
  const BoundingBox clipped = clip_box(box, map.width(), map.height());
  return map.values.block(clipped.y, clipped.x, clipped.h, clipped.w).mean();
}

SignificanceThreshold calibrate_threshold(const std::vector<RegionScore>& scores,
                                          const std::string& method) {
  if (scores.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet,
                "threshold calibration needs at least one training region");
  }
  double sum = 0.0;
  for (const RegionScore& s : scores) sum += s.mean_saliency;

  SignificanceThreshold out;
  out.value = sum / double(scores.size());
  out.n_regions = static_cast<std::int64_t>(scores.size());
  out.source = "calibrated";
  out.method = method;
  return out;
}

bool classify_region(const RegionScore& score, const SignificanceThreshold& threshold) {
  return score.mean_saliency > threshold.value;
}

bool ground_truth_salience(const FixationSet& fixations, const BoundingBox& box) {
  return fixations_in_box(fixations, box) >= 1;
}

SignificanceStats confusion_stats(const std::vector<RegionScore>& regions) {
  SignificanceStats stats;
  for (size_t i = 0; i < regions.size(); ++i) {
    const RegionScore& r = regions[i];
    if (!r.predicted_salient || !r.truth_salient) {
      throw Error(ErrorCode::MissingLabels,
                  "region #" + std::to_string(i) + " of image '" + r.image_id +
                      "' lacks a prediction or truth label");
    }
    const bool pred = *r.predicted_salient;
    const bool truth = *r.truth_salient;
    if (pred && truth) ++stats.counts.tp;
    else if (!pred && !truth) ++stats.counts.tn;
    else if (pred) ++stats.counts.fp;
    else ++stats.counts.fn;
  }

  const ConfusionCounts& c = stats.counts;
  stats.accuracy = c.total() > 0 ? double(c.tp + c.tn) / double(c.total()) : 0.0;
  if (c.tp + c.fn > 0) stats.sensitivity = double(c.tp) / double(c.tp + c.fn);
  if (c.tn + c.fp > 0) stats.specificity = double(c.tn) / double(c.tn + c.fp);
  if (c.tp + c.fp > 0) stats.precision = double(c.tp) / double(c.tp + c.fp);
  return stats;
}

}  // namespace bsal
