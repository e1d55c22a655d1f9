#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsal/fixation.hpp"
#include "bsal/types.hpp"

namespace bsal {

/// One annotated region with its mean saliency and, once derived, the
/// predicted and ground-truth salience labels.
struct RegionScore {
  std::string image_id;
  BoundingBox box;
  double mean_saliency = 0.0;
  std::optional<bool> predicted_salient;
  std::optional<bool> truth_salient;
};

/// Decision threshold with calibration provenance. `n_regions` is the
/// calibration support (0 when the value was injected as an override).
struct SignificanceThreshold {
  double value = 0.0;
  std::int64_t n_regions = 0;
  std::string source;  // "calibrated" | "override"
  std::string method;  // saliency method the threshold belongs to
};

/// Confusion counts plus the derived rates. Sensitivity is absent when no
/// region is truly salient (tp + fn = 0); specificity and precision are
/// supplementary and absent when their denominators are empty.
struct SignificanceStats {
  ConfusionCounts counts;
  double accuracy = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
};

/// Mean saliency over the pixels of `box` clipped to the map frame.
/// The map must be normalized. Throws EmptyIntersection for boxes fully
/// outside the frame.
double region_mean_saliency(const SaliencyMap& map, const BoundingBox& box);

/// Threshold = unweighted mean of the region mean saliencies (training split).
SignificanceThreshold calibrate_threshold(const std::vector<RegionScore>& scores,
                                          const std::string& method = "");

/// Salient iff mean saliency is strictly greater than the threshold.
bool classify_region(const RegionScore& score, const SignificanceThreshold& threshold);

/// Truly salient iff at least one fixation falls inside the box.
bool ground_truth_salience(const FixationSet& fixations, const BoundingBox& box);

/// Aggregates regions carrying both labels into confusion counts and rates.
/// Throws MissingLabels when any region lacks a prediction or a truth label.
SignificanceStats confusion_stats(const std::vector<RegionScore>& regions);

}  // namespace bsal
