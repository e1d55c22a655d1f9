#pragma once

#include <vector>

#include "bsal/fixation.hpp"
#include "bsal/types.hpp"

namespace bsal {

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ApRange {
  double ap50 = 0.0;
  double ap50_95 = 0.0;
};

/// Intersection over union of two axis-aligned boxes; 0 when disjoint.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Average precision at one IoU threshold. Detections are taken in descending
/// confidence order (stable on ties) and greedily matched to the unmatched
/// ground-truth box of highest IoU >= threshold within the same image; the
/// PR curve over the sorted prefixes is integrated under its monotone
/// precision envelope (precision at recall r = max precision at recall >= r).
/// Throws EmptyGroundTruth when `ground_truth` is empty.
double average_precision(const std::vector<Detection>& detections,
                         const std::vector<BoundingBox>& ground_truth,
                         double iou_threshold);

/// AP at threshold 0.50 and the unweighted mean over {0.50, 0.55, ..., 0.95}.
ApRange ap_range(const std::vector<Detection>& detections,
                 const std::vector<BoundingBox>& ground_truth);

/// AUC-Judd: thresholds at the distinct saliency values of fixated cells,
/// TPR over fixated cells, FPR over all cells, curve anchored at (0,0) and
/// (1,1), area by the trapezoidal rule.
double auc_judd(const SaliencyMap& map, const BinaryFixationMap& fixmap);

/// Normalized scanpath saliency: mean standardized saliency (zero mean, unit
/// population standard deviation over all pixels) at fixated cells.
/// Throws ZeroVariance for a constant map.
double nss(const SaliencyMap& map, const BinaryFixationMap& fixmap);

}  // namespace bsal
