#include "bsal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bsal {

namespace {

void check_same_shape(const SaliencyMap& map, const BinaryFixationMap& fixmap) {
  if (map.width() != fixmap.width() || map.height() != fixmap.height()) {
    std::ostringstream msg;
    msg << "saliency map is " << map.width() << "x" << map.height()
        << " but fixation map is " << fixmap.width() << "x" << fixmap.height();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t ix = std::max<std::int64_t>(
      0, std::min<std::int64_t>(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const std::int64_t iy = std::max<std::int64_t>(
      0, std::min<std::int64_t>(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const std::int64_t inter = ix * iy;
  if (inter == 0) return 0.0;
  const std::int64_t uni = a.area() + b.area() - inter;
  return double(inter) / double(uni);
}

double average_precision(const std::vector<Detection>& detections,
                         const std::vector<BoundingBox>& ground_truth,
                         double iou_threshold) {
  if (ground_truth.empty()) {
    throw Error(ErrorCode::EmptyGroundTruth,
                "average precision is undefined without ground-truth boxes");
  }
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidParams,
                "IoU threshold must lie in (0, 1], got " + std::to_string(iou_threshold));
  }

  std::vector<size_t> order(detections.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  // Greedy matching: best unmatched same-image ground truth, IoU ties broken
  // by ground-truth input order.
  std::vector<char> gt_matched(ground_truth.size(), 0);
  std::int64_t tp = 0, fp = 0;
  std::vector<PrPoint> curve;
  curve.reserve(detections.size());
  const double n_gt = double(ground_truth.size());
  for (size_t idx : order) {
    const Detection& det = detections[idx];
    double best_iou = 0.0;
    size_t best_gt = ground_truth.size();
    for (size_t g = 0; g < ground_truth.size(); ++g) {
      if (gt_matched[g] || ground_truth[g].image_id != det.image_id()) continue;
      const double v = iou(det.box, ground_truth[g]);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best_gt = g;
      }
    }
    if (best_gt < ground_truth.size()) {
      gt_matched[best_gt] = 1;
      ++tp;
    } else {
      ++fp;
    }
    curve.push_back({double(tp) / n_gt, double(tp) / double(tp + fp)});
  }

  // Monotone precision envelope, integrated over recall.
  double envelope = 0.0;
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    envelope = std::max(envelope, it->precision);
    it->precision = envelope;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const PrPoint& p : curve) {
    ap += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return ap;
}

ApRange ap_range(const std::vector<Detection>& detections,
                 const std::vector<BoundingBox>& ground_truth) {
  ApRange out;
  double sum = 0.0;
  for (int t = 50; t <= 95; t += 5) {
    const double ap = average_precision(detections, ground_truth, double(t) / 100.0);
    if (t == 50) out.ap50 = ap;
    sum += ap;
  }
  out.ap50_95 = sum / 10.0;
  return out;
}

double auc_judd(const SaliencyMap& map, const BinaryFixationMap& fixmap) {
  check_same_shape(map, fixmap);
  const Eigen::Index n = map.values.size();

  std::vector<double> fixated;
  for (Eigen::Index r = 0; r < map.values.rows(); ++r)
    for (Eigen::Index c = 0; c < map.values.cols(); ++c)
      if (fixmap.fixated(r, c)) fixated.push_back(map.values(r, c));
  if (fixated.empty()) {
    throw Error(ErrorCode::NoFixations, "fixation map has no fixated cell");
  }

  std::vector<double> all(map.values.data(), map.values.data() + n);
  std::sort(all.begin(), all.end());
  std::sort(fixated.begin(), fixated.end());
  std::vector<double> thresholds = fixated;
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double n_fix = double(fixated.size());
  const double n_all = double(n);
  // Descending thresholds produce ascending (FPR, TPR) points.
  double area = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    const double t = *it;
    const double tpr =
        double(fixated.end() - std::lower_bound(fixated.begin(), fixated.end(), t)) / n_fix;
    const double fpr =
        double(all.end() - std::lower_bound(all.begin(), all.end(), t)) / n_all;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
  return area;
}

double nss(const SaliencyMap& map, const BinaryFixationMap& fixmap) {
  check_same_shape(map, fixmap);
  if (map.values.size() == 0) {
    throw Error(ErrorCode::NoFixations, "empty saliency map");
  }
  if (map.values.minCoeff() == map.values.maxCoeff()) {
    throw Error(ErrorCode::ZeroVariance,
                "NSS is undefined on a constant saliency map");
  }
  const std::int64_t n_fix = fixmap.count();
  if (n_fix == 0) {
    throw Error(ErrorCode::NoFixations, "fixation map has no fixated cell");
  }

  const double mean = map.values.mean();
  const double var = (map.values - mean).square().sum() / double(map.values.size());
  const double stddev = std::sqrt(var);

  double acc = 0.0;
  for (Eigen::Index r = 0; r < map.values.rows(); ++r)
    for (Eigen::Index c = 0; c < map.values.cols(); ++c)
      if (fixmap.fixated(r, c)) acc += (map.values(r, c) - mean) / stddev;
  return acc / double(n_fix);
}

}  // namespace bsal
