#include <doctest.h>

#include <cmath>

#include "bsal/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bsal;
using testutil::box;
using testutil::make_fixmap;
using testutil::make_map;

namespace {

Detection det(const BoundingBox& b, double confidence) {
  Detection d;
  d.box = b;
  d.confidence = confidence;
  return d;
}

// Random matching instances shared by the oracle-equivalence checks.
struct Instance {
  std::vector<Detection> detections;
  std::vector<BoundingBox> gts;
};

Instance random_instance(testutil::Rng& rng) {
  Instance inst;
  const int n_gt = rng.uniform_int(1, 4);
  const int n_det = rng.uniform_int(0, 5);
  for (int g = 0; g < n_gt; ++g) {
    inst.gts.push_back(box(rng.uniform_int(0, 60), rng.uniform_int(0, 60),
                           rng.uniform_int(4, 30), rng.uniform_int(4, 30),
                           rng.uniform() < 0.25 ? "b" : "a"));
  }
  for (int d = 0; d < n_det; ++d) {
    BoundingBox b;
    if (!inst.gts.empty() && rng.uniform() < 0.7) {
      // jittered copy of some ground truth, often overlapping several
      const BoundingBox& src = inst.gts[size_t(rng.uniform_int(0, int(inst.gts.size()) - 1))];
      b = box(src.x + rng.uniform_int(-6, 6), src.y + rng.uniform_int(-6, 6),
              std::max(1, src.w + rng.uniform_int(-5, 5)),
              std::max(1, src.h + rng.uniform_int(-5, 5)), src.image_id);
    } else {
      b = box(rng.uniform_int(0, 60), rng.uniform_int(0, 60), rng.uniform_int(4, 30),
              rng.uniform_int(4, 30), rng.uniform() < 0.25 ? "b" : "a");
    }
    // quantized confidences produce plenty of ties
    inst.detections.push_back(det(b, rng.uniform_int(0, 10) / 10.0));
  }
  return inst;
}

}  // namespace

TEST_CASE("iou identities") {
  const BoundingBox a = box(3, 4, 10, 12);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(box(0, 0, 10, 10), box(20, 20, 5, 5)) == 0.0);
  CHECK(iou(box(0, 0, 10, 10), box(5, 0, 10, 10)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("iou is symmetric and bounded") {
  testutil::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox a = box(rng.uniform_int(-10, 50), rng.uniform_int(-10, 50),
                              rng.uniform_int(1, 40), rng.uniform_int(1, 40));
    const BoundingBox b = box(rng.uniform_int(-10, 50), rng.uniform_int(-10, 50),
                              rng.uniform_int(1, 40), rng.uniform_int(1, 40));
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("average_precision: perfect detector scores 1") {
  const std::vector<BoundingBox> gts = {box(0, 0, 10, 10, "a"), box(40, 40, 8, 8, "a")};
  const std::vector<Detection> dets = {det(gts[0], 0.9), det(gts[1], 0.8)};
  CHECK(average_precision(dets, gts, 0.5) == 1.0);
}

TEST_CASE("average_precision: nothing reaches the threshold") {
  const std::vector<BoundingBox> gts = {box(0, 0, 10, 10, "a")};
  const std::vector<Detection> dets = {det(box(100, 100, 10, 10, "a"), 0.9)};
  CHECK(average_precision(dets, gts, 0.5) == 0.0);
}

TEST_CASE("average_precision: worked 3-detection example") {
  // confidences .9 (TP), .8 (FP), .7 (TP) on 2 ground truths ->
  // envelope over recalls {0.5, 1.0} gives 0.5 * 1 + 0.5 * (2/3) = 5/6
  const std::vector<BoundingBox> gts = {box(0, 0, 10, 10, "a"), box(60, 60, 10, 10, "a")};
  const std::vector<Detection> dets = {det(gts[0], 0.9), det(box(30, 30, 10, 10, "a"), 0.8),
                                       det(gts[1], 0.7)};
  CHECK(average_precision(dets, gts, 0.5) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("average_precision requires ground truth") {
  try {
    average_precision({det(box(0, 0, 4, 4, "a"), 0.5)}, {}, 0.5);
    FAIL("expected EmptyGroundTruth");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGroundTruth);
  }
}

TEST_CASE("average_precision matches the exhaustive enumeration oracle") {
  testutil::Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng);
    for (const double threshold : {0.3, 0.5, 0.75}) {
      const double got = average_precision(inst.detections, inst.gts, threshold);
      const double expected = oracle::average_precision_ref(inst.detections, inst.gts, threshold);
      CHECK(std::abs(got - expected) <= 1e-12);
    }
  }
}

TEST_CASE("average_precision is non-increasing in the IoU threshold") {
  testutil::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    double prev = 1.0 + 1e-12;
    for (int t = 30; t <= 95; t += 5) {
      const double ap = average_precision(inst.detections, inst.gts, t / 100.0);
      CHECK(ap <= prev + 1e-12);
      prev = ap;
    }
  }
}

TEST_CASE("ap_range: perfect boxes pass every threshold") {
  const std::vector<BoundingBox> gts = {box(0, 0, 10, 10, "a"), box(40, 40, 8, 8, "a")};
  const std::vector<Detection> dets = {det(gts[0], 0.9), det(gts[1], 0.8)};
  const ApRange ap = ap_range(dets, gts);
  CHECK(ap.ap50 == 1.0);
  CHECK(ap.ap50_95 == 1.0);
}

TEST_CASE("ap_range: IoU exactly 0.6 passes three thresholds") {
  // det is a 10x6 sub-box of the 10x10 gt: inter 60, union 100 -> IoU 0.6,
  // so AP is 1 at thresholds {.50, .55, .60} and 0 above: mean 0.3
  const BoundingBox gt = box(0, 0, 10, 10, "d");
  const BoundingBox sub = box(0, 0, 10, 6, "d");
  CHECK(iou(gt, sub) == 0.6);
  const ApRange ap = ap_range({det(sub, 0.9)}, {gt});
  CHECK(ap.ap50 == 1.0);
  CHECK(ap.ap50_95 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("ap_range: no detections") {
  const ApRange ap = ap_range({}, {box(0, 0, 10, 10, "a")});
  CHECK(ap.ap50 == 0.0);
  CHECK(ap.ap50_95 == 0.0);
}

TEST_CASE("auc_judd: constant map scores exactly 0.5") {
  const SaliencyMap map = make_map(4, 4, std::vector<double>(16, 0.0));
  const BinaryFixationMap fixmap = make_fixmap(4, 4, {{1, 1}, {2, 3}});
  CHECK(auc_judd(map, fixmap) == 0.5);
}

TEST_CASE("auc_judd: k top cells fixated on a binary map") {
  // k fixated cells valued 1, all others 0: area = 1 - k/(2N)
  const int width = 8, height = 8, k = 3;
  std::vector<double> values(64, 0.0);
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < k; ++i) {
    values[size_t(i * 9 + 2)] = 1.0;
    cells.push_back({(i * 9 + 2) % width, (i * 9 + 2) / width});
  }
  const SaliencyMap map = make_map(width, height, values);
  const double expected = 1.0 - double(k) / (2.0 * 64.0);
  CHECK(auc_judd(map, make_fixmap(width, height, cells)) ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("auc_judd: fixations on the lowest cells score below chance") {
  std::vector<double> values(36);
  for (int i = 0; i < 36; ++i) values[size_t(i)] = double(i) / 35.0;
  const SaliencyMap map = make_map(6, 6, values);
  const BinaryFixationMap fixmap = make_fixmap(6, 6, {{0, 0}, {1, 0}, {2, 0}});
  const double got = auc_judd(map, fixmap);
  CHECK(got < 0.5);
  CHECK(got == doctest::Approx(oracle::auc_judd_ref(map, fixmap)).epsilon(1e-15));
}

TEST_CASE("auc_judd matches the brute-force sweep oracle on random maps") {
  testutil::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int width = rng.uniform_int(3, 12), height = rng.uniform_int(3, 12);
    std::vector<double> values(size_t(width * height));
    for (double& v : values) v = rng.uniform_int(0, 9) / 9.0;  // plenty of ties
    std::vector<std::pair<int, int>> cells;
    const int n_fix = rng.uniform_int(1, 6);
    for (int i = 0; i < n_fix; ++i)
      cells.push_back({rng.uniform_int(0, width - 1), rng.uniform_int(0, height - 1)});
    const SaliencyMap map = make_map(width, height, values);
    const BinaryFixationMap fixmap = make_fixmap(width, height, cells);
    CHECK(auc_judd(map, fixmap) ==
          doctest::Approx(oracle::auc_judd_ref(map, fixmap)).epsilon(1e-14));
  }
}

TEST_CASE("auc_judd is invariant under strictly increasing transforms") {
  testutil::Rng rng(47);
  std::vector<double> values(100);
  for (double& v : values) v = rng.uniform();
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < 7; ++i) cells.push_back({rng.uniform_int(0, 9), rng.uniform_int(0, 9)});
  const SaliencyMap map = make_map(10, 10, values);
  const BinaryFixationMap fixmap = make_fixmap(10, 10, cells);

  std::vector<double> transformed(100);
  for (size_t i = 0; i < 100; ++i) transformed[i] = 0.25 * values[i] + 0.5;
  const SaliencyMap map2 = make_map(10, 10, transformed, false);
  CHECK(auc_judd(map, fixmap) == auc_judd(map2, fixmap));
}

TEST_CASE("auc_judd error paths") {
  const SaliencyMap map = make_map(4, 4, std::vector<double>(16, 0.0));
  try {
    auc_judd(map, make_fixmap(4, 4, {}));
    FAIL("expected NoFixations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoFixations);
  }
  try {
    auc_judd(map, make_fixmap(3, 4, {{0, 0}}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("nss: fixations exactly one std above the mean score 1") {
  // half the cells at 0, half at 2: mean 1, population std 1
  const SaliencyMap map = make_map(2, 2, {0.0, 2.0, 0.0, 2.0}, false);
  CHECK(nss(map, make_fixmap(2, 2, {{1, 0}})) == 1.0);
  CHECK(nss(map, make_fixmap(2, 2, {{1, 0}, {1, 1}})) == 1.0);
}

TEST_CASE("nss: worked 2x2 example") {
  // map {0,0,0,1}, fixation at the 1-cell: (1 - 0.25) / sqrt(3)/4*2 = sqrt(3)
  const SaliencyMap map = make_map(2, 2, {0.0, 0.0, 0.0, 1.0});
  const BinaryFixationMap fixmap = make_fixmap(2, 2, {{1, 1}});
  CHECK(nss(map, fixmap) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(nss(map, fixmap) == doctest::Approx(1.7320508).epsilon(1e-6));
}

TEST_CASE("nss: fixations covering every cell average to zero") {
  testutil::Rng rng(53);
  std::vector<double> values(48);
  for (double& v : values) v = rng.uniform();
  const SaliencyMap map = make_map(8, 6, values);
  std::vector<std::pair<int, int>> cells;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 6; ++y) cells.push_back({x, y});
  CHECK(std::abs(nss(map, make_fixmap(8, 6, cells))) < 1e-9);
}

TEST_CASE("nss is invariant under positive affine transforms") {
  testutil::Rng rng(59);
  std::vector<double> values(64);
  for (double& v : values) v = rng.uniform();
  const SaliencyMap map = make_map(8, 8, values);
  const BinaryFixationMap fixmap = make_fixmap(8, 8, {{1, 2}, {5, 5}, {7, 0}});
  const double base = nss(map, fixmap);
  for (int i = 0; i < 25; ++i) {
    const double a = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(-5.0, 5.0);
    std::vector<double> scaled(64);
    for (size_t j = 0; j < 64; ++j) scaled[j] = a * values[j] + b;
    CHECK(nss(make_map(8, 8, scaled, false), fixmap) ==
          doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("nss error paths") {
  const SaliencyMap constant = make_map(2, 2, {0.3, 0.3, 0.3, 0.3});
  try {
    nss(constant, make_fixmap(2, 2, {{0, 0}}));
    FAIL("expected ZeroVariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVariance);
  }
  const SaliencyMap map = make_map(2, 2, {0.0, 0.0, 0.0, 1.0});
  try {
    nss(map, make_fixmap(2, 2, {}));
    FAIL("expected NoFixations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoFixations);
  }
  try {
    nss(map, make_fixmap(3, 2, {{0, 0}}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}
