#include <doctest.h>

#include "bsal/types.hpp"
#include "test_util.hpp"

using namespace bsal;
using testutil::box;

TEST_CASE("clip_box keeps interior boxes unchanged") {
  const BoundingBox b = box(10, 10, 20, 20);
  const BoundingBox clipped = clip_box(b, 100, 100);
  CHECK(clipped == b);
}

TEST_CASE("clip_box intersects with the frame") {
  const BoundingBox clipped = clip_box(box(-5, 0, 10, 10), 100, 100);
  CHECK(clipped.x == 0);
  CHECK(clipped.y == 0);
  CHECK(clipped.w == 5);
  CHECK(clipped.h == 10);

  const BoundingBox right = clip_box(box(95, 98, 10, 10), 100, 100);
  CHECK(right.w == 5);
  CHECK(right.h == 2);
}

TEST_CASE("clip_box rejects disjoint boxes") {
  try {
    clip_box(box(200, 200, 10, 10), 100, 100);
    FAIL("expected EmptyIntersection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyIntersection);
  }
}

TEST_CASE("clip_box is idempotent") {
  testutil::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox b = box(rng.uniform_int(-30, 90), rng.uniform_int(-30, 90),
                              rng.uniform_int(1, 60), rng.uniform_int(1, 60));
    try {
      const BoundingBox once = clip_box(b, 100, 100);
      const BoundingBox twice = clip_box(once, 100, 100);
      CHECK(once == twice);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyIntersection);
    }
  }
}

namespace {

RasterImage rgb_pixel(float r, float g, float b) {
  RasterImage image;
  image.planes.push_back(Planef::Constant(1, 1, r));
  image.planes.push_back(Planef::Constant(1, 1, g));
  image.planes.push_back(Planef::Constant(1, 1, b));
  return image;
}

}  // namespace

TEST_CASE("luminance returns 1-channel input unchanged") {
  RasterImage image;
  image.planes.push_back(Planef::Constant(2, 3, 0.25f));
  const RasterImage luma = luminance(image);
  CHECK(luma.channels() == 1);
  CHECK((luma.planes[0] == image.planes[0]).all());
}

TEST_CASE("luminance weights sum to one on uniform pixels") {
  const RasterImage luma = luminance(rgb_pixel(0.6f, 0.6f, 0.6f));
  CHECK(luma.planes[0](0, 0) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("luminance applies the (0.299, 0.587, 0.114) weights") {
  CHECK(luminance(rgb_pixel(1, 0, 0)).planes[0](0, 0) ==
        doctest::Approx(0.299).epsilon(1e-6));
  CHECK(luminance(rgb_pixel(0, 1, 0)).planes[0](0, 0) ==
        doctest::Approx(0.587).epsilon(1e-6));
  CHECK(luminance(rgb_pixel(0, 0, 1)).planes[0](0, 0) ==
        doctest::Approx(0.114).epsilon(1e-6));
  // weighted-sum oracle on a mixed pixel
  CHECK(luminance(rgb_pixel(0.5f, 0.25f, 0.75f)).planes[0](0, 0) ==
        doctest::Approx(0.299 * 0.5 + 0.587 * 0.25 + 0.114 * 0.75).epsilon(1e-6));
}

TEST_CASE("luminance rejects unsupported channel counts") {
  RasterImage image;
  image.planes.assign(2, Planef::Constant(1, 1, 0.0f));
  try {
    luminance(image);
    FAIL("expected UnsupportedChannelCount");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedChannelCount);
  }
}

TEST_CASE("luminance scales exactly with power-of-two channel scaling") {
  testutil::Rng rng(11);
  RasterImage image;
  for (int ch = 0; ch < 3; ++ch) {
    Planef plane(4, 5);
    for (int i = 0; i < plane.size(); ++i) plane.data()[i] = float(rng.uniform());
    image.planes.push_back(plane);
  }
  for (const float c : {0.5f, 0.25f}) {
    RasterImage scaled;
    for (const Planef& plane : image.planes) scaled.planes.push_back(plane * c);
    const Planef expected = luminance(image).planes[0] * c;
    CHECK((luminance(scaled).planes[0] == expected).all());
  }
  // arbitrary scales hold to rounding error
  RasterImage scaled;
  for (const Planef& plane : image.planes) scaled.planes.push_back(plane * 0.7f);
  CHECK(((luminance(scaled).planes[0] - luminance(image).planes[0] * 0.7f).abs() < 1e-6f)
            .all());
}

TEST_CASE("confusion counts are conserved across partitions") {
  testutil::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    ConfusionCounts whole;
    ConfusionCounts parts[3];
    const int n = rng.uniform_int(1, 40);
    for (int i = 0; i < n; ++i) {
      const bool pred = rng.uniform() < 0.5;
      const bool truth = rng.uniform() < 0.5;
      ConfusionCounts& part = parts[rng.uniform_int(0, 2)];
      for (ConfusionCounts* c : {&whole, &part}) {
        if (pred && truth) ++c->tp;
        else if (!pred && !truth) ++c->tn;
        else if (pred) ++c->fp;
        else ++c->fn;
      }
    }
    CHECK(whole.total() == n);
    CHECK(parts[0].tp + parts[1].tp + parts[2].tp == whole.tp);
    CHECK(parts[0].tn + parts[1].tn + parts[2].tn == whole.tn);
    CHECK(parts[0].fp + parts[1].fp + parts[2].fp == whole.fp);
    CHECK(parts[0].fn + parts[1].fn + parts[2].fn == whole.fn);
    CHECK(parts[0].total() + parts[1].total() + parts[2].total() == whole.total());
  }
}
