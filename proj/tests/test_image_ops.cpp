#include <doctest.h>

#include "bsal/image_ops.hpp"
#include "test_util.hpp"

using namespace bsal;

TEST_CASE("resize_bilinear at identical dimensions is the identity") {
  testutil::Rng rng(3);
  Planed src(5, 7);
  for (int i = 0; i < src.size(); ++i) src.data()[i] = rng.uniform();
  CHECK((resize_bilinear(src, 5, 7) == src).all());
}

TEST_CASE("resize_bilinear 2x2 -> 1x1 averages the four pixels") {
  Planed src(2, 2);
  src << 1.0, 2.0, 3.0, 4.0;
  const Planed dst = resize_bilinear(src, 1, 1);
  CHECK(dst(0, 0) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("resize_bilinear reproduces linear ramps away from the border") {
  // f(x, y) = x at source scale; upsampling by 2 keeps interior samples on
  // the same linear function.
  Planed src(4, 8);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 8; ++c) src(r, c) = double(c);
  const Planed dst = resize_bilinear(src, 8, 16);
  for (int r = 2; r < 6; ++r) {
    for (int c = 2; c < 14; ++c) {
      const double expected = (c + 0.5) * 0.5 - 0.5;
      CHECK(dst(r, c) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("mean_filter matches the hand-computed 3x3 replicate result") {
  Planed src(3, 3);
  src << 1, 2, 3,
         4, 5, 6,
         7, 8, 9;
  const Planed dst = mean_filter(src, 3);
  // corner (0,0): replicate pads to {1,1,2; 1,1,2; 4,4,5} -> mean 21/9
  CHECK(dst(0, 0) == doctest::Approx(21.0 / 9.0).epsilon(1e-12));
  // center averages the full block
  CHECK(dst(1, 1) == doctest::Approx(5.0).epsilon(1e-12));
  // edge (0,1): rows {1,2,3; 1,2,3; 4,5,6} -> mean 27/9
  CHECK(dst(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mean_filter keeps constant fields constant") {
  const Planed src = Planed::Constant(6, 9, 0.4);
  CHECK(((mean_filter(src, 3) - 0.4).abs() < 1e-15).all());
}

TEST_CASE("gaussian_blur keeps constant fields constant") {
  const Planed src = Planed::Constant(8, 8, 1.25);
  CHECK(((gaussian_blur(src, 1.5) - 1.25).abs() < 1e-12).all());
}

TEST_CASE("gaussian_blur preserves mass for an interior impulse") {
  Planed src = Planed::Zero(21, 21);
  src(10, 10) = 1.0;
  const Planed dst = gaussian_blur(src, 2.0);  // radius 6, fits inside
  CHECK(dst.sum() == doctest::Approx(1.0).epsilon(1e-12));
  // symmetric response
  CHECK(dst(10, 8) == doctest::Approx(dst(10, 12)).epsilon(1e-12));
  CHECK(dst(8, 10) == doctest::Approx(dst(12, 10)).epsilon(1e-12));
  CHECK(dst(8, 10) == doctest::Approx(dst(10, 8)).epsilon(1e-12));
  // peak stays at the impulse
  Eigen::Index r, c;
  dst.maxCoeff(&r, &c);
  CHECK(r == 10);
  CHECK(c == 10);
}
