#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsal/types.hpp"

namespace bsal {

// Raster resampling and filtering kernels shared by the saliency pipeline.
// All functions are pure, deterministic, and use replicate (clamp-to-edge)
// border handling.

/// Bilinear resampling with pixel-center alignment:
/// src coordinate = (dst + 0.5) * (in / out) - 0.5, clamped to the frame.
template <class Scalar>
Plane<Scalar> resize_bilinear(const Plane<Scalar>& src, Eigen::Index out_rows,
                              Eigen::Index out_cols) {
  const Eigen::Index in_rows = src.rows();
  const Eigen::Index in_cols = src.cols();
  if (out_rows == in_rows && out_cols == in_cols) return src;

  Plane<Scalar> dst(out_rows, out_cols);
  const double sy = double(in_rows) / double(out_rows);
  const double sx = double(in_cols) / double(out_cols);
  for (Eigen::Index r = 0; r < out_rows; ++r) {
    double fy = (double(r) + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, double(in_rows - 1));
    const Eigen::Index y0 = static_cast<Eigen::Index>(std::floor(fy));
    const Eigen::Index y1 = std::min(y0 + 1, in_rows - 1);
    const double wy = fy - double(y0);
    for (Eigen::Index c = 0; c < out_cols; ++c) {
      double fx = (double(c) + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, double(in_cols - 1));
      const Eigen::Index x0 = static_cast<Eigen::Index>(std::floor(fx));
      const Eigen::Index x1 = std::min(x0 + 1, in_cols - 1);
      const double wx = fx - double(x0);
      const double top = (1.0 - wx) * double(src(y0, x0)) + wx * double(src(y0, x1));
      const double bot = (1.0 - wx) * double(src(y1, x0)) + wx * double(src(y1, x1));
      dst(r, c) = static_cast<Scalar>((1.0 - wy) * top + wy * bot);
    }
  }
  return dst;
}

/// size x size box mean, replicate borders. `size` must be odd and positive.
template <class Scalar>
Plane<Scalar> mean_filter(const Plane<Scalar>& src, int size) {
  const Eigen::Index rows = src.rows();
  const Eigen::Index cols = src.cols();
  const int radius = size / 2;
  const double inv_count = 1.0 / (double(size) * double(size));

  Plane<Scalar> dst(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const Eigen::Index y = std::clamp<Eigen::Index>(r + dy, 0, rows - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          const Eigen::Index x = std::clamp<Eigen::Index>(c + dx, 0, cols - 1);
          acc += double(src(y, x));
        }
      }
      dst(r, c) = static_cast<Scalar>(acc * inv_count);
    }
  }
  return dst;
}

/// Separable Gaussian, kernel radius ceil(3*sigma), taps normalized to sum 1,
/// replicate borders.
template <class Scalar>
Plane<Scalar> gaussian_blur(const Plane<Scalar>& src, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-double(i) * double(i) / (2.0 * sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;

  const Eigen::Index rows = src.rows();
  const Eigen::Index cols = src.cols();

  Plane<Scalar> horiz(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const Eigen::Index x = std::clamp<Eigen::Index>(c + i, 0, cols - 1);
        acc += taps[i + radius] * double(src(r, x));
      }
      horiz(r, c) = static_cast<Scalar>(acc);
    }
  }
  Plane<Scalar> dst(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const Eigen::Index y = std::clamp<Eigen::Index>(r + i, 0, rows - 1);
        acc += taps[i + radius] * double(horiz(y, c));
      }
      dst(r, c) = static_cast<Scalar>(acc);
    }
  }
  return dst;
}

}  // namespace bsal
