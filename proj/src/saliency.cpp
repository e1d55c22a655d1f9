#include "bsal/saliency.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <sstream>

#include "bsal/image_ops.hpp"
#include "bsal/io.hpp"

namespace bsal {

namespace {

using ComplexPlane = Plane<std::complex<double>>;

// Row-column 2-D DFT on top of Eigen's FFT module.
ComplexPlane fft2(const Planed& src) {
  const Eigen::Index rows = src.rows();
  const Eigen::Index cols = src.cols();
  Eigen::FFT<double> fft;
  ComplexPlane out(rows, cols);

  Eigen::VectorXcd line_in(cols), line_out(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) line_in[c] = std::complex<double>(src(r, c), 0.0);
    fft.fwd(line_out, line_in);
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = line_out[c];
  }
  Eigen::VectorXcd col_in(rows), col_out(rows);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) col_in[r] = out(r, c);
    fft.fwd(col_out, col_in);
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = col_out[r];
  }
  return out;
}

// Inverse 2-D DFT (scaled by 1 / (rows * cols)).
ComplexPlane ifft2(const ComplexPlane& src) {
  const Eigen::Index rows = src.rows();
  const Eigen::Index cols = src.cols();
  Eigen::FFT<double> fft;
  ComplexPlane out(rows, cols);

  Eigen::VectorXcd line_in(cols), line_out(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) line_in[c] = src(r, c);
    fft.inv(line_out, line_in);
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = line_out[c];
  }
  Eigen::VectorXcd col_in(rows), col_out(rows);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) col_in[r] = out(r, c);
    fft.inv(col_out, col_in);
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = col_out[r];
  }
  return out;
}

SaliencyMap normalize_plane(Planed values) {
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  SaliencyMap out;
  if (hi == lo) {
    out.values = Planed::Zero(values.rows(), values.cols());
  } else {
    out.values = (values - lo) / (hi - lo);
  }
  out.normalized = true;
  return out;
}

}  // namespace

void SpectralResidualParams::validate() const {
  if (working_width < 1 || mean_filter_size < 1 || mean_filter_size % 2 == 0 ||
      working_width < mean_filter_size || post_blur_sigma <= 0.0 ||
      amplitude_epsilon <= 0.0) {
    std::ostringstream msg;
    msg << "spectral-residual params out of range (working_width=" << working_width
        << ", mean_filter_size=" << mean_filter_size
        << ", post_blur_sigma=" << post_blur_sigma
        << ", amplitude_epsilon=" << amplitude_epsilon << ")";
    throw Error(ErrorCode::InvalidParams, msg.str());
  }
}

SaliencyMap spectral_residual(const RasterImage& image,
                              const SpectralResidualParams& params) {
  params.validate();
  const int width = image.width();
  const int height = image.height();
  if (width < params.mean_filter_size || height < params.mean_filter_size) {
    std::ostringstream msg;
    msg << width << "x" << height << " image is smaller than the "
        << params.mean_filter_size << "x" << params.mean_filter_size << " mean filter";
    throw Error(ErrorCode::ImageTooSmall, msg.str());
  }

  // 1-2: luma, working scale
  const Planed gray = luminance(image).planes[0].cast<double>();
  const int work_w = params.working_width;
  const int work_h = std::max<int>(
      1, static_cast<int>(std::lround(double(height) * double(work_w) / double(width))));
  const Planed small = resize_bilinear(gray, work_h, work_w);

  // A constant field has no spectral structure to stand out from.
  if (small.maxCoeff() == small.minCoeff()) {
    SaliencyMap out;
    out.values = Planed::Zero(height, width);
    out.normalized = true;
    return out;
  }

  // 3: amplitude / phase split
  const ComplexPlane spectrum = fft2(small);
  const Planed amplitude = spectrum.abs();
  const Planed phase = spectrum.arg();

  // 4-5: log amplitude minus its local mean
  const Planed log_amp = (amplitude + params.amplitude_epsilon).log();
  const Planed residual = log_amp - mean_filter(log_amp, params.mean_filter_size);

  // 6: reconstruct with the original phase, back to the spatial domain
  ComplexPlane recon(work_h, work_w);
  for (Eigen::Index r = 0; r < recon.rows(); ++r)
    for (Eigen::Index c = 0; c < recon.cols(); ++c)
      recon(r, c) = std::polar(std::exp(residual(r, c)), phase(r, c));
  const Planed energy = ifft2(recon).abs2();

  // 7-9: smooth, upsample, normalize
  const Planed blurred = gaussian_blur(energy, params.post_blur_sigma);
  return normalize_plane(resize_bilinear(blurred, height, width));
}

SaliencyMap normalize_map(const SaliencyMap& map) {
  if (map.values.size() == 0) {
    throw Error(ErrorCode::DimensionError, "cannot normalize an empty map");
  }
  return normalize_plane(map.values);
}

SaliencyMap import_external_map(std::istream& source, int target_width,
                                int target_height) {
  if (target_width <= 0 || target_height <= 0) {
    throw Error(ErrorCode::DimensionError,
                "target dimensions must be positive, got " +
                    std::to_string(target_width) + "x" + std::to_string(target_height));
  }
  SaliencyMap decoded = decode_map(source, "<stream>");
  decoded.values = resize_bilinear(decoded.values, target_height, target_width);
  return normalize_map(decoded);
}

}  // namespace bsal
