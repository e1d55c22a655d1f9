#pragma once

#include <istream>

#include "bsal/types.hpp"

namespace bsal {

/// Knobs of the spectral-residual pipeline. The transform runs at a reduced
/// working scale; `working_width` fixes the width and the height follows the
/// input aspect ratio.
struct SpectralResidualParams {
  int working_width = 64;
  int mean_filter_size = 3;     // odd box filter applied to the log amplitude
  double post_blur_sigma = 3.0; // Gaussian sigma in working-scale pixels
  double amplitude_epsilon = 1e-12;

  void validate() const;  // throws InvalidParams
};

/// Spectral-residual saliency:
///   1. collapse to luma and resize to the working scale,
///   2. 2-D DFT, split into amplitude and phase,
///   3. residual = log(amplitude + eps) minus its box-filtered version,
///   4. reconstruct exp(residual) * exp(i*phase), inverse DFT,
///      squared modulus,
///   5. Gaussian blur, resize back to input size, min-max normalize.
/// Output dimensions equal input dimensions; the result is deterministic.
SaliencyMap spectral_residual(const RasterImage& image,
                              const SpectralResidualParams& params = {});

/// Min-max rescale to [0, 1]. A constant map rescales to all zeros.
SaliencyMap normalize_map(const SaliencyMap& map);

/// Decodes a grayscale map (binary/ASCII graymap or salf container), resizes
/// bilinearly to the target dimensions if needed, then normalizes.
SaliencyMap import_external_map(std::istream& source, int target_width,
                                int target_height);

}  // namespace bsal
