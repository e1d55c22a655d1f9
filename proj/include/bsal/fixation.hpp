#pragma once

#include <cstdint>

#include "bsal/types.hpp"

namespace bsal {

/// Binary per-cell fixation presence. Cell (x, y) is true when some fixation
/// point floors into it.
struct BinaryFixationMap {
  Plane<bool> fixated;

  int width() const { return static_cast<int>(fixated.cols()); }
  int height() const { return static_cast<int>(fixated.rows()); }
  std::int64_t count() const { return fixated.count(); }
};

/// Dispersion-threshold (I-DT) fixation detection parameters. The dispersion
/// metric is (max x - min x) + (max y - min y) over the window.
struct IdtParams {
  double dispersion_threshold_px = 25.0;
  double duration_threshold_ms = 100.0;
};

/// Marks cell (floor(x), floor(y)) for each point; duplicates collapse.
/// Throws OutOfFrame listing every point outside [0,width) x [0,height).
BinaryFixationMap build_fixation_map(const FixationSet& fixations, int width,
                                     int height);

/// I-DT over raw gaze samples: grow a window while its dispersion stays within
/// the threshold; emit a fixation (centroid, onset timestamp, window duration)
/// when the window spans at least the duration threshold, otherwise slide by
/// one sample. Requires strictly increasing timestamps on every sample.
FixationSet detect_fixations_idt(const FixationSet& gaze, const IdtParams& params = {});

/// Number of points with box.x <= x < box.x + box.w and likewise for y.
std::int64_t fixations_in_box(const FixationSet& fixations, const BoundingBox& box);

}  // namespace bsal
