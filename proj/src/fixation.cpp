#include "bsal/fixation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bsal {

BinaryFixationMap build_fixation_map(const FixationSet& fixations, int width,
                                     int height) {
  std::ostringstream offenders;
  int n_offending = 0;
  for (size_t i = 0; i < fixations.points.size(); ++i) {
    const FixationPoint& p = fixations.points[i];
    if (!(p.x >= 0.0 && p.x < double(width) && p.y >= 0.0 && p.y < double(height))) {
      if (n_offending++) offenders << ", ";
      offenders << "#" << i << " (" << p.x << "," << p.y << ")";
    }
  }
  if (n_offending > 0) {
    std::ostringstream msg;
    msg << n_offending << " point(s) outside the " << width << "x" << height
        << " frame: " << offenders.str();
    throw Error(ErrorCode::OutOfFrame, msg.str());
  }

  BinaryFixationMap map;
  map.fixated = Plane<bool>::Constant(height, width, false);
  for (const FixationPoint& p : fixations.points) {
    map.fixated(static_cast<Eigen::Index>(std::floor(p.y)),
                static_cast<Eigen::Index>(std::floor(p.x))) = true;
  }
  return map;
}

FixationSet detect_fixations_idt(const FixationSet& gaze, const IdtParams& params) {
  const auto& samples = gaze.points;
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].timestamp_ms) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  "sample #" + std::to_string(i) + " has no timestamp");
    }
    if (i > 0 && !(*samples[i].timestamp_ms > *samples[i - 1].timestamp_ms)) {
      std::ostringstream msg;
      msg << "timestamp " << *samples[i].timestamp_ms << " at sample #" << i
          << " does not increase over " << *samples[i - 1].timestamp_ms;
      throw Error(ErrorCode::NonMonotonicTimestamps, msg.str());
    }
  }

  FixationSet out;
  out.image_id = gaze.image_id;
  size_t start = 0;
  while (start < samples.size()) {
    double min_x = samples[start].x, max_x = samples[start].x;
    double min_y = samples[start].y, max_y = samples[start].y;
    size_t end = start;  // inclusive window [start, end]
    while (end + 1 < samples.size()) {
      const FixationPoint& next = samples[end + 1];
      const double disp = (std::max(max_x, next.x) - std::min(min_x, next.x)) +
                          (std::max(max_y, next.y) - std::min(min_y, next.y));
      if (disp > params.dispersion_threshold_px) break;
      min_x = std::min(min_x, next.x);
      max_x = std::max(max_x, next.x);
      min_y = std::min(min_y, next.y);
      max_y = std::max(max_y, next.y);
      ++end;
    }
    const double duration = *samples[end].timestamp_ms - *samples[start].timestamp_ms;
    if (duration >= params.duration_threshold_ms) {
      FixationPoint fix;
      double sum_x = 0.0, sum_y = 0.0;
      for (size_t i = start; i <= end; ++i) {
        sum_x += samples[i].x;
        sum_y += samples[i].y;
      }
      const double n = double(end - start + 1);
      fix.x = sum_x / n;
      fix.y = sum_y / n;
      fix.timestamp_ms = *samples[start].timestamp_ms;
      fix.duration_ms = duration;
      out.points.push_back(fix);
      start = end + 1;
    } else {
      ++start;
    }
  }
  return out;
}

std::int64_t fixations_in_box(const FixationSet& fixations, const BoundingBox& box) {
  std::int64_t count = 0;
  for (const FixationPoint& p : fixations.points) {
    if (p.x >= double(box.x) && p.x < double(box.x + box.w) &&
        p.y >= double(box.y) && p.y < double(box.y + box.h)) {
      ++count;
    }
  }
  return count;
}

}  // namespace bsal
