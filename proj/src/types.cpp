#include "bsal/types.hpp"

#include <algorithm>
#include <sstream>

namespace bsal {

const char* to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw Error(ErrorCode::ParseError, "unknown split label '" + s + "'");
}

BoundingBox clip_box(const BoundingBox& box, int width, int height) {
  const int x0 = std::max(box.x, 0);
  const int y0 = std::max(box.y, 0);
  const int x1 = std::min(box.x + box.w, width);
  const int y1 = std::min(box.y + box.h, height);
  if (x1 <= x0 || y1 <= y0) {
    std::ostringstream msg;
    msg << "box (" << box.x << "," << box.y << "," << box.w << "," << box.h
        << ") lies outside the " << width << "x" << height << " frame";
    throw Error(ErrorCode::EmptyIntersection, msg.str());
  }
  BoundingBox out = box;
  out.x = x0;
  out.y = y0;
  out.w = x1 - x0;
  out.h = y1 - y0;
  return out;
}

RasterImage luminance(const RasterImage& image) {
  if (image.channels() == 1) return image;
  if (image.channels() != 3) {
    throw Error(ErrorCode::UnsupportedChannelCount,
                std::to_string(image.channels()) + " channels (expected 1 or 3)");
  }
  // double accumulation: the weights sum to < 1 in double, so luma stays in
  // [0, 1] even for a pure-white pixel
  RasterImage out;
  out.planes.push_back((0.299 * image.planes[0].cast<double>() +
                        0.587 * image.planes[1].cast<double>() +
                        0.114 * image.planes[2].cast<double>())
                           .cast<float>());
  return out;
}

}  // namespace bsal
