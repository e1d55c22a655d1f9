#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bsal/error.hpp"

namespace bsal {

// Dense row-major pixel plane. Index order is (row, col) = (y, x), origin at
// the top-left corner, x rightward, y downward; pixel (x, y) covers the unit
// square [x, x+1) x [y, y+1).
template <class Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Planef = Plane<float>;
using Planed = Plane<double>;

/// Decoded image. Pixel values live in [0, 1]; 8-bit sources are mapped by
/// v / maxval at decode time. Either one luma plane or three planes (R, G, B).
struct RasterImage {
  std::vector<Planef> planes;

  int width() const { return planes.empty() ? 0 : static_cast<int>(planes[0].cols()); }
  int height() const { return planes.empty() ? 0 : static_cast<int>(planes[0].rows()); }
  int channels() const { return static_cast<int>(planes.size()); }
};

/// Per-pixel salience intensities. `normalized` marks maps that have been
/// min-max rescaled to [0, 1] (constant maps rescale to all zeros).
struct SaliencyMap {
  Planed values;
  bool normalized = false;

  int width() const { return static_cast<int>(values.cols()); }
  int height() const { return static_cast<int>(values.rows()); }
};

/// Axis-aligned region, top-left corner (x, y), extents (w, h) in pixels.
/// Boxes may be supplied partially outside the image frame; use sites clip.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;
  std::string image_id;

  std::int64_t area() const { return std::int64_t(w) * std::int64_t(h); }
  bool operator==(const BoundingBox&) const = default;
};

struct Detection {
  BoundingBox box;
  double confidence = 0.0;

  const std::string& image_id() const { return box.image_id; }
};

struct FixationPoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> timestamp_ms;
  std::optional<double> duration_ms;
};

/// Ordered fixation points of one image/frame, in image pixel coordinates.
struct FixationSet {
  std::string image_id;
  std::vector<FixationPoint> points;
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

enum class Split { Train, Val, Test };

const char* to_string(Split split);
Split split_from_string(const std::string& s);  // throws ParseError

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path image_path;
  std::filesystem::path annotation_path;
  std::optional<std::filesystem::path> detection_path;
  std::optional<std::filesystem::path> gaze_path;
  Split split = Split::Train;
};

/// Binds images, annotations, detections and gaze files; ids are unique and
/// all referenced paths were resolvable at load time.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

/// Intersects `box` with the frame [0, width) x [0, height).
/// Throws EmptyIntersection when the box lies entirely outside.
BoundingBox clip_box(const BoundingBox& box, int width, int height);

/// Collapses an image to one luma plane with weights (0.299, 0.587, 0.114)
/// on (R, G, B). A 1-channel image is returned unchanged.
RasterImage luminance(const RasterImage& image);

}  // namespace bsal
