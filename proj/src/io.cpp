#include "bsal/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace bsal {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string at_line(const fs::path& path, size_t line) {
  return path.string() + ":" + std::to_string(line);
}

double parse_double(const std::string& token, const fs::path& path, size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ParseError,
                at_line(path, line) + ": '" + token + "' is not a number");
  }
  return value;
}

// Box coordinates are pixel-level; sub-pixel annotation values round half up.
int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const size_t first = field.find_first_not_of(" \t\r");
    const size_t last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool is_comment_or_blank(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::ifstream open_input(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path, mode);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  return in;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Reads source lines, dispatching non-comment rows to `handle(tokens, line_no)`.
template <class Handler>
void for_each_row(std::istream& in, Handler&& handle) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    handle(line, line_no);
  }
}

}  // namespace

// --- dataset ingestion ---

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in = open_input(path);
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  for_each_row(in, [&](const std::string& line, size_t line_no) {
    const std::vector<std::string> fields = split_whitespace(line);
    if (fields.size() != 6) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": expected 6 fields "
                  "(id image annotations detections gaze split), got " +
                      std::to_string(fields.size()));
    }
    ManifestEntry entry;
    entry.image_id = fields[0];
    if (!seen_ids.insert(entry.image_id).second) {
      throw Error(ErrorCode::DuplicateImageId,
                  at_line(path, line_no) + ": image id '" + entry.image_id +
                      "' appears twice");
    }
    auto resolve = [&](const std::string& field) { return base / field; };
    entry.image_path = resolve(fields[1]);
    if (fields[2] == "-") {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": annotation reference is required");
    }
    entry.annotation_path = resolve(fields[2]);
    if (fields[3] != "-") entry.detection_path = resolve(fields[3]);
    if (fields[4] != "-") entry.gaze_path = resolve(fields[4]);
    try {
      entry.split = split_from_string(fields[5]);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, at_line(path, line_no) + ": " + e.what());
    }

    for (const fs::path* ref : {&entry.image_path, &entry.annotation_path}) {
      if (!fs::exists(*ref)) {
        throw Error(ErrorCode::MissingFile,
                    at_line(path, line_no) + ": " + ref->string());
      }
    }
    for (const auto& ref : {entry.detection_path, entry.gaze_path}) {
      if (ref && !fs::exists(*ref)) {
        throw Error(ErrorCode::MissingFile,
                    at_line(path, line_no) + ": " + ref->string());
      }
    }
    manifest.entries.push_back(std::move(entry));
  });
  return manifest;
}

namespace {

constexpr double kMaxCoordinate = 1 << 28;  // keeps x + w clear of int overflow

BoundingBox parse_box_tokens(const std::vector<std::string>& tokens,
                             const std::string& image_id, const fs::path& path,
                             size_t line_no) {
  double raw[4];
  for (int i = 0; i < 4; ++i) {
    raw[i] = parse_double(tokens[size_t(i)], path, line_no);
    if (!(raw[i] >= -kMaxCoordinate && raw[i] <= kMaxCoordinate)) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": coordinate " + tokens[size_t(i)] +
                      " out of range");
    }
  }
  BoundingBox box;
  box.x = round_half_up(raw[0]);
  box.y = round_half_up(raw[1]);
  box.w = round_half_up(raw[2]);
  box.h = round_half_up(raw[3]);
  box.image_id = image_id;
  if (box.w < 1 || box.h < 1) {
    throw Error(ErrorCode::InvalidBox,
                at_line(path, line_no) + ": degenerate box with extents " +
                    std::to_string(box.w) + "x" + std::to_string(box.h));
  }
  return box;
}

}  // namespace

std::vector<BoundingBox> load_annotations(const fs::path& path,
                                          const std::string& image_id) {
  std::ifstream in = open_input(path);
  std::vector<BoundingBox> boxes;
  for_each_row(in, [&](const std::string& line, size_t line_no) {
    const std::vector<std::string> tokens = split_whitespace(line);
    if (tokens.size() != 4) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": expected 4 fields (x y w h), got " +
                      std::to_string(tokens.size()));
    }
    boxes.push_back(parse_box_tokens(tokens, image_id, path, line_no));
  });
  return boxes;
}

std::vector<Detection> load_detections(const fs::path& path,
                                       const std::string& image_id) {
  std::ifstream in = open_input(path);
  std::vector<Detection> detections;
  for_each_row(in, [&](const std::string& line, size_t line_no) {
    const std::vector<std::string> tokens = split_whitespace(line);
    if (tokens.size() != 5) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) +
                      ": expected 5 fields (x y w h confidence), got " +
                      std::to_string(tokens.size()));
    }
    Detection det;
    det.box = parse_box_tokens(tokens, image_id, path, line_no);
    det.confidence = parse_double(tokens[4], path, line_no);
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
      throw Error(ErrorCode::ConfidenceOutOfRange,
                  at_line(path, line_no) + ": confidence " + tokens[4] +
                      " outside [0, 1]");
    }
    detections.push_back(std::move(det));
  });
  return detections;
}

FixationSet load_gaze(const fs::path& path, const std::string& image_id) {
  std::ifstream in = open_input(path);
  std::string header_line;
  size_t line_no = 0;
  do {
    if (!std::getline(in, header_line)) {
      throw Error(ErrorCode::ParseError, at_line(path, line_no + 1) + ": missing header");
    }
    ++line_no;
  } while (is_comment_or_blank(header_line));

  const std::vector<std::string> header = split_csv(header_line);
  static const std::vector<std::string> expected = {"x", "y", "timestamp_ms",
                                                    "duration_ms"};
  if (header.size() < 2 || header.size() > 4) {
    throw Error(ErrorCode::ParseError,
                at_line(path, line_no) + ": header must name 2 to 4 columns, got " +
                    std::to_string(header.size()));
  }
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] != expected[i]) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": column " + std::to_string(i + 1) +
                      " must be '" + expected[i] + "', got '" + header[i] + "'");
    }
  }
  const size_t n_columns = header.size();

  FixationSet set;
  set.image_id = image_id;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != n_columns) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": expected " + std::to_string(n_columns) +
                      " fields, got " + std::to_string(fields.size()));
    }
    FixationPoint point;
    point.x = parse_double(fields[0], path, line_no);
    point.y = parse_double(fields[1], path, line_no);
    if (n_columns >= 3) point.timestamp_ms = parse_double(fields[2], path, line_no);
    if (n_columns >= 4) point.duration_ms = parse_double(fields[3], path, line_no);
    if ((point.timestamp_ms && *point.timestamp_ms < 0.0) ||
        (point.duration_ms && *point.duration_ms < 0.0)) {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": timestamps and durations must be nonnegative");
    }
    set.points.push_back(point);
  }
  return set;
}

// --- portable graymap / pixmap family ---

namespace {

struct PnmHeader {
  int magic = 0;  // 2, 3, 5 or 6
  int width = 0;
  int height = 0;
  int maxval = 0;
};

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_pnm_token(std::istream& in, const std::string& origin) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) continue;
    break;
  }
  if (ch == EOF) {
    throw Error(ErrorCode::FormatError, origin + ": truncated header");
  }
  token.push_back(static_cast<char>(ch));
  while ((ch = in.get()) != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
  }
  if (ch == '#') in.unget();
  return token;
}

int parse_pnm_int(std::istream& in, const std::string& origin, const char* what,
                  int lo, int hi) {
  const std::string token = next_pnm_token(in, origin);
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::FormatError,
                origin + ": '" + token + "' is not a valid " + what);
  }
  if (value < lo || value > hi) {
    throw Error(ErrorCode::FormatError,
                origin + ": " + what + " " + token + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return value;
}

constexpr int kMaxPnmDimension = 1 << 16;
constexpr std::int64_t kMaxPixels = std::int64_t(1) << 26;

PnmHeader read_pnm_header(std::istream& in, const std::string& origin) {
  const std::string magic = next_pnm_token(in, origin);
  PnmHeader header;
  if (magic == "P2") header.magic = 2;
  else if (magic == "P3") header.magic = 3;
  else if (magic == "P5") header.magic = 5;
  else if (magic == "P6") header.magic = 6;
  else {
    throw Error(ErrorCode::UnsupportedMagic,
                origin + ": '" + magic + "' is not a supported graymap/pixmap magic");
  }
  header.width = parse_pnm_int(in, origin, "width", 1, kMaxPnmDimension);
  header.height = parse_pnm_int(in, origin, "height", 1, kMaxPnmDimension);
  header.maxval = parse_pnm_int(in, origin, "maxval", 1, 255);
  if (std::int64_t(header.width) * header.height > kMaxPixels) {
    throw Error(ErrorCode::FormatError,
                origin + ": raster of " + std::to_string(header.width) + "x" +
                    std::to_string(header.height) + " pixels exceeds the supported size");
  }
  return header;
}

// Raw samples in row-major interleaved order.
std::vector<int> read_pnm_samples(std::istream& in, const PnmHeader& header,
                                  const std::string& origin) {
  const size_t count = size_t(header.width) * size_t(header.height) *
                       (header.magic == 3 || header.magic == 6 ? 3 : 1);
  std::vector<int> samples(count);
  if (header.magic == 5 || header.magic == 6) {
    // binary: exactly one whitespace byte separates maxval from the raster
    std::vector<unsigned char> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(count));
    if (size_t(in.gcount()) != count) {
      throw Error(ErrorCode::FormatError,
                  origin + ": pixel data truncated after " +
                      std::to_string(in.gcount()) + " of " + std::to_string(count) +
                      " bytes");
    }
    for (size_t i = 0; i < count; ++i) samples[i] = bytes[i];
  } else {
    for (size_t i = 0; i < count; ++i) {
      samples[i] = parse_pnm_int(in, origin, "sample", 0, header.maxval);
    }
  }
  for (size_t i = 0; i < count; ++i) {
    if (samples[i] > header.maxval) {
      throw Error(ErrorCode::FormatError,
                  origin + ": sample " + std::to_string(samples[i]) +
                      " exceeds maxval " + std::to_string(header.maxval));
    }
  }
  return samples;
}

}  // namespace

RasterImage decode_image(std::istream& in, const std::string& origin) {
  const PnmHeader header = read_pnm_header(in, origin);
  const std::vector<int> samples = read_pnm_samples(in, header, origin);
  const int channels = (header.magic == 3 || header.magic == 6) ? 3 : 1;
  const float scale = 1.0f / float(header.maxval);

  RasterImage image;
  for (int ch = 0; ch < channels; ++ch) {
    image.planes.emplace_back(header.height, header.width);
  }
  size_t i = 0;
  for (int r = 0; r < header.height; ++r) {
    for (int c = 0; c < header.width; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        image.planes[ch](r, c) = float(samples[i++]) * scale;
      }
    }
  }
  return image;
}

RasterImage read_image(const fs::path& path) {
  std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
  return decode_image(in, path.string());
}

// --- saliency map codecs ---

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff),
  };
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32le(std::istream& in, const std::string& origin, const char* what) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (in.gcount() != 4) {
    throw Error(ErrorCode::FormatError, origin + ": truncated " + std::string(what));
  }
  return std::uint32_t(bytes[0]) | (std::uint32_t(bytes[1]) << 8) |
         (std::uint32_t(bytes[2]) << 16) | (std::uint32_t(bytes[3]) << 24);
}

constexpr std::uint32_t kSalfVersion = 1;

SaliencyMap decode_salf(std::istream& in, const std::string& origin) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "SALF", 4) != 0) {
    throw Error(ErrorCode::UnsupportedMagic, origin + ": not a salf container");
  }
  const std::uint32_t version = get_u32le(in, origin, "version");
  if (version != kSalfVersion) {
    throw Error(ErrorCode::FormatError,
                origin + ": unsupported salf version " + std::to_string(version));
  }
  const std::uint32_t width = get_u32le(in, origin, "width");
  const std::uint32_t height = get_u32le(in, origin, "height");
  if (width == 0 || height == 0 || width > kMaxPnmDimension ||
      height > kMaxPnmDimension || std::int64_t(width) * height > kMaxPixels) {
    throw Error(ErrorCode::FormatError,
                origin + ": bad dimensions " + std::to_string(width) + "x" +
                    std::to_string(height));
  }

  SaliencyMap map;
  map.values = Planed(height, width);
  const size_t count = size_t(width) * size_t(height);
  std::vector<unsigned char> bytes(count * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
  if (size_t(in.gcount()) != bytes.size()) {
    throw Error(ErrorCode::FormatError,
                origin + ": value data truncated after " + std::to_string(in.gcount()) +
                    " of " + std::to_string(bytes.size()) + " bytes");
  }
  for (size_t i = 0; i < count; ++i) {
    const std::uint32_t u = std::uint32_t(bytes[4 * i]) |
                            (std::uint32_t(bytes[4 * i + 1]) << 8) |
                            (std::uint32_t(bytes[4 * i + 2]) << 16) |
                            (std::uint32_t(bytes[4 * i + 3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::FormatError,
                  origin + ": non-finite value at index " + std::to_string(i));
    }
    map.values.data()[i] = double(f);
  }
  return map;
}

SaliencyMap decode_graymap(std::istream& in, const std::string& origin) {
  const PnmHeader header = read_pnm_header(in, origin);
  if (header.magic == 3 || header.magic == 6) {
    throw Error(ErrorCode::FormatError,
                origin + ": expected a grayscale map, got a 3-channel pixmap");
  }
  const std::vector<int> samples = read_pnm_samples(in, header, origin);
  SaliencyMap map;
  map.values = Planed(header.height, header.width);
  const double scale = 1.0 / double(header.maxval);
  for (size_t i = 0; i < samples.size(); ++i) {
    map.values.data()[i] = double(samples[i]) * scale;
  }
  return map;
}

}  // namespace

SaliencyMap decode_map(std::istream& in, const std::string& origin) {
  const int first = in.peek();
  if (first == 'S') return decode_salf(in, origin);
  if (first == 'P') return decode_graymap(in, origin);
  throw Error(ErrorCode::UnsupportedMagic,
              origin + ": unrecognized map container (expected SALF or graymap)");
}

SaliencyMap read_map(const fs::path& path) {
  std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
  return decode_map(in, path.string());
}

void write_pgm(const SaliencyMap& map, const fs::path& path) {
  if (!map.normalized) {
    throw Error(ErrorCode::FormatError,
                "map must be normalized before 8-bit graymap encoding");
  }
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
  std::vector<unsigned char> bytes(size_t(map.width()) * size_t(map.height()));
  for (size_t i = 0; i < bytes.size(); ++i) {
    const double q = std::floor(map.values.data()[i] * 255.0 + 0.5);  // half up
    bytes[i] = static_cast<unsigned char>(std::clamp(q, 0.0, 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_salf(const SaliencyMap& map, const fs::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out.write("SALF", 4);
  put_u32le(out, kSalfVersion);
  put_u32le(out, static_cast<std::uint32_t>(map.width()));
  put_u32le(out, static_cast<std::uint32_t>(map.height()));
  for (Eigen::Index i = 0; i < map.values.size(); ++i) {
    const float f = static_cast<float>(map.values.data()[i]);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32le(out, u);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_map(const SaliencyMap& map, const fs::path& path) {
  if (path.extension() == ".pgm") {
    write_pgm(map, path);
  } else {
    write_salf(map, path);
  }
}

// --- threshold record ---

void save_threshold(const SignificanceThreshold& threshold, const fs::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << "value " << format_double(threshold.value) << "\n"
      << "n_regions " << threshold.n_regions << "\n"
      << "source " << threshold.source << "\n"
      << "method " << threshold.method << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

SignificanceThreshold load_threshold(const fs::path& path) {
  std::ifstream in = open_input(path);
  SignificanceThreshold threshold;
  bool has_value = false;
  for_each_row(in, [&](const std::string& line, size_t line_no) {
    const size_t space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    if (key == "value") {
      threshold.value = parse_double(value, path, line_no);
      has_value = true;
    } else if (key == "n_regions") {
      threshold.n_regions =
          static_cast<std::int64_t>(parse_double(value, path, line_no));
    } else if (key == "source") {
      threshold.source = value;
    } else if (key == "method") {
      threshold.method = value;
    } else {
      throw Error(ErrorCode::ParseError,
                  at_line(path, line_no) + ": unknown key '" + key + "'");
    }
  });
  if (!has_value) {
    throw Error(ErrorCode::ParseError, path.string() + ": missing 'value' record");
  }
  if (!(threshold.value >= 0.0 && threshold.value <= 1.0)) {
    throw Error(ErrorCode::ParseError,
                path.string() + ": threshold value " + format_double(threshold.value) +
                    " outside [0, 1]");
  }
  return threshold;
}

// --- evaluation report ---

namespace {

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json opt_json(const std::optional<bool>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> opt_from(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void write_report(const EvaluationReport& report, const fs::path& path) {
  ordered_json j;
  j["metadata"] = {
      {"tool", report.metadata.tool},
      {"version", report.metadata.version},
      {"method", report.metadata.method},
      {"aggregation", report.metadata.aggregation},
      {"created_utc", report.metadata.created_utc},
  };
  j["per_image"] = ordered_json::array();
  for (const ImageReport& image : report.per_image) {
    ordered_json regions = ordered_json::array();
    for (const RegionReport& region : image.regions) {
      regions.push_back({
          {"x", region.box.x},
          {"y", region.box.y},
          {"w", region.box.w},
          {"h", region.box.h},
          {"mean_saliency", region.mean_saliency},
          {"predicted_salient", opt_json(region.predicted_salient)},
          {"truth_salient", opt_json(region.truth_salient)},
      });
    }
    j["per_image"].push_back({
        {"image_id", image.image_id},
        {"auc", opt_json(image.auc)},
        {"nss", opt_json(image.nss)},
        {"regions", std::move(regions)},
        {"notes", image.notes},
    });
  }
  const ReportAggregates& agg = report.aggregates;
  ordered_json confusion = nullptr;
  if (agg.confusion) {
    confusion = {{"tp", agg.confusion->tp},
                 {"tn", agg.confusion->tn},
                 {"fp", agg.confusion->fp},
                 {"fn", agg.confusion->fn}};
  }
  j["aggregates"] = {
      {"mean_auc", opt_json(agg.mean_auc)},
      {"mean_nss", opt_json(agg.mean_nss)},
      {"ap50", opt_json(agg.ap50)},
      {"ap50_95", opt_json(agg.ap50_95)},
      {"accuracy", opt_json(agg.accuracy)},
      {"sensitivity", opt_json(agg.sensitivity)},
      {"specificity", opt_json(agg.specificity)},
      {"precision", opt_json(agg.precision)},
      {"threshold", opt_json(agg.threshold)},
      {"confusion", std::move(confusion)},
  };
  j["skipped"] = report.skipped;
  j["errors"] = report.errors;

  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

EvaluationReport read_report(const fs::path& path) {
  std::ifstream in = open_input(path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }

  EvaluationReport report;
  try {
    const ordered_json& meta = j.at("metadata");
    report.metadata.tool = meta.at("tool").get<std::string>();
    report.metadata.version = meta.at("version").get<std::string>();
    report.metadata.method = meta.at("method").get<std::string>();
    report.metadata.aggregation = meta.at("aggregation").get<std::string>();
    report.metadata.created_utc = meta.at("created_utc").get<std::string>();

    for (const ordered_json& image_json : j.at("per_image")) {
      ImageReport image;
      image.image_id = image_json.at("image_id").get<std::string>();
      image.auc = opt_from<double>(image_json, "auc");
      image.nss = opt_from<double>(image_json, "nss");
      for (const ordered_json& region_json : image_json.at("regions")) {
        RegionReport region;
        region.box.x = region_json.at("x").get<int>();
        region.box.y = region_json.at("y").get<int>();
        region.box.w = region_json.at("w").get<int>();
        region.box.h = region_json.at("h").get<int>();
        region.box.image_id = image.image_id;
        region.mean_saliency = region_json.at("mean_saliency").get<double>();
        region.predicted_salient = opt_from<bool>(region_json, "predicted_salient");
        region.truth_salient = opt_from<bool>(region_json, "truth_salient");
        image.regions.push_back(std::move(region));
      }
      image.notes = image_json.at("notes").get<std::vector<std::string>>();
      report.per_image.push_back(std::move(image));
    }

    const ordered_json& agg = j.at("aggregates");
    report.aggregates.mean_auc = opt_from<double>(agg, "mean_auc");
    report.aggregates.mean_nss = opt_from<double>(agg, "mean_nss");
    report.aggregates.ap50 = opt_from<double>(agg, "ap50");
    report.aggregates.ap50_95 = opt_from<double>(agg, "ap50_95");
    report.aggregates.accuracy = opt_from<double>(agg, "accuracy");
    report.aggregates.sensitivity = opt_from<double>(agg, "sensitivity");
    report.aggregates.specificity = opt_from<double>(agg, "specificity");
    report.aggregates.precision = opt_from<double>(agg, "precision");
    report.aggregates.threshold = opt_from<double>(agg, "threshold");
    if (agg.contains("confusion") && !agg.at("confusion").is_null()) {
      ConfusionCounts counts;
      counts.tp = agg.at("confusion").at("tp").get<std::int64_t>();
      counts.tn = agg.at("confusion").at("tn").get<std::int64_t>();
      counts.fp = agg.at("confusion").at("fp").get<std::int64_t>();
      counts.fn = agg.at("confusion").at("fn").get<std::int64_t>();
      report.aggregates.confusion = counts;
    }

    report.skipped = j.at("skipped").get<std::map<std::string, std::string>>();
    report.errors = j.at("errors").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return report;
}

}  // namespace bsal
