#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "bsal/io.hpp"
#include "bsal/pipeline.hpp"

namespace bsal {

namespace fs = std::filesystem;

namespace {

// mt19937_64 with explicit value derivation, so generated datasets are
// byte-identical across standard libraries.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(gen() % std::uint64_t(hi - lo + 1));
  }
};

bool overlaps(const BoundingBox& a, const BoundingBox& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

void write_ppm(const RasterImage& image, const fs::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  std::vector<unsigned char> bytes;
  bytes.reserve(size_t(image.width()) * image.height() * 3);
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const double q = std::floor(double(image.planes[ch](r, c)) * 255.0 + 0.5);
        bytes.push_back(static_cast<unsigned char>(std::clamp(q, 0.0, 255.0)));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace

int run_synth(const RunConfig& config) {
  if (config.synth_size < 1 || config.synth_width < 16 || config.synth_height < 16) {
    throw Error(ErrorCode::InvalidParams, "synthetic dataset needs size >= 1 and "
                                          "dimensions >= 16x16");
  }
  const int width = config.synth_width;
  const int height = config.synth_height;
  fs::create_directories(config.out / "images");
  fs::create_directories(config.out / "boxes");
  fs::create_directories(config.out / "dets");
  fs::create_directories(config.out / "gaze");

  std::ostringstream manifest;
  manifest << "# id image annotations detections gaze split\n";

  for (int i = 0; i < config.synth_size; ++i) {
    Rng rng(config.seed * 0x9E3779B97F4A7C15ull + std::uint64_t(i) + 1);
    char name[16];
    std::snprintf(name, sizeof(name), "img%03d", i);
    const std::string id = name;

    // textured background with a mild gradient
    RasterImage image;
    for (int ch = 0; ch < 3; ++ch) image.planes.emplace_back(height, width);
    const double tint[3] = {rng.uniform(0.8, 1.0), rng.uniform(0.8, 1.0),
                            rng.uniform(0.8, 1.0)};
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        const double base = 0.12 + 0.18 * (double(r + c) / double(width + height)) +
                            0.08 * rng.uniform();
        for (int ch = 0; ch < 3; ++ch) {
          image.planes[ch](r, c) = float(std::clamp(base * tint[ch], 0.0, 1.0));
        }
      }
    }

    // bright billboard-like rectangles
    std::vector<BoundingBox> boxes;
    const int n_boxes = rng.uniform_int(1, 3);
    for (int b = 0; b < n_boxes; ++b) {
      for (int attempt = 0; attempt < 10; ++attempt) {
        BoundingBox box;
        box.w = rng.uniform_int(width / 8, width / 4);
        box.h = rng.uniform_int(height / 8, height / 4);
        box.x = rng.uniform_int(4, width - box.w - 4);
        box.y = rng.uniform_int(4, height - box.h - 4);
        box.image_id = id;
        bool clash = false;
        for (const BoundingBox& other : boxes) clash |= overlaps(box, other);
        if (clash) continue;
        const double level = rng.uniform(0.75, 0.95);
        for (int r = box.y; r < box.y + box.h; ++r) {
          for (int c = box.x; c < box.x + box.w; ++c) {
            const double v = std::clamp(level + 0.04 * rng.uniform(), 0.0, 1.0);
            for (int ch = 0; ch < 3; ++ch) image.planes[ch](r, c) = float(v);
          }
        }
        boxes.push_back(box);
        break;
      }
    }

    write_ppm(image, config.out / "images" / (id + ".ppm"));

    std::ofstream box_file(config.out / "boxes" / (id + ".boxes"));
    for (const BoundingBox& box : boxes) {
      box_file << box.x << " " << box.y << " " << box.w << " " << box.h << "\n";
    }
    box_file.close();

    // jittered detections plus the occasional spurious one
    std::ofstream det_file(config.out / "dets" / (id + ".dets"));
    for (const BoundingBox& box : boxes) {
      const int dx = rng.uniform_int(-3, 3), dy = rng.uniform_int(-3, 3);
      const int dw = rng.uniform_int(-2, 2), dh = rng.uniform_int(-2, 2);
      det_file << (box.x + dx) << " " << (box.y + dy) << " "
               << std::max(1, box.w + dw) << " " << std::max(1, box.h + dh) << " "
               << rng.uniform(0.55, 0.99) << "\n";
    }
    if (rng.uniform() < 0.5) {
      det_file << rng.uniform_int(0, width - 9) << " " << rng.uniform_int(0, height - 9)
               << " " << rng.uniform_int(6, 16) << " " << rng.uniform_int(6, 16) << " "
               << rng.uniform(0.05, 0.5) << "\n";
    }
    det_file.close();

    std::ofstream gaze_file(config.out / "gaze" / (id + ".gaze"));
    gaze_file << "x,y,timestamp_ms,duration_ms\n";
    double t = rng.uniform(0.0, 20.0);
    auto emit_point = [&](double x, double y) {
      gaze_file << x << "," << y << "," << t << "," << rng.uniform(80.0, 300.0) << "\n";
      t += rng.uniform(30.0, 90.0);
    };
    // 0.5 px margins keep points inside their region after 6-digit printing
    for (const BoundingBox& box : boxes) {
      if (rng.uniform() < 0.7) {
        const int n_points = rng.uniform_int(1, 3);
        for (int p = 0; p < n_points; ++p) {
          emit_point(rng.uniform(box.x + 0.5, box.x + box.w - 0.5),
                     rng.uniform(box.y + 0.5, box.y + box.h - 0.5));
        }
      }
    }
    emit_point(rng.uniform(0.5, width - 0.5), rng.uniform(0.5, height - 0.5));
    gaze_file.close();

    static const char* kSplits[3] = {"train", "val", "test"};
    manifest << id << " images/" << id << ".ppm boxes/" << id << ".boxes dets/" << id
             << ".dets gaze/" << id << ".gaze " << kSplits[i % 3] << "\n";
  }

  const fs::path manifest_path = config.out / "synth.manifest";
  std::ofstream manifest_file(manifest_path);
  if (!manifest_file) {
    throw Error(ErrorCode::IoError, "cannot open " + manifest_path.string());
  }
  manifest_file << manifest.str();
  manifest_file.close();

  std::cerr << kToolName << ": synth: " << config.synth_size << " images ("
            << width << "x" << height << ") under " << config.out.string() << "\n";
  return 0;
}

}  // namespace bsal
