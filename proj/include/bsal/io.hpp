#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsal/significance.hpp"
#include "bsal/types.hpp"

namespace bsal {

// File formats handled here:
//   .manifest  one image per line: id image annotations detections gaze split
//              ('-' marks an absent optional reference, '#' starts a comment)
//   .boxes     one region per line: x y w h
//   .dets      one detection per line: x y w h confidence
//   .gaze      CSV with header x,y[,timestamp_ms[,duration_ms]]
//   .pgm/.ppm  portable graymap/pixmap, ASCII or binary, maxval <= 255
//   .salf      float map container: "SALF", version u32, width u32,
//              height u32 (all little-endian), then width*height f32 values
//              row-major
//   .report    evaluation report, one JSON document
// All multi-byte binary values are little-endian.

struct RegionReport {
  BoundingBox box;
  double mean_saliency = 0.0;
  std::optional<bool> predicted_salient;
  std::optional<bool> truth_salient;

  bool operator==(const RegionReport&) const = default;
};

struct ImageReport {
  std::string image_id;
  std::optional<double> auc;
  std::optional<double> nss;
  std::vector<RegionReport> regions;
  std::vector<std::string> notes;

  bool operator==(const ImageReport&) const = default;
};

struct ReportAggregates {
  std::optional<double> mean_auc;
  std::optional<double> mean_nss;
  std::optional<double> ap50;
  std::optional<double> ap50_95;
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> threshold;
  std::optional<ConfusionCounts> confusion;

  bool operator==(const ReportAggregates&) const = default;
};

struct ReportMetadata {
  std::string tool;
  std::string version;
  std::string method;
  std::string aggregation;  // how per-image scores fold into dataset scores
  std::string created_utc;

  bool operator==(const ReportMetadata&) const = default;
};

struct EvaluationReport {
  ReportMetadata metadata;
  std::vector<ImageReport> per_image;
  ReportAggregates aggregates;
  std::map<std::string, std::string> skipped;  // section -> reason
  std::vector<std::string> errors;             // located per-file failures

  bool operator==(const EvaluationReport&) const = default;
};

// --- dataset ingestion ---

DatasetManifest load_manifest(const std::filesystem::path& path);
std::vector<BoundingBox> load_annotations(const std::filesystem::path& path,
                                          const std::string& image_id);
std::vector<Detection> load_detections(const std::filesystem::path& path,
                                       const std::string& image_id);
FixationSet load_gaze(const std::filesystem::path& path, const std::string& image_id);

// --- images ---

RasterImage read_image(const std::filesystem::path& path);
RasterImage decode_image(std::istream& in, const std::string& origin);

// --- saliency maps ---

/// Picks the codec from the extension: ".pgm" quantizes to the 8-bit graymap
/// (the map must be normalized), anything else writes the lossless float
/// container.
void write_map(const SaliencyMap& map, const std::filesystem::path& path);
/// Sniffs the magic: "SALF" or a graymap header. Graymap bytes map to v/maxval.
SaliencyMap read_map(const std::filesystem::path& path);
SaliencyMap decode_map(std::istream& in, const std::string& origin);

void write_pgm(const SaliencyMap& map, const std::filesystem::path& path);
void write_salf(const SaliencyMap& map, const std::filesystem::path& path);

// --- threshold record ---

void save_threshold(const SignificanceThreshold& threshold,
                    const std::filesystem::path& path);
SignificanceThreshold load_threshold(const std::filesystem::path& path);

// --- evaluation report ---

void write_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport read_report(const std::filesystem::path& path);

}  // namespace bsal
