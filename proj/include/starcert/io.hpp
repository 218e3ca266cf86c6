#pragma once

// On-disk formats.
//
//   manifest.json      {version, mode, width, height, n_rays, passes, files[], ground_truth?}
//   *.probs.bin        width*height little-endian float32, row-major
//   *.radial.bin       width*height*n_rays float32, offset (y*width + x)*n_rays + i
//   *.labels.bin       width*height little-endian uint16, row-major, 0 = background
//   *.polygons.csv     header "pass,cx,cy,r0,...,r{n-1}", one instance per row
//   report.json        clusters, scores, bands and optional calibration
//   reliability csv    bin_lo,bin_hi,count,mean_confidence,accuracy
//
// File references in a manifest are relative to the manifest's directory.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starcert/calibration.hpp"
#include "starcert/pipeline.hpp"
#include "starcert/samples.hpp"

namespace starcert {

namespace fs = std::filesystem;

inline constexpr int kManifestVersion = 1;

enum class SampleMode { Dense, Instances };

struct PassFiles {
  std::string probs;     // dense
  std::string radial;    // dense
  std::string polygons;  // instances, CSV form
  std::string labels;    // instances, label-mask form
};

struct Manifest {
  int version = kManifestVersion;
  SampleMode mode = SampleMode::Dense;
  int width = 0;
  int height = 0;
  int n_rays = 16;
  int passes = 0;
  std::vector<PassFiles> files;
  std::optional<std::string> ground_truth;
  fs::path base_dir;  // directory the references resolve against

  fs::path resolve(const std::string& ref) const { return base_dir / ref; }
};

/// Parses and validates a manifest, including the existence and exact byte
/// length of every binary file it references. Errors: MissingFile,
/// MalformedJson, UnsupportedVersion, InvalidManifest, SizeMismatch.
Manifest read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const Manifest& manifest);

std::vector<DenseOutput> load_dense(const Manifest& manifest);
std::vector<PredictionSet> load_instances(const Manifest& manifest);

std::vector<float> read_floats(const fs::path& path, std::size_t count);
void write_floats(const fs::path& path, const std::vector<float>& values);

LabelMask read_labels(const fs::path& path, int width, int height);
void write_labels(const fs::path& path, const LabelMask& labels);

/// Raw probability and radial files for one pass.
void write_dense(const fs::path& probs, const fs::path& radial, const DenseOutput& g);

std::vector<RadialPolygon> read_polygons_csv(const fs::path& path, int pass_id, int n_rays);
void write_polygons_csv(const fs::path& path, int pass_id, const std::vector<RadialPolygon>& polys,
                        int n_rays);

void write_report(const fs::path& path, const ClusterReport& report);
ClusterReport read_report(const fs::path& path);

/// {"bins": B, "match_threshold": t, "scores": {name: calibration}}.
void write_calibration_json(const fs::path& path,
                            const std::map<std::string, CalibrationReport>& calibration, int bins,
                            double match_threshold);
/// score,pearson_r,ece,mce,matched,unmatched,false_negatives; pearson_r is
/// left blank when undefined.
void write_calibration_summary_csv(const fs::path& path,
                                   const std::map<std::string, CalibrationReport>& calibration);

/// Writes text verbatim.
void write_text(const fs::path& path, const std::string& text);

void write_reliability_csv(const fs::path& path, const std::vector<ReliabilityBin>& bins);
std::vector<ReliabilityBin> read_reliability_csv(const fs::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace starcert
