#pragma once

// Subcommand bodies. Each either writes all of its outputs or, on failure,
// removes whatever it created and rethrows.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "starcert/experiments.hpp"
#include "starcert/pipeline.hpp"
#include "starcert/synth.hpp"

namespace starcert {

namespace fs = std::filesystem;

/// Records files and directories as they are created and deletes them unless
/// commit() is called.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;
  ~OutputTransaction();

  /// Creates `dir` (and missing parents) if needed; only newly created
  /// directories are removed on rollback.
  void create_directories(const fs::path& dir);
  /// Marks `file` as an output of this transaction and returns it.
  fs::path file(const fs::path& file);
  void commit() noexcept { committed_ = true; }

 private:
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

struct SynthArgs {
  SceneParams scene;
  NoiseModel noise;
  int passes = 20;
  std::optional<std::uint64_t> noise_seed;  // defaults to the scene seed
  fs::path out;
};

/// Writes manifest.json (dense), manifest_instances.json (polygon CSVs),
/// per-pass files and ground_truth.labels.bin into args.out.
void cmd_synth(const SynthArgs& args, std::ostream& log);

struct ClusterArgs {
  fs::path input;  // manifest file or a directory holding manifest.json
  fs::path out;
  RunConfig config;
  std::optional<fs::path> ground_truth;  // overrides the manifest's
};

ClusterReport cmd_cluster(const ClusterArgs& args, std::ostream& log);

struct CalibrateArgs {
  fs::path report;
  std::optional<fs::path> ground_truth;  // defaults to the report's
  fs::path out_dir;
  int bins = kDefaultBins;
  double match_threshold = kDefaultMatchThreshold;
};

/// Per score: reliability_<score>.csv and .svg; plus calibration_summary.csv,
/// calibration.json and overlay.svg.
std::map<std::string, CalibrationReport> cmd_calibrate(const CalibrateArgs& args,
                                                       std::ostream& log);

struct BenchArgs {
  BenchOptions options;
  fs::path out;
};

BenchResult cmd_bench(const BenchArgs& args, std::ostream& log);

struct SweepArgs {
  SweepOptions options;
  fs::path out;
};

SweepResult cmd_sweep_passes(const SweepArgs& args, std::ostream& log);

}  // namespace starcert
