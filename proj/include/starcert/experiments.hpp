#pragma once

// Synthetic experiment drivers shared by the command line and the test
// suites: single trials, pass-count sweeps and the clustering benchmark.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "starcert/pipeline.hpp"
#include "starcert/synth.hpp"

namespace starcert {

struct SuiteParams {
  SceneParams scene;
  NoiseModel noise;
  int passes = 20;
  RunConfig config;
};

/// 128x128, 12 instances, n = 16, p_det ~ U[0.3, 1], radius noise 0.1,
/// F = 20, B = 10, radial method.
SuiteParams heterogeneous_suite();

/// Clusters the first `passes` passes of a simulation with config.method.
ClusterReport run_method(const SimulatedPasses& sim, int width, int height, int passes,
                         const RunConfig& config);

struct TrialResult {
  ClusterReport report;
  std::map<std::string, CalibrationReport> calibration;
};

/// One seeded run: scene, passes, clustering and calibration against the
/// scene's ground truth. The seed drives both the scene and the noise.
TrialResult run_trial(const SuiteParams& suite, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pass-count sweep

struct SweepOptions {
  SuiteParams suite = heterogeneous_suite();
  std::vector<int> pass_counts{2, 5, 10, 20, 30, 40};
  std::vector<std::uint64_t> seeds;
  ScoreKind score = ScoreKind::Hybrid;
};

struct SweepMetrics {
  std::optional<double> pearson_r;
  double ece = 0.0;
  double mce = 0.0;
};

struct SweepRow {
  int passes = 0;
  std::string metric;  // "pearson_r", "ece" or "mce"
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 when n < 2
  std::size_t n = 0;    // seeds with a defined value
};

struct SweepResult {
  std::vector<int> pass_counts;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<SweepMetrics>> values;  // [pass count][seed]

  std::vector<SweepRow> summary() const;
};

/// Passes are nested: a seed's first F passes are the same for every F.
SweepResult sweep_passes(const SweepOptions& options);

void write_sweep_csv(const std::string& path, const SweepResult& result);

// ---------------------------------------------------------------------------
// Clustering benchmark

struct BenchOptions {
  std::vector<int> sizes{50, 100, 200, 400, 800};
  int passes = 10;
  std::uint64_t seed = 42;
  double pixels_per_instance = 500.0;
  double r_min = 4.0;
  double r_max = 7.0;
  NoiseModel noise{1.0, 0.1, 0.0, true};
  int min_repeats = 5;
  double min_seconds = 0.25;  // per method and size
  bool cold_cache = true;     // evict caches before every timed call
  std::size_t flush_bytes = std::size_t(256) << 20;
};

struct BenchRow {
  std::string method;  // "bsas" or "radial"
  int instances = 0;
  std::size_t total_predictions = 0;
  double seconds = 0.0;  // fastest repeat
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double bsas_slope = 0.0;
  double radial_slope = 0.0;
};

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Times cluster_bsas on the decoded instance masks and cluster_radial on the
/// dense outputs (centers precomputed) for each size.
BenchResult run_bench(const BenchOptions& options, std::ostream* progress = nullptr);

void write_bench_csv(const std::string& path, const BenchResult& result);

}  // namespace starcert
