// starcert: certainty estimation for star-convex instance predictions.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "starcert/commands.hpp"
#include "starcert/error.hpp"

using namespace starcert;

namespace {

ScoreKind parse_score(const std::string& s) {
  for (ScoreKind k : kScoreKinds) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown score '" + s + "' (c_spl|c_frac|c_hyb)");
}

void add_run_flags(CLI::App* cmd, RunConfig& c, std::string& method) {
  cmd->add_option("--method", method, "Clustering approach: pixel (BSAS on masks) or radial")
      ->check(CLI::IsMember({"pixel", "radial"}))
      ->capture_default_str();
  cmd->add_option("--iou-threshold", c.iou_threshold,
                  "theta_IoU: minimum IoU with every cluster member for BSAS admission")
      ->capture_default_str();
  cmd->add_option("--prob-cluster-threshold", c.cluster_prob_threshold,
                  "theta_d: per-pass object probability a radial center must exceed")
      ->capture_default_str();
  cmd->add_option("--prob-threshold", c.prob_threshold,
                  "theta_prob: minimum object probability of an NMS candidate")
      ->capture_default_str();
  cmd->add_option("--nms-threshold", c.nms_threshold,
                  "theta_nms: IoU above which NMS suppresses a candidate")
      ->capture_default_str();
  cmd->add_option("--match-threshold", c.match_threshold,
                  "theta_match: IoU for a true-positive ground-truth match")
      ->capture_default_str();
  cmd->add_option("--bins", c.bins, "B: reliability-diagram bins")->capture_default_str();
  cmd->add_flag("--exact-iou", c.exact_iou,
                "Use rasterized IoU for radial certainty and exhaustive NMS comparisons");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial, fractional and hybrid certainty for star-convex instance predictions"};
  app.require_subcommand(1);
  app.footer("Environment: STARCERT_THREADS sets the worker count for multi-seed work.");

  // synth
  SynthArgs synth;
  std::uint64_t noise_seed = 0;
  auto* s = app.add_subcommand("synth", "Generate a synthetic scene and simulated forward passes");
  s->add_option("--width", synth.scene.width, "Image width in pixels")->capture_default_str();
  s->add_option("--height", synth.scene.height, "Image height in pixels")->capture_default_str();
  s->add_option("--instances", synth.scene.instances, "M: ground-truth instances")
      ->capture_default_str();
  s->add_option("--passes", synth.passes, "F: forward passes")->capture_default_str();
  s->add_option("--rays", synth.scene.n_rays, "n: rays per polygon")->capture_default_str();
  s->add_option("--r-min", synth.scene.r_min, "Smallest radius")->capture_default_str();
  s->add_option("--r-max", synth.scene.r_max, "Largest radius")->capture_default_str();
  s->add_option("--smoothness", synth.scene.smoothness, "Relative radius perturbation")
      ->capture_default_str();
  s->add_option("--gap", synth.scene.gap, "Minimum free space between instances")
      ->capture_default_str();
  s->add_option("--seed", synth.scene.seed, "Scene seed")->capture_default_str();
  auto* ns = s->add_option("--noise-seed", noise_seed, "Pass-simulation seed (default: --seed)");
  s->add_option("--p-det", synth.noise.p_det, "Per-pass detection probability")
      ->capture_default_str();
  s->add_option("--sigma-radius", synth.noise.sigma_radius, "Stddev of the log radius factor")
      ->capture_default_str();
  s->add_option("--sigma-prob", synth.noise.sigma_prob, "Stddev of probability-field noise")
      ->capture_default_str();
  s->add_flag("--heterogeneous", synth.noise.heterogeneous,
              "Draw p_det per instance from U[0.3, 1.0]");
  s->add_option("--out", synth.out, "Output directory")->required();

  // cluster
  ClusterArgs cluster;
  std::string cluster_method = "radial";
  std::string cluster_gt;
  auto* c = app.add_subcommand("cluster", "Cluster a sample set and score every cluster");
  c->add_option("--input", cluster.input, "Manifest file or directory holding manifest.json")
      ->required();
  cluster.out = "report.json";
  c->add_option("--out", cluster.out, "Report path")->capture_default_str();
  add_run_flags(c, cluster.config, cluster_method);
  c->add_option("--ground-truth", cluster_gt,
                "Label mask for calibration (default: the manifest's ground truth)");

  // calibrate
  CalibrateArgs calib;
  std::string calib_gt;
  auto* k = app.add_subcommand("calibrate", "Reliability diagrams, ECE, MCE and Pearson R");
  k->add_option("--report", calib.report, "Report written by cluster")->required();
  k->add_option("--ground-truth", calib_gt, "Label mask (default: the report's ground truth)");
  k->add_option("--out", calib.out_dir, "Output directory")->required();
  k->add_option("--bins", calib.bins, "B: reliability-diagram bins")->capture_default_str();
  k->add_option("--match-threshold", calib.match_threshold,
                "theta_match: IoU for a true-positive ground-truth match")
      ->capture_default_str();

  // bench
  BenchArgs bench;
  bench.out = "bench.csv";
  bool warm = false;
  auto* b = app.add_subcommand("bench", "Time BSAS against radial clustering as instances grow");
  b->add_option("--out", bench.out, "Timing CSV")->capture_default_str();
  b->add_option("--sizes", bench.options.sizes, "Instance counts")->capture_default_str();
  b->add_option("--passes", bench.options.passes, "F: forward passes")->capture_default_str();
  b->add_option("--seed", bench.options.seed, "Workload seed")->capture_default_str();
  b->add_option("--pixels-per-instance", bench.options.pixels_per_instance,
                "Image area per instance")
      ->capture_default_str();
  b->add_option("--repeats", bench.options.min_repeats, "Minimum timed repeats")
      ->capture_default_str();
  b->add_option("--min-seconds", bench.options.min_seconds,
                "Minimum accumulated time per method and size")
      ->capture_default_str();
  b->add_flag("--warm", warm, "Skip cache eviction between repeats");

  // sweep-passes
  SweepArgs sweep;
  sweep.out = "sweep.csv";
  int seed_count = 10;
  std::uint64_t first_seed = 0;
  std::string sweep_method = "radial";
  std::string sweep_score = "c_hyb";
  double sweep_p_det = -1.0;
  auto* w = app.add_subcommand("sweep-passes", "Calibration error against the number of passes");
  w->add_option("--out", sweep.out, "Summary CSV")->capture_default_str();
  w->add_option("--pass-counts", sweep.options.pass_counts, "F values")->capture_default_str();
  w->add_option("--seeds", seed_count, "Number of seeds")->capture_default_str();
  w->add_option("--first-seed", first_seed, "First seed")->capture_default_str();
  w->add_option("--method", sweep_method, "Clustering approach")
      ->check(CLI::IsMember({"pixel", "radial"}))
      ->capture_default_str();
  w->add_option("--score", sweep_score, "Score to calibrate: c_spl, c_frac or c_hyb")
      ->capture_default_str();
  w->add_option("--bins", sweep.options.suite.config.bins, "B: reliability-diagram bins")
      ->capture_default_str();
  w->add_option("--instances", sweep.options.suite.scene.instances, "M: instances per scene")
      ->capture_default_str();
  w->add_option("--rays", sweep.options.suite.scene.n_rays, "n: rays per polygon")
      ->capture_default_str();
  w->add_option("--sigma-radius", sweep.options.suite.noise.sigma_radius,
                "Stddev of the log radius factor")
      ->capture_default_str();
  w->add_option("--p-det", sweep_p_det,
                "Fixed detection probability (default: per instance from U[0.3, 1.0])");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s->parsed()) {
      if (ns->count() > 0) synth.noise_seed = noise_seed;
      cmd_synth(synth, std::cout);
    } else if (c->parsed()) {
      cluster.config.method = parse_method(cluster_method);
      if (!cluster_gt.empty()) cluster.ground_truth = cluster_gt;
      cmd_cluster(cluster, std::cout);
    } else if (k->parsed()) {
      if (!calib_gt.empty()) calib.ground_truth = calib_gt;
      cmd_calibrate(calib, std::cout);
    } else if (b->parsed()) {
      bench.options.cold_cache = !warm;
      cmd_bench(bench, std::cout);
    } else if (w->parsed()) {
      if (seed_count < 1) throw Error(ErrorCode::InvalidArgument, "--seeds must be >= 1");
      for (int i = 0; i < seed_count; ++i) sweep.options.seeds.push_back(first_seed + i);
      sweep.options.suite.config.method = parse_method(sweep_method);
      sweep.options.score = parse_score(sweep_score);
      if (sweep_p_det >= 0.0) {
        sweep.options.suite.noise.heterogeneous = false;
        sweep.options.suite.noise.p_det = sweep_p_det;
      }
      cmd_sweep_passes(sweep, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
