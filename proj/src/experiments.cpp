#include "starcert/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "starcert/clustering.hpp"
#include "starcert/error.hpp"
#include "starcert/io.hpp"
#include "starcert/parallel.hpp"

namespace starcert {

SuiteParams heterogeneous_suite() {
  SuiteParams s;
  s.scene.width = 128;
  s.scene.height = 128;
  s.scene.instances = 12;
  s.scene.n_rays = 16;
  s.noise.heterogeneous = true;
  s.noise.sigma_radius = 0.1;
  s.passes = 20;
  s.config.method = Method::Radial;
  s.config.bins = 10;
  return s;
}

ClusterReport run_method(const SimulatedPasses& sim, int width, int height, int passes,
                         const RunConfig& config) {
  if (passes < 1 || passes > static_cast<int>(sim.dense.size())) {
    throw Error(ErrorCode::InvalidArgument, "pass count outside the simulated range");
  }
  if (config.method == Method::Radial) {
    return run_radial(std::span(sim.dense).first(passes), config);
  }
  const auto masks = to_masks(std::span(sim.instances).first(passes), width, height);
  ClusterReport r = run_pixel(masks, width, height, passes, config);
  r.n_rays = sim.dense.front().n_rays;
  return r;
}

TrialResult run_trial(const SuiteParams& suite, std::uint64_t seed) {
  SceneParams sp = suite.scene;
  sp.seed = seed;
  const SyntheticScene scene = generate_scene(sp);
  const SimulatedPasses sim = simulate_passes(scene, suite.passes, suite.noise, seed);
  TrialResult t;
  t.report = run_method(sim, scene.width, scene.height, suite.passes, suite.config);
  const ScoredClusters scored =
      score_against(t.report, scene.gt_mask, suite.config.match_threshold);
  t.calibration = calibrate(scored, suite.config.bins);
  t.report.calibration = t.calibration;
  return t;
}

// ---------------------------------------------------------------------------

namespace {

void mean_stddev(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<SweepRow> SweepResult::summary() const {
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < pass_counts.size(); ++i) {
    std::vector<double> r, e, m;
    for (const SweepMetrics& s : values[i]) {
      if (s.pearson_r) r.push_back(*s.pearson_r);
      e.push_back(s.ece);
      m.push_back(s.mce);
    }
    for (auto [name, vals] : {std::pair{"pearson_r", &r}, {"ece", &e}, {"mce", &m}}) {
      SweepRow row{pass_counts[i], name, 0.0, 0.0, vals->size()};
      mean_stddev(*vals, row.mean, row.stddev);
      rows.push_back(row);
    }
  }
  return rows;
}

SweepResult sweep_passes(const SweepOptions& options) {
  if (options.pass_counts.empty()) throw Error(ErrorCode::InvalidArgument, "no pass counts");
  if (options.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "no seeds");
  for (int f : options.pass_counts) {
    if (f < 1) throw Error(ErrorCode::InvalidArgument, "pass counts must be >= 1");
  }
  const int max_passes = *std::max_element(options.pass_counts.begin(), options.pass_counts.end());
  SweepResult out;
  out.pass_counts = options.pass_counts;
  out.seeds = options.seeds;
  out.values.assign(options.pass_counts.size(), std::vector<SweepMetrics>(options.seeds.size()));
  const std::string score = to_string(options.score);

  parallel_for(options.seeds.size(), [&](std::size_t s) {
    SceneParams sp = options.suite.scene;
    sp.seed = options.seeds[s];
    const SyntheticScene scene = generate_scene(sp);
    const SimulatedPasses sim = simulate_passes(scene, max_passes, options.suite.noise, sp.seed);
    for (std::size_t i = 0; i < options.pass_counts.size(); ++i) {
      const ClusterReport report =
          run_method(sim, scene.width, scene.height, options.pass_counts[i], options.suite.config);
      const auto cal = calibrate(score_against(report, scene.gt_mask,
                                               options.suite.config.match_threshold),
                                 options.suite.config.bins);
      const CalibrationReport& c = cal.at(score);
      out.values[i][s] = {c.pearson_r, c.ece, c.mce};
    }
  });
  return out;
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << "passes,metric,mean,stddev,n\n";
  for (const SweepRow& r : result.summary()) {
    out << r.passes << ',' << r.metric << ',' << format_double(r.mean) << ','
        << format_double(r.stddev) << ',' << r.n << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

// ---------------------------------------------------------------------------

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two paired points");
  }
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "slope fit needs positive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "slope fit needs distinct x values");
  return sxy / sxx;
}

namespace {

class CacheFlusher {
 public:
  explicit CacheFlusher(std::size_t bytes) : buffer_(bytes, 1) {}
  void operator()() {
    unsigned char acc = 0;
    for (std::size_t i = 0; i < buffer_.size(); i += 64) {
      buffer_[i] = static_cast<unsigned char>(buffer_[i] + 1);
      acc ^= buffer_[i];
    }
    sink_ = acc;
  }

 private:
  std::vector<unsigned char> buffer_;
  volatile unsigned char sink_ = 0;
};

template <typename Fn>
double time_best(const BenchOptions& opt, CacheFlusher* flush, Fn&& fn) {
  using clock = std::chrono::steady_clock;
  double best = 1e300, total = 0.0;
  for (int rep = 0; rep < opt.min_repeats || total < opt.min_seconds; ++rep) {
    if (flush) (*flush)();
    const auto t0 = clock::now();
    fn();
    const double s = std::chrono::duration<double>(clock::now() - t0).count();
    best = std::min(best, s);
    total += s;
  }
  return best;
}

}  // namespace

BenchResult run_bench(const BenchOptions& opt, std::ostream* progress) {
  if (opt.sizes.size() < 2) throw Error(ErrorCode::InvalidArgument, "bench needs two sizes or more");
  std::optional<CacheFlusher> flusher;
  if (opt.cold_cache) flusher.emplace(opt.flush_bytes);
  CacheFlusher* flush = flusher ? &*flusher : nullptr;

  BenchResult result;
  std::vector<double> preds, bsas_t, radial_t;
  for (int m : opt.sizes) {
    SceneParams sp;
    sp.instances = m;
    sp.r_min = opt.r_min;
    sp.r_max = opt.r_max;
    sp.seed = opt.seed;
    sp.width = sp.height = static_cast<int>(std::ceil(std::sqrt(m * opt.pixels_per_instance)));
    const SyntheticScene scene = generate_scene(sp);
    const SimulatedPasses sim = simulate_passes(scene, opt.passes, opt.noise, opt.seed);
    const auto masks = to_masks(sim.instances, scene.width, scene.height);
    std::size_t total = 0;
    for (const MaskSet& s : masks) total += s.masks.size();
    const CenterSet centers = extract_centers(mean_dense(sim.dense), kDefaultProbThreshold,
                                              kDefaultNmsThreshold);

    std::size_t sink = 0;
    const double tb = time_best(opt, flush, [&] {
      sink += cluster_bsas(masks, kDefaultIouThreshold).size();
    });
    const double tr = time_best(opt, flush, [&] {
      sink += cluster_radial(sim.dense, centers, kDefaultProbClusterThreshold).clusters.size();
    });
    if (sink == std::size_t(-1)) throw Error(ErrorCode::Io, "unreachable");
    result.rows.push_back({"bsas", m, total, tb});
    result.rows.push_back({"radial", m, total, tr});
    preds.push_back(static_cast<double>(total));
    bsas_t.push_back(tb);
    radial_t.push_back(tr);
    if (progress) {
      *progress << "instances " << m << " (" << total << " predictions): bsas " << tb
                << " s, radial " << tr << " s\n";
    }
  }
  result.bsas_slope = fit_loglog_slope(preds, bsas_t);
  result.radial_slope = fit_loglog_slope(preds, radial_t);
  return result;
}

void write_bench_csv(const std::string& path, const BenchResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << "method,instances,total_predictions,seconds\n";
  for (const BenchRow& r : result.rows) {
    out << r.method << ',' << r.instances << ',' << r.total_predictions << ','
        << format_double(r.seconds) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

}  // namespace starcert
