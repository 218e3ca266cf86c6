// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "starcert/certainty.hpp"
#include "starcert/clustering.hpp"
#include "starcert/experiments.hpp"
#include "starcert/io.hpp"
#include "starcert/parallel.hpp"
#include "starcert/pipeline.hpp"
#include "starcert/synth.hpp"

using namespace starcert;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1));
}

// 1 -------------------------------------------------------------------------

void four_pass_fixture(Outcome& o) {
  const Manifest m = read_manifest(fs::path(STARCERT_FIXTURES) / "four_pass" / "manifest.json");
  const auto samples = to_masks(load_instances(m), m.width, m.height);
  RunConfig cfg;
  cfg.method = Method::Pixel;
  const ClusterReport r = run_pixel(samples, m.width, m.height, m.passes, cfg);
  std::vector<std::size_t> sizes;
  std::vector<double> frac;
  for (const auto& c : r.clusters) {
    sizes.push_back(c.members());
    frac.push_back(c.scores.fractional);
  }
  o.detail << "sizes {";
  for (std::size_t i = 0; i < sizes.size(); ++i) o.detail << (i ? "," : "") << sizes[i];
  o.detail << "} c_frac {";
  for (std::size_t i = 0; i < frac.size(); ++i) o.detail << (i ? "," : "") << frac[i];
  o.detail << "} ";
  o.require(m.passes == 4, "F = 4");
  o.require((sizes == std::vector<std::size_t>{4, 1, 3}), "sizes {4,1,3}");
  o.require((frac == std::vector<double>{1.0, 0.25, 0.75}), "c_frac {1.0,0.25,0.75}");
}

// 2 -------------------------------------------------------------------------

void noiseless_limit(Outcome& o) {
  SceneParams sp;
  sp.width = 128;
  sp.height = 128;
  sp.instances = 8;
  sp.n_rays = 16;
  sp.seed = 2024;
  const auto scene = generate_scene(sp);
  const auto sim = simulate_passes(scene, 20, NoiseModel{1.0, 0.0, 0.0, false}, 2024);
  for (Method method : {Method::Pixel, Method::Radial}) {
    RunConfig cfg;
    cfg.method = method;
    const ClusterReport r = run_method(sim, 128, 128, 20, cfg);
    const auto cal = calibrate(score_against(r, scene.gt_mask, cfg.match_threshold), cfg.bins);
    double worst = 0;
    for (const auto& c : r.clusters) {
      worst = std::max({worst, std::abs(c.scores.spatial - 1.0), std::abs(c.scores.fractional - 1.0),
                        std::abs(c.scores.hybrid - 1.0)});
    }
    double err = 0;
    for (const auto& [name, c] : cal) err = std::max({err, c.ece, c.mce});
    o.detail << to_string(method) << ": " << r.clusters.size() << " clusters, max |c-1| " << worst
             << ", max ECE/MCE " << err << "; ";
    o.require(r.clusters.size() == 8, std::string(to_string(method)) + " 8 clusters");
    o.require(worst <= 1e-9, std::string(to_string(method)) + " scores 1");
    o.require(err == 0.0, std::string(to_string(method)) + " ECE = MCE = 0");
  }
}

// 3 -------------------------------------------------------------------------

void certainty_oracle(Outcome& o) {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> count(1, 10);
  double worst = 0;
  bool exact_product = true;
  const int W = 48, H = 48;
  for (int t = 0; t < 100; ++t) {
    MaskCluster c;
    const int k = count(rng);
    std::vector<oracle::Dense> dense;
    for (int j = 0; j < k; ++j) {
      const auto p = oracle::random_polygon(rng, 24.5, 23.5, 16, 5, 16, 0.4);
      c.members.push_back({j + 1, 0, rasterize(p, W, H)});
      dense.push_back(oracle::raster(p, W, H));
    }
    const int F = k + int(rng() % 5);
    const ClusterSummary s = summarize(c, F);

    // Independent median by vote count and IoUs by pixel counting.
    oracle::Dense med{W, H, std::vector<std::uint8_t>(std::size_t(W) * H, 0)};
    for (std::size_t i = 0; i < med.bits.size(); ++i) {
      int votes = 0;
      for (const auto& d : dense) votes += d.bits[i];
      med.bits[i] = 2 * votes >= k;
    }
    double sum = 0;
    for (const auto& d : dense) sum += oracle::iou(d, med);
    worst = std::max(worst, std::abs(s.scores.spatial - sum / k));
    exact_product = exact_product && s.scores.hybrid == s.scores.spatial * s.scores.fractional &&
                    s.scores.fractional == double(k) / F;
  }
  o.detail << "max |c_spl - oracle| " << worst << " ";
  o.require(worst <= 1e-9, "c_spl within 1e-9");
  o.require(exact_product, "c_hyb = c_spl * c_frac exactly");
}

// 4 and 8c ------------------------------------------------------------------

std::vector<TrialResult> g_hetero_runs;

void hybrid_superiority(Outcome& o) {
  const SuiteParams suite = heterogeneous_suite();
  const int seeds = 20;
  g_hetero_runs.assign(seeds, {});
  parallel_for(seeds, [&](std::size_t s) { g_hetero_runs[s] = run_trial(suite, s + 1); });
  std::vector<double> spl, frac, hyb;
  for (const auto& t : g_hetero_runs) {
    spl.push_back(t.calibration.at("c_spl").ece);
    frac.push_back(t.calibration.at("c_frac").ece);
    hyb.push_back(t.calibration.at("c_hyb").ece);
  }
  const double ms = mean_of(spl), mf = mean_of(frac), mh = mean_of(hyb);
  o.detail << "mean ECE c_spl " << ms << ", c_frac " << mf << ", c_hyb " << mh << " ";
  o.require(mh < ms, "ECE(c_hyb) < ECE(c_spl)");
  o.require(mh < mf, "ECE(c_hyb) < ECE(c_frac)");
}

// 5 -------------------------------------------------------------------------

void convergence(Outcome& o) {
  SweepOptions opt;
  opt.pass_counts = {5, 10, 30, 40};
  for (std::uint64_t s = 0; s < 10; ++s) opt.seeds.push_back(s);
  const SweepResult r = sweep_passes(opt);
  auto ece = [&](std::size_t i) {
    std::vector<double> v;
    for (const auto& m : r.values[i]) v.push_back(m.ece);
    return v;
  };
  const auto e5 = ece(0), e10 = ece(1), e30 = ece(2), e40 = ece(3);
  const double sd5 = sample_stddev(e5), sd30 = sample_stddev(e30);
  std::vector<double> late, early;
  for (std::size_t s = 0; s < e5.size(); ++s) {
    late.push_back(std::abs(e40[s] - e30[s]));
    early.push_back(std::abs(e10[s] - e5[s]));
  }
  o.detail << "sd ECE F=5 " << sd5 << ", F=30 " << sd30 << "; mean |d| 40-30 " << mean_of(late)
           << ", 10-5 " << mean_of(early) << " ";
  o.require(sd30 < sd5, "sd(F=30) < sd(F=5)");
  o.require(mean_of(late) < mean_of(early), "|ECE40-ECE30| < |ECE10-ECE5|");
}

// 6 -------------------------------------------------------------------------

void complexity(Outcome& o) {
  const BenchResult r = run_bench(BenchOptions{});
  double bsas800 = 0, radial800 = 0;
  for (const auto& row : r.rows) {
    if (row.instances == 800) (row.method == "bsas" ? bsas800 : radial800) = row.seconds;
  }
  o.detail << "slope bsas " << r.bsas_slope << ", radial " << r.radial_slope << "; at 800 bsas "
           << bsas800 << " s, radial " << radial800 << " s ";
  o.require(r.bsas_slope >= 1.6, "bsas slope >= 1.6");
  o.require(r.radial_slope <= 1.3, "radial slope <= 1.3");
  o.require(radial800 < bsas800, "radial faster at 800");
}

// 7 -------------------------------------------------------------------------

std::vector<Pixel> pixels_of(const std::vector<Candidate>& cs) {
  std::vector<Pixel> out;
  for (const auto& c : cs) out.push_back(c.pixel);
  return out;
}

void oracle_equivalence(Outcome& o) {
  int nms_same = 0, bsas_same = 0;
  std::size_t candidates = 0, predictions = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    SceneParams sp;
    sp.width = 48;
    sp.height = 48;
    sp.instances = 3;
    sp.r_min = 4;
    sp.r_max = 8;
    sp.gap = 0.0;
    sp.seed = 700 + i;
    const auto scene = generate_scene(sp);
    const auto sim = simulate_passes(scene, 6, NoiseModel{0.8, 0.2, 0.15, false}, 900 + i);

    const auto cands = extract_candidates(sim.dense[0], 0.5);
    candidates += cands.size();
    const auto ref = pixels_of(oracle::nms(cands, 0.5, 48, 48));
    nms_same += pixels_of(nms(cands, 0.5, 48, 48)) == ref &&
                pixels_of(nms(cands, 0.5, 48, 48, NmsOptions{true})) == ref;

    SceneParams big = sp;
    big.width = big.height = 96;
    big.instances = 12;
    const auto masks = to_masks(
        simulate_passes(generate_scene(big), 8, NoiseModel{0.7, 0.25, 0.0, false}, 500 + i)
            .instances,
        96, 96);
    for (const auto& m : masks) predictions += m.masks.size();
    const auto a = cluster_bsas(masks, 0.5);
    const auto b = cluster_bsas_naive(masks, 0.5);
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      same = a[k].id == b[k].id && a[k].members.size() == b[k].members.size();
      for (std::size_t j = 0; same && j < a[k].members.size(); ++j) {
        same = a[k].members[j].pass_id == b[k].members[j].pass_id &&
               a[k].members[j].index == b[k].members[j].index;
      }
    }
    bsas_same += same;
  }
  o.detail << "NMS identical " << nms_same << "/50 (" << candidates << " candidates), BSAS identical "
           << bsas_same << "/50 (" << predictions << " predictions) ";
  o.require(nms_same == 50, "NMS equivalence");
  o.require(bsas_same == 50, "BSAS equivalence");
}

// 8 -------------------------------------------------------------------------

void geometry_suite(Outcome& o) {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int raster_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const auto p =
        oracle::random_polygon(rng, 10 + 44 * u(rng), 10 + 44 * u(rng), 8 + t % 25, 1, 14, 0.5);
    raster_ok += oracle::to_dense(rasterize(p, 64, 64)).bits == oracle::raster(p, 64, 64).bits;
  }
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const auto a = oracle::random_polygon(rng, 40.5, 40.5, 16, 10, 20);
    const double s = 0.8 + 0.4 * u(rng), e1 = 0.15 * u(rng), e2 = 0.08 * u(rng);
    const double p1 = 2 * std::numbers::pi * u(rng), p2 = 2 * std::numbers::pi * u(rng);
    auto b = a;
    for (int i = 0; i < 16; ++i) {
      const double ang = 2 * std::numbers::pi * i / 16;
      b.radii[i] *= s * (1 + e1 * std::cos(ang + p1) + e2 * std::cos(2 * ang + p2));
    }
    const double exact = oracle::iou(oracle::raster(a, 81, 81), oracle::raster(b, 81, 81));
    worst = std::max(worst, std::abs(iou_radial_same_center(a, b) - exact));
  }
  std::size_t bands = 0, nested = 0;
  for (const auto& t : g_hetero_runs) {
    for (const auto& c : t.report.clusters) {
      if (!c.band) continue;
      ++bands;
      const auto in = rasterize(c.band->inner, t.report.width, t.report.height);
      const auto out = rasterize(c.band->outer, t.report.width, t.report.height);
      nested += intersection_count(in, out) == in.count();
    }
  }
  o.detail << "raster exact " << raster_ok << "/100, max |radial IoU - raster IoU| " << worst
           << ", bands nested " << nested << "/" << bands << " ";
  o.require(raster_ok == 100, "rasterization");
  o.require(worst <= 0.05, "same-center IoU within 0.05");
  o.require(bands > 0 && nested == bands, "band nesting on criterion 4 runs");
}

// 9 -------------------------------------------------------------------------

void calibration_oracle(Outcome& o) {
  auto bin = [](std::size_t n, double conf, double acc) { return ReliabilityBin{0, 0, n, conf, acc}; };
  const std::vector<ReliabilityBin> two{bin(2, 0.8, 0.5), bin(2, 0.6, 0.5)};
  const std::vector<ReliabilityBin> one{bin(1, 0.9, 0.4)};
  const std::vector<ReliabilityBin> ident{bin(1, 0.1, 0.1), bin(2, 0.5, 0.5), bin(3, 0.9, 0.9)};
  const std::vector<ReliabilityBin> down{bin(1, 0.1, 0.9), bin(2, 0.5, 0.6), bin(3, 0.9, 0.2)};
  const double e2 = ece(two), m2 = mce(two), e1 = ece(one), ri = pearson_r(ident), rd = pearson_r(down);
  o.detail << "ECE " << e2 << ", MCE " << m2 << ", single-bin ECE " << e1 << ", R identity " << ri
           << ", R decreasing " << rd << " ";
  o.require(std::abs(e2 - 0.2) <= 1e-12, "ECE 0.2");
  o.require(std::abs(m2 - 0.3) <= 1e-12, "MCE 0.3");
  o.require(std::abs(e1 - 0.5) <= 1e-12, "single-bin ECE 0.5");
  o.require(std::abs(ri - 1.0) <= 1e-12, "R = 1 on the identity");
  o.require(rd < 0.0, "R < 0 when decreasing");
  o.require(ece(ident) == 0.0 && mce(ident) == 0.0, "perfect calibration 0");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 = no limit
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "four-pass fixture", 0, four_pass_fixture},
      {2, "noiseless limit", 10, noiseless_limit},
      {3, "certainty score oracle", 0, certainty_oracle},
      {4, "hybrid calibration superiority", 120, hybrid_superiority},
      {5, "convergence with passes", 300, convergence},
      {6, "clustering complexity", 300, complexity},
      {7, "optimized vs naive equivalence", 0, oracle_equivalence},
      {8, "geometry suite", 0, geometry_suite},
      {9, "calibration metric oracle", 0, calibration_oracle},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) o.require(false, "runtime limit");
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s(%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
