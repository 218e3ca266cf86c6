#include "starcert/commands.hpp"

#include <cstdio>
#include <sstream>

#include "starcert/error.hpp"
#include "starcert/io.hpp"
#include "starcert/svg.hpp"

namespace starcert {

OutputTransaction::~OutputTransaction() {
  if (committed_) return;
  std::error_code ec;
  for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
  for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);
}

void OutputTransaction::create_directories(const fs::path& dir) {
  if (dir.empty()) return;
  std::vector<fs::path> missing;
  for (fs::path p = fs::absolute(dir); !p.empty() && !fs::exists(p); p = p.parent_path()) {
    missing.push_back(p);
    if (p == p.parent_path()) break;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + dir.string() + ": " + ec.message());
  dirs_.insert(dirs_.end(), missing.rbegin(), missing.rend());
}

fs::path OutputTransaction::file(const fs::path& file) {
  files_.push_back(file);
  return file;
}

namespace {

std::string pass_stem(int f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "pass_%03d", f);
  return buf;
}

fs::path manifest_path(const fs::path& input) {
  return fs::is_directory(input) ? input / "manifest.json" : input;
}

void ensure_parent(OutputTransaction& tx, const fs::path& file) {
  tx.create_directories(file.parent_path());
}

}  // namespace

// ---------------------------------------------------------------------------

void cmd_synth(const SynthArgs& args, std::ostream& log) {
  if (args.out.empty()) throw Error(ErrorCode::InvalidArgument, "an output directory is required");
  if (args.passes < 1) throw Error(ErrorCode::InvalidArgument, "pass count must be >= 1");
  validate(args.noise);
  const SyntheticScene scene = generate_scene(args.scene);
  const SimulatedPasses sim =
      simulate_passes(scene, args.passes, args.noise, args.noise_seed.value_or(args.scene.seed));

  OutputTransaction tx;
  tx.create_directories(args.out);

  Manifest dense;
  dense.mode = SampleMode::Dense;
  dense.width = scene.width;
  dense.height = scene.height;
  dense.n_rays = args.scene.n_rays;
  dense.passes = args.passes;
  dense.ground_truth = "ground_truth.labels.bin";
  Manifest inst = dense;
  inst.mode = SampleMode::Instances;

  for (int f = 1; f <= args.passes; ++f) {
    const std::string stem = pass_stem(f);
    PassFiles d{stem + ".probs.bin", stem + ".radial.bin", {}, {}};
    write_dense(tx.file(args.out / d.probs), tx.file(args.out / d.radial), sim.dense[f - 1]);
    dense.files.push_back(d);

    std::vector<RadialPolygon> polys;
    for (const Prediction& p : sim.instances[f - 1].predictions) {
      polys.push_back(std::get<RadialPolygon>(p));
    }
    PassFiles i{{}, {}, stem + ".polygons.csv", {}};
    write_polygons_csv(tx.file(args.out / i.polygons), f, polys, args.scene.n_rays);
    inst.files.push_back(i);
  }
  write_labels(tx.file(args.out / *dense.ground_truth), scene.gt_mask);
  write_manifest(tx.file(args.out / "manifest.json"), dense);
  write_manifest(tx.file(args.out / "manifest_instances.json"), inst);
  tx.commit();

  log << "synth: " << scene.gt_polygons.size() << " instances, " << args.passes << " passes, "
      << scene.width << "x" << scene.height << " -> " << args.out.string() << '\n';
}

ClusterReport cmd_cluster(const ClusterArgs& args, std::ostream& log) {
  if (args.out.empty()) throw Error(ErrorCode::InvalidArgument, "an output path is required");
  validate(args.config);
  const Manifest m = read_manifest(manifest_path(args.input));

  ClusterReport report;
  if (args.config.method == Method::Radial) {
    if (m.mode != SampleMode::Dense) {
      throw Error(ErrorCode::InvalidArgument,
                  "the radial method needs dense samples; this manifest holds instances");
    }
    report = run_radial(load_dense(m), args.config);
  } else if (m.mode == SampleMode::Dense) {
    report = run_pixel_dense(load_dense(m), args.config);
  } else {
    const auto masks = to_masks(load_instances(m), m.width, m.height);
    report = run_pixel(masks, m.width, m.height, m.passes, args.config);
    report.n_rays = m.n_rays;
  }

  std::optional<fs::path> gt = args.ground_truth;
  if (!gt && m.ground_truth) gt = m.resolve(*m.ground_truth);
  if (gt) {
    if (!fs::exists(*gt)) throw Error(ErrorCode::MissingFile, "missing ground truth " + gt->string());
    const LabelMask labels = read_labels(*gt, m.width, m.height);
    report.ground_truth = fs::weakly_canonical(*gt).string();
    if (!report.clusters.empty()) {
      report.calibration = calibrate(score_against(report, labels, args.config.match_threshold),
                                     args.config.bins);
    }
  }

  OutputTransaction tx;
  ensure_parent(tx, args.out);
  write_report(tx.file(args.out), report);
  tx.commit();

  log << "cluster: " << report.clusters.size() << " clusters (" << to_string(report.method)
      << ", " << report.passes << " passes";
  if (!report.empty_cluster_ids.empty()) {
    log << ", " << report.empty_cluster_ids.size() << " empty";
  }
  log << ") -> " << args.out.string() << '\n';
  return report;
}

std::map<std::string, CalibrationReport> cmd_calibrate(const CalibrateArgs& args,
                                                       std::ostream& log) {
  if (args.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "an output directory is required");
  if (args.bins < 2) throw Error(ErrorCode::InvalidArgument, "bin count must be >= 2");
  if (!(args.match_threshold > 0.0 && args.match_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "match threshold must lie in (0, 1)");
  }
  const ClusterReport report = read_report(args.report);
  std::optional<fs::path> gt = args.ground_truth;
  if (!gt && report.ground_truth) gt = fs::path(*report.ground_truth);
  if (!gt) {
    throw Error(ErrorCode::MissingFile,
                "no ground truth: the report names none and --ground-truth was not given");
  }
  if (!fs::exists(*gt)) throw Error(ErrorCode::MissingFile, "missing ground truth " + gt->string());
  const LabelMask labels = read_labels(*gt, report.width, report.height);
  if (report.clusters.empty()) throw Error(ErrorCode::NoData, "the report holds no clusters");
  const auto calibration =
      calibrate(score_against(report, labels, args.match_threshold), args.bins);

  OutputTransaction tx;
  tx.create_directories(args.out_dir);
  for (const auto& [name, rep] : calibration) {
    write_reliability_csv(tx.file(args.out_dir / ("reliability_" + name + ".csv")), rep.bins);
    write_text(tx.file(args.out_dir / ("reliability_" + name + ".svg")),
               reliability_svg(rep, name));
  }
  write_calibration_summary_csv(tx.file(args.out_dir / "calibration_summary.csv"), calibration);
  write_calibration_json(tx.file(args.out_dir / "calibration.json"), calibration, args.bins,
                         args.match_threshold);
  write_text(tx.file(args.out_dir / "overlay.svg"), overlay_svg(report, &labels));
  tx.commit();

  for (const auto& [name, rep] : calibration) {
    log << name << ": ECE " << rep.ece << ", MCE " << rep.mce << ", R ";
    if (rep.pearson_r) {
      log << *rep.pearson_r;
    } else {
      log << "undefined";
    }
    log << '\n';
  }
  return calibration;
}

BenchResult cmd_bench(const BenchArgs& args, std::ostream& log) {
  if (args.out.empty()) throw Error(ErrorCode::InvalidArgument, "an output path is required");
  const BenchResult result = run_bench(args.options, &log);
  OutputTransaction tx;
  ensure_parent(tx, args.out);
  write_bench_csv(tx.file(args.out).string(), result);
  tx.commit();
  log << "slope bsas " << result.bsas_slope << ", radial " << result.radial_slope << '\n';
  return result;
}

SweepResult cmd_sweep_passes(const SweepArgs& args, std::ostream& log) {
  if (args.out.empty()) throw Error(ErrorCode::InvalidArgument, "an output path is required");
  validate(args.options.suite.config);
  const SweepResult result = sweep_passes(args.options);
  OutputTransaction tx;
  ensure_parent(tx, args.out);
  write_sweep_csv(tx.file(args.out).string(), result);
  tx.commit();
  log << "sweep: " << result.pass_counts.size() << " pass counts x " << result.seeds.size()
      << " seeds -> " << args.out.string() << '\n';
  return result;
}

}  // namespace starcert
