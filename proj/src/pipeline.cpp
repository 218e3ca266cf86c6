#include "starcert/pipeline.hpp"

#include "starcert/error.hpp"
#include "starcert/nms.hpp"

namespace starcert {

namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
  }
}

CertaintyScores make_scores(double spatial, std::size_t members, int passes) {
  CertaintyScores s;
  s.spatial = spatial;
  s.fractional = fractional_certainty(members, passes);
  s.hybrid = hybrid_certainty(s.spatial, s.fractional);
  return s;
}

}  // namespace

const char* to_string(Method m) noexcept { return m == Method::Pixel ? "pixel" : "radial"; }

Method parse_method(const std::string& s) {
  if (s == "pixel") return Method::Pixel;
  if (s == "radial") return Method::Radial;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "' (pixel|radial)");
}

void validate(const RunConfig& c) {
  check_unit(c.iou_threshold, "IoU threshold");
  check_unit(c.cluster_prob_threshold, "cluster probability threshold");
  check_unit(c.prob_threshold, "probability threshold");
  check_unit(c.nms_threshold, "NMS threshold");
  check_unit(c.match_threshold, "match threshold");
  if (c.bins < 2) throw Error(ErrorCode::InvalidArgument, "bin count must be >= 2");
}

const char* to_string(ScoreKind k) noexcept {
  switch (k) {
    case ScoreKind::Spatial: return "c_spl";
    case ScoreKind::Fractional: return "c_frac";
    case ScoreKind::Hybrid: return "c_hyb";
  }
  return "?";
}

double score_of(const CertaintyScores& s, ScoreKind k) noexcept {
  switch (k) {
    case ScoreKind::Spatial: return s.spatial;
    case ScoreKind::Fractional: return s.fractional;
    case ScoreKind::Hybrid: return s.hybrid;
  }
  return 0.0;
}

BitMask ClusterSummary::median_as_mask(int width, int height) const {
  if (median_polygon) return rasterize(*median_polygon, width, height);
  if (median_mask) return *median_mask;
  throw Error(ErrorCode::EmptyCluster, "cluster has no median prediction");
}

ClusterSummary summarize(const MaskCluster& cluster, int passes) {
  ClusterSummary s;
  s.id = cluster.id;
  for (const auto& m : cluster.members) s.passes.push_back(m.pass_id);
  BitMask median = median_prediction_pixel(cluster);
  const PixelStats stats = pixel_stats(cluster);
  s.inner_contours = stats.inner;
  s.outer_contours = stats.outer;
  s.scores = make_scores(spatial_certainty(cluster, median), cluster.members.size(), passes);
  s.median_mask = std::move(median);
  return s;
}

ClusterSummary summarize(const PolygonCluster& cluster, int passes, bool exact_iou, int width,
                         int height) {
  ClusterSummary s;
  s.id = cluster.id;
  s.center = cluster.center;
  for (const auto& m : cluster.members) s.passes.push_back(m.pass_id);
  RadialPolygon median = median_prediction_radial(cluster);
  s.band = percentile_band_radial(cluster);
  s.scores = make_scores(spatial_certainty(cluster, median, exact_iou, width, height),
                         cluster.members.size(), passes);
  s.median_polygon = std::move(median);
  return s;
}

ClusterReport run_pixel(std::span<const MaskSet> samples, int width, int height, int passes,
                        const RunConfig& config) {
  validate(config);
  ClusterReport r;
  r.method = Method::Pixel;
  r.width = width;
  r.height = height;
  r.passes = passes;
  r.config = config;
  for (const MaskCluster& c : cluster_bsas(samples, config.iou_threshold)) {
    r.clusters.push_back(summarize(c, passes));
  }
  return r;
}

ClusterReport run_pixel_dense(std::span<const DenseOutput> samples, const RunConfig& config) {
  validate(config);
  if (samples.empty()) throw Error(ErrorCode::NoData, "no dense samples");
  std::vector<MaskSet> sets;
  const NmsOptions opts{config.exact_iou};
  for (std::size_t f = 0; f < samples.size(); ++f) {
    const DenseOutput& g = samples[f];
    MaskSet set{static_cast<int>(f) + 1, {}};
    for (const Candidate& c : decode(g, config.prob_threshold, config.nms_threshold, opts)) {
      set.masks.push_back(rasterize(c.polygon, g.width, g.height));
    }
    sets.push_back(std::move(set));
  }
  ClusterReport r = run_pixel(sets, samples[0].width, samples[0].height,
                              static_cast<int>(samples.size()), config);
  r.n_rays = samples[0].n_rays;
  return r;
}

ClusterReport run_radial(std::span<const DenseOutput> samples, const RunConfig& config) {
  validate(config);
  if (samples.empty()) throw Error(ErrorCode::NoData, "no dense samples");
  const DenseOutput& first = samples.front();
  ClusterReport r;
  r.method = Method::Radial;
  r.width = first.width;
  r.height = first.height;
  r.passes = static_cast<int>(samples.size());
  r.n_rays = first.n_rays;
  r.config = config;
  const MeanDense mean = mean_dense(samples);
  const CenterSet centers =
      extract_centers(mean, config.prob_threshold, config.nms_threshold, {config.exact_iou});
  RadialClustering rc = cluster_radial(samples, centers, config.cluster_prob_threshold);
  for (const PolygonCluster& c : rc.clusters) {
    r.clusters.push_back(summarize(c, r.passes, config.exact_iou, r.width, r.height));
  }
  r.empty_cluster_ids = std::move(rc.empty_cluster_ids);
  return r;
}

void ScoredClusters::append(const ScoredClusters& other) {
  for (std::size_t k = 0; k < items.size(); ++k) {
    items[k].insert(items[k].end(), other.items[k].begin(), other.items[k].end());
  }
  false_negatives += other.false_negatives;
}

ScoredClusters score_against(const ClusterReport& report, const LabelMask& ground_truth,
                             double match_threshold) {
  if (ground_truth.width != report.width || ground_truth.height != report.height) {
    throw Error(ErrorCode::DimensionMismatch, "ground truth dimensions differ from the report");
  }
  std::vector<BitMask> masks;
  std::vector<double> unused(report.clusters.size(), 0.0);
  masks.reserve(report.clusters.size());
  for (const auto& c : report.clusters) masks.push_back(c.median_as_mask(report.width, report.height));
  const MatchResult match = match_ground_truth(masks, unused, ground_truth, match_threshold);

  ScoredClusters out;
  out.false_negatives = match.false_negatives;
  for (ScoreKind k : kScoreKinds) {
    auto& items = out.items[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < report.clusters.size(); ++i) {
      items.push_back({score_of(report.clusters[i].scores, k), match.items[i].is_tp});
    }
  }
  return out;
}

std::map<std::string, CalibrationReport> calibrate(const ScoredClusters& scored, int bins) {
  std::map<std::string, CalibrationReport> out;
  for (ScoreKind k : kScoreKinds) {
    out[to_string(k)] =
        calibrate(scored.items[static_cast<std::size_t>(k)], bins, scored.false_negatives);
  }
  return out;
}

}  // namespace starcert
