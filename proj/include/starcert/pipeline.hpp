#pragma once

// End-to-end runs: samples -> clusters -> representative prediction, band and
// certainty scores per cluster -> calibration against ground truth.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starcert/calibration.hpp"
#include "starcert/certainty.hpp"
#include "starcert/clustering.hpp"
#include "starcert/samples.hpp"

namespace starcert {

enum class Method { Pixel, Radial };

const char* to_string(Method m) noexcept;
Method parse_method(const std::string& s);

struct RunConfig {
  Method method = Method::Radial;
  double iou_threshold = kDefaultIouThreshold;            // BSAS admission
  double cluster_prob_threshold = kDefaultProbClusterThreshold;  // radial membership
  double prob_threshold = kDefaultProbThreshold;          // candidate extraction
  double nms_threshold = kDefaultNmsThreshold;
  double match_threshold = kDefaultMatchThreshold;
  int bins = kDefaultBins;
  bool exact_iou = false;
};

/// Throws InvalidArgument unless every threshold is in (0, 1) and bins >= 2.
void validate(const RunConfig& config);

struct ClusterSummary {
  int id = 0;
  std::vector<int> passes;  // pass id of each member, member order
  std::optional<Pixel> center;
  // Radial approach.
  std::optional<RadialPolygon> median_polygon;
  std::optional<RadialBand> band;
  // Pixel approach.
  std::optional<BitMask> median_mask;
  std::vector<Contour> inner_contours;
  std::vector<Contour> outer_contours;
  CertaintyScores scores;

  std::size_t members() const noexcept { return passes.size(); }
  BitMask median_as_mask(int width, int height) const;
};

enum class ScoreKind { Spatial = 0, Fractional = 1, Hybrid = 2 };
inline constexpr std::array<ScoreKind, 3> kScoreKinds{ScoreKind::Spatial, ScoreKind::Fractional,
                                                      ScoreKind::Hybrid};
const char* to_string(ScoreKind k) noexcept;  // "c_spl", "c_frac", "c_hyb"
double score_of(const CertaintyScores& s, ScoreKind k) noexcept;

struct ClusterReport {
  Method method = Method::Radial;
  int width = 0;
  int height = 0;
  int passes = 0;
  int n_rays = 0;
  RunConfig config;
  std::vector<ClusterSummary> clusters;
  std::vector<int> empty_cluster_ids;
  std::optional<std::string> ground_truth;
  std::map<std::string, CalibrationReport> calibration;  // keyed by score name
};

ClusterSummary summarize(const MaskCluster& cluster, int passes);
ClusterSummary summarize(const PolygonCluster& cluster, int passes, bool exact_iou, int width,
                         int height);

/// Pixel approach on decoded instance masks.
ClusterReport run_pixel(std::span<const MaskSet> samples, int width, int height, int passes,
                        const RunConfig& config);
/// Pixel approach on dense outputs: each pass is decoded by NMS first.
ClusterReport run_pixel_dense(std::span<const DenseOutput> samples, const RunConfig& config);
/// Radial approach.
ClusterReport run_radial(std::span<const DenseOutput> samples, const RunConfig& config);

/// Matched calibration items for the three scores; is_tp is shared.
struct ScoredClusters {
  std::array<std::vector<ScoredItem>, 3> items;
  std::size_t false_negatives = 0;

  void append(const ScoredClusters& other);
};

ScoredClusters score_against(const ClusterReport& report, const LabelMask& ground_truth,
                             double match_threshold);

std::map<std::string, CalibrationReport> calibrate(const ScoredClusters& scored, int bins);

}  // namespace starcert
