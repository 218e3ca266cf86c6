#pragma once

#include <vector>

#include "starcert/geometry.hpp"
#include "starcert/samples.hpp"

namespace starcert {

inline constexpr double kDefaultProbThreshold = 0.5;
inline constexpr double kDefaultNmsThreshold = 0.5;

/// A pixel proposal: its probability and the polygon its radial distances
/// describe, centered at the pixel center.
struct Candidate {
  Pixel pixel;
  double prob = 0.0;
  RadialPolygon polygon;
};

/// One candidate per pixel with prob >= prob_threshold, sorted by descending
/// probability with ties broken by (y, x). Pixels whose radial distances are
/// not all positive describe no polygon and are skipped.
std::vector<Candidate> extract_candidates(const DenseOutput& g, double prob_threshold);

struct NmsOptions {
  /// Compare every candidate against every accepted one instead of only the
  /// accepted candidates whose grid cells overlap. Results are identical.
  bool exact_iou = false;
  int grid_cell = 32;
};

/// Greedy suppression by rasterized mask IoU: a candidate is accepted iff its
/// IoU with every previously accepted candidate is < nms_threshold. Input must
/// be ordered as extract_candidates produces it; output keeps acceptance order.
std::vector<Candidate> nms(const std::vector<Candidate>& candidates, double nms_threshold,
                           int width, int height, const NmsOptions& options = {});

/// extract_candidates followed by nms.
std::vector<Candidate> decode(const DenseOutput& g, double prob_threshold,
                              double nms_threshold, const NmsOptions& options = {});

}  // namespace starcert
