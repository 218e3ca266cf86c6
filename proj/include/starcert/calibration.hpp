#pragma once

// Ground-truth matching, reliability diagrams and scalar calibration errors.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "starcert/geometry.hpp"

namespace starcert {

inline constexpr double kDefaultMatchThreshold = 0.5;
inline constexpr int kDefaultBins = 10;

struct ScoredItem {
  double score = 0.0;
  bool is_tp = false;
};

struct MatchResult {
  std::vector<ScoredItem> items;  // one per prediction, input order
  std::vector<int> matched_label; // 0 when the prediction is a false positive
  std::vector<double> matched_iou;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;  // ground-truth instances left unmatched
};

/// Greedy one-to-one matching: every (prediction, instance) pair with
/// IoU >= match_threshold, taken in descending IoU order (ties by prediction
/// index, then label). Matched predictions are true positives.
MatchResult match_ground_truth(std::span<const BitMask> predictions,
                               std::span<const double> scores, const LabelMask& ground_truth,
                               double match_threshold = kDefaultMatchThreshold);

struct ReliabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;  // true-positive fraction
};

/// Bin b (1-based) covers ((b-1)/B, b/B]; bin 1 also takes score 0.
std::vector<ReliabilityBin> reliability_diagram(std::span<const ScoredItem> items, int bins);

/// Count-weighted mean |accuracy - confidence|. Throws NoData if every bin is empty.
double ece(std::span<const ReliabilityBin> bins);
/// Largest |accuracy - confidence| over non-empty bins. Throws NoData if every bin is empty.
double mce(std::span<const ReliabilityBin> bins);
/// Pearson correlation of (confidence, accuracy) over non-empty bins.
/// Throws UndefinedCorrelation with fewer than two bins or zero variance.
double pearson_r(std::span<const ReliabilityBin> bins);

struct CalibrationReport {
  std::vector<ReliabilityBin> bins;
  std::optional<double> pearson_r;  // empty when undefined
  double ece = 0.0;
  double mce = 0.0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::size_t false_negatives = 0;
};

CalibrationReport calibrate(std::span<const ScoredItem> items, int bins,
                            std::size_t false_negatives = 0);

}  // namespace starcert
