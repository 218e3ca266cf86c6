#include "starcert/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "starcert/error.hpp"

namespace starcert {

MatchResult match_ground_truth(std::span<const BitMask> predictions,
                               std::span<const double> scores, const LabelMask& ground_truth,
                               double match_threshold) {
  if (predictions.size() != scores.size()) {
    throw Error(ErrorCode::InvalidArgument, "one score per prediction is required");
  }
  if (!(match_threshold > 0.0 && match_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "match threshold must lie in (0, 1)");
  }
  for (const BitMask& p : predictions) {
    if (p.width() != ground_truth.width || p.height() != ground_truth.height) {
      throw Error(ErrorCode::DimensionMismatch, "prediction and ground truth dimensions differ");
    }
  }
  const auto gt = split_labels(ground_truth);

  struct Pair {
    double iou;
    std::size_t pred;
    std::size_t gt;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].empty()) continue;
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (intersect(predictions[i].bounds(), gt[j].mask.bounds()).empty()) continue;
      const double iou = iou_mask(predictions[i], gt[j].mask);
      if (iou >= match_threshold) pairs.push_back({iou, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    return std::make_tuple(-a.iou, a.pred, gt[a.gt].label) <
           std::make_tuple(-b.iou, b.pred, gt[b.gt].label);
  });

  MatchResult r;
  r.items.resize(predictions.size());
  r.matched_label.assign(predictions.size(), 0);
  r.matched_iou.assign(predictions.size(), 0.0);
  std::vector<bool> gt_used(gt.size(), false);
  for (const Pair& p : pairs) {
    if (r.matched_label[p.pred] != 0 || gt_used[p.gt]) continue;
    r.matched_label[p.pred] = gt[p.gt].label;
    r.matched_iou[p.pred] = p.iou;
    gt_used[p.gt] = true;
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    r.items[i] = {scores[i], r.matched_label[i] != 0};
    (r.items[i].is_tp ? r.true_positives : r.false_positives)++;
  }
  r.false_negatives = static_cast<std::size_t>(std::count(gt_used.begin(), gt_used.end(), false));
  return r;
}

std::vector<ReliabilityBin> reliability_diagram(std::span<const ScoredItem> items, int bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "bin count must be >= 2");
  std::vector<ReliabilityBin> out(bins);
  const double b = static_cast<double>(bins);
  for (int k = 0; k < bins; ++k) {
    out[k].lo = static_cast<double>(k) / b;
    out[k].hi = static_cast<double>(k + 1) / b;
  }
  std::vector<double> conf_sum(bins, 0.0);
  std::vector<std::size_t> tp(bins, 0);
  for (const ScoredItem& it : items) {
    if (!(it.score >= 0.0 && it.score <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "scores must lie in [0, 1]");
    }
    int k = std::clamp(static_cast<int>(std::ceil(it.score * b)) - 1, 0, bins - 1);
    // Settle rounding at the edges against the stored bounds.
    while (k > 0 && it.score <= out[k].lo) --k;
    while (k < bins - 1 && it.score > out[k].hi) ++k;
    ++out[k].count;
    conf_sum[k] += it.score;
    tp[k] += it.is_tp;
  }
  for (int k = 0; k < bins; ++k) {
    if (out[k].count == 0) continue;
    const double n = static_cast<double>(out[k].count);
    out[k].mean_confidence = conf_sum[k] / n;
    out[k].accuracy = static_cast<double>(tp[k]) / n;
  }
  return out;
}

double ece(std::span<const ReliabilityBin> bins) {
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  if (total == 0) throw Error(ErrorCode::NoData, "all bins are empty");
  double e = 0.0;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    e += static_cast<double>(b.count) / static_cast<double>(total) *
         std::abs(b.accuracy - b.mean_confidence);
  }
  return e;
}

double mce(std::span<const ReliabilityBin> bins) {
  bool any = false;
  double m = 0.0;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    any = true;
    m = std::max(m, std::abs(b.accuracy - b.mean_confidence));
  }
  if (!any) throw Error(ErrorCode::NoData, "all bins are empty");
  return m;
}

double pearson_r(std::span<const ReliabilityBin> bins) {
  std::vector<double> xs, ys;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    xs.push_back(b.mean_confidence);
    ys.push_back(b.accuracy);
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::UndefinedCorrelation, "undefined correlation: fewer than two bins");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error(ErrorCode::UndefinedCorrelation, "undefined correlation: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CalibrationReport calibrate(std::span<const ScoredItem> items, int bins,
                            std::size_t false_negatives) {
  CalibrationReport r;
  r.bins = reliability_diagram(items, bins);
  r.ece = ece(r.bins);
  r.mce = mce(r.bins);
  try {
    r.pearson_r = pearson_r(r.bins);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedCorrelation) throw;
  }
  for (const auto& it : items) (it.is_tp ? r.matched : r.unmatched)++;
  r.false_negatives = false_negatives;
  return r;
}

}  // namespace starcert
