#include <limits>
#include <set>
#include <sstream>

#include "starcert/clustering.hpp"
#include "starcert/error.hpp"

namespace starcert {

namespace {

void check_inputs(std::span<const MaskSet> samples, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IoU threshold must lie in (0, 1)");
  }
  std::set<int> seen;
  int width = -1, height = -1;
  for (const MaskSet& s : samples) {
    if (!seen.insert(s.pass_id).second) {
      std::ostringstream os;
      os << "pass " << s.pass_id << " appears twice";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    for (const BitMask& m : s.masks) {
      if (width < 0) {
        width = m.width();
        height = m.height();
      } else if (m.width() != width || m.height() != height) {
        throw Error(ErrorCode::DimensionMismatch, "prediction masks have different dimensions");
      }
    }
  }
}

bool boxes_overlap(const Box& a, const Box& b) { return !intersect(a, b).empty(); }

struct Working {
  MaskCluster cluster;
  int last_pass = std::numeric_limits<int>::min();
};

double full_scan_iou(const BitMask& a, const BitMask& b) {
  std::size_t inter = 0, uni = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const bool pa = a.test(x, y), pb = b.test(x, y);
      inter += pa && pb;
      uni += pa || pb;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::vector<MaskCluster> cluster_bsas(std::span<const MaskSet> samples, double iou_threshold) {
  check_inputs(samples, iou_threshold);
  std::vector<Working> clusters;
  for (const MaskSet& s : samples) {
    for (std::size_t k = 0; k < s.masks.size(); ++k) {
      const BitMask& mask = s.masks[k];
      const Box box = mask.bounds();
      std::size_t best = clusters.size();
      double best_mean = -1.0;
      if (!mask.empty()) {
        for (std::size_t c = 0; c < clusters.size(); ++c) {
          Working& w = clusters[c];
          if (w.last_pass == s.pass_id) continue;
          double sum = 0.0;
          bool eligible = true;
          for (const MaskMember& m : w.cluster.members) {
            if (m.mask.empty() || !boxes_overlap(box, m.mask.bounds())) {
              eligible = false;
              break;
            }
            const double iou = iou_mask(mask, m.mask);
            if (iou < iou_threshold) {
              eligible = false;
              break;
            }
            sum += iou;
          }
          if (!eligible) continue;
          const double mean = sum / static_cast<double>(w.cluster.members.size());
          if (mean > best_mean) {
            best_mean = mean;
            best = c;
          }
        }
      }
      if (best == clusters.size()) {
        clusters.push_back({MaskCluster{static_cast<int>(clusters.size()) + 1, {}}, 0});
      }
      clusters[best].cluster.members.push_back({s.pass_id, k, mask});
      clusters[best].last_pass = s.pass_id;
    }
  }
  std::vector<MaskCluster> out;
  out.reserve(clusters.size());
  for (auto& w : clusters) out.push_back(std::move(w.cluster));
  return out;
}

std::vector<MaskCluster> cluster_bsas_naive(std::span<const MaskSet> samples,
                                            double iou_threshold) {
  check_inputs(samples, iou_threshold);
  std::vector<MaskCluster> clusters;
  for (const MaskSet& s : samples) {
    for (std::size_t k = 0; k < s.masks.size(); ++k) {
      const BitMask& mask = s.masks[k];
      std::size_t best = clusters.size();
      double best_mean = -1.0;
      for (std::size_t c = 0; c < clusters.size(); ++c) {
        bool same_pass = false;
        bool all_above = true;
        double sum = 0.0;
        for (const MaskMember& m : clusters[c].members) {
          same_pass = same_pass || m.pass_id == s.pass_id;
          const double iou = full_scan_iou(mask, m.mask);
          if (mask.empty() || m.mask.empty() || iou < iou_threshold) all_above = false;
          sum += iou;
        }
        if (same_pass || !all_above) continue;
        const double mean = sum / static_cast<double>(clusters[c].members.size());
        if (mean > best_mean) {
          best_mean = mean;
          best = c;
        }
      }
      if (best == clusters.size()) {
        clusters.push_back(MaskCluster{static_cast<int>(clusters.size()) + 1, {}});
      }
      clusters[best].members.push_back({s.pass_id, k, mask});
    }
  }
  return clusters;
}

}  // namespace starcert
