#include "starcert/certainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "starcert/error.hpp"

namespace starcert {

namespace {

template <typename Cluster>
void require_members(const Cluster& c) {
  if (c.members.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
}

Box member_union(const MaskCluster& c) {
  Box b{};
  for (const auto& m : c.members) b = unite(b, m.mask.bounds());
  return b;
}

std::vector<double> ray_values(const PolygonCluster& c, std::size_t ray) {
  std::vector<double> v;
  v.reserve(c.members.size());
  for (const auto& m : c.members) v.push_back(m.polygon.radii.at(ray));
  return v;
}

RadialPolygon per_ray_percentile(const PolygonCluster& c, double p) {
  require_members(c);
  const std::size_t n = c.members.front().polygon.radii.size();
  RadialPolygon out(c.center.x + 0.5, c.center.y + 0.5, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) out.radii[i] = percentile(ray_values(c, i), p);
  return out;
}

using Key = std::pair<int, int>;  // doubled pixel-center coordinates

}  // namespace

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::NoData, "percentile of no values");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw Error(ErrorCode::InvalidArgument, "percentile must lie in [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BitMask median_prediction_pixel(const MaskCluster& cluster) {
  require_members(cluster);
  const BitMask& first = cluster.members.front().mask;
  const Box box = member_union(cluster);
  BitMask out(first.width(), first.height(), box);
  const std::size_t n = cluster.members.size();
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) {
      std::size_t votes = 0;
      for (const auto& m : cluster.members) votes += m.mask.test(x, y);
      if (2 * votes >= n && votes > 0) out.set(x, y);
    }
  }
  return out;
}

RadialPolygon median_prediction_radial(const PolygonCluster& cluster) {
  return per_ray_percentile(cluster, 50.0);
}

double spatial_certainty(const MaskCluster& cluster, const BitMask& median) {
  require_members(cluster);
  double sum = 0.0;
  for (const auto& m : cluster.members) sum += iou_mask(m.mask, median);
  return sum / static_cast<double>(cluster.members.size());
}

double spatial_certainty(const PolygonCluster& cluster, const RadialPolygon& median,
                         bool exact_iou, int width, int height) {
  require_members(cluster);
  double sum = 0.0;
  if (exact_iou) {
    const BitMask med = rasterize(median, width, height);
    for (const auto& m : cluster.members) sum += iou_mask(rasterize(m.polygon, width, height), med);
  } else {
    for (const auto& m : cluster.members) sum += iou_radial_same_center(m.polygon, median);
  }
  return sum / static_cast<double>(cluster.members.size());
}

double fractional_certainty(std::size_t members, int passes) {
  if (passes < 1) throw Error(ErrorCode::InvalidArgument, "pass count must be >= 1");
  if (members > static_cast<std::size_t>(passes)) {
    throw Error(ErrorCode::InvalidArgument, "cluster has more members than passes");
  }
  return static_cast<double>(members) / static_cast<double>(passes);
}

double hybrid_certainty(double spatial, double fractional) { return spatial * fractional; }

RadialBand percentile_band_radial(const PolygonCluster& cluster, double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 100.0)) {
    throw Error(ErrorCode::InvalidArgument, "band percentiles must satisfy 0 <= lo < hi <= 100");
  }
  return {per_ray_percentile(cluster, lo), per_ray_percentile(cluster, hi)};
}

// ---------------------------------------------------------------------------
// Marching squares

std::vector<Contour> iso_contours(std::span<const double> values, const Box& box, double level) {
  if (values.size() != std::size_t(box.width()) * box.height()) {
    throw Error(ErrorCode::SizeMismatch, "value map does not match its box");
  }
  auto on = [&](int x, int y) -> int {
    if (!box.contains(x, y)) return 0;
    return values[std::size_t(y - box.y0) * box.width() + (x - box.x0)] >= level;
  };

  std::map<Key, std::vector<Key>> adj;
  auto link = [&](Key a, Key b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };

  for (int y = box.y0 - 1; y < box.y1; ++y) {
    for (int x = box.x0 - 1; x < box.x1; ++x) {
      const int code = on(x, y) * 8 + on(x + 1, y) * 4 + on(x + 1, y + 1) * 2 + on(x, y + 1);
      const Key top{2 * x + 2, 2 * y + 1};
      const Key right{2 * x + 3, 2 * y + 2};
      const Key bottom{2 * x + 2, 2 * y + 3};
      const Key left{2 * x + 1, 2 * y + 2};
      switch (code) {
        case 1: case 14: link(left, bottom); break;
        case 2: case 13: link(bottom, right); break;
        case 3: case 12: link(left, right); break;
        case 4: case 11: link(top, right); break;
        case 6: case 9: link(top, bottom); break;
        case 7: case 8: link(left, top); break;
        // Diagonal saddles keep the two set corners apart.
        case 5: link(top, right); link(left, bottom); break;
        case 10: link(left, top); link(bottom, right); break;
        default: break;
      }
    }
  }

  std::vector<Contour> out;
  std::map<Key, bool> used;
  for (const auto& [start, _] : adj) {
    if (used[start]) continue;
    Contour loop;
    Key prev{std::numeric_limits<int>::min(), 0};
    Key cur = start;
    while (true) {
      used[cur] = true;
      loop.push_back({cur.first / 2.0, cur.second / 2.0});
      const auto& nb = adj[cur];
      const Key next = nb[0] != prev ? nb[0] : nb[1];
      if (next == start || used[next]) break;
      prev = cur;
      cur = next;
    }
    out.push_back(std::move(loop));
  }
  return out;
}

double PixelStats::mean_at(int x, int y) const {
  if (!box.contains(x, y)) return 0.0;
  return mean[std::size_t(y - box.y0) * box.width() + (x - box.x0)];
}

double PixelStats::std_at(int x, int y) const {
  if (!box.contains(x, y)) return 0.0;
  return stddev[std::size_t(y - box.y0) * box.width() + (x - box.x0)];
}

PixelStats pixel_stats(const MaskCluster& cluster) {
  require_members(cluster);
  PixelStats s;
  s.width = cluster.members.front().mask.width();
  s.height = cluster.members.front().mask.height();
  s.box = member_union(cluster);
  const std::size_t cells = std::size_t(s.box.width()) * s.box.height();
  s.mean.assign(cells, 0.0);
  s.stddev.assign(cells, 0.0);
  const double n = static_cast<double>(cluster.members.size());
  for (int y = s.box.y0; y < s.box.y1; ++y) {
    for (int x = s.box.x0; x < s.box.x1; ++x) {
      std::size_t votes = 0;
      for (const auto& m : cluster.members) votes += m.mask.test(x, y);
      const double p = static_cast<double>(votes) / n;
      const std::size_t k = std::size_t(y - s.box.y0) * s.box.width() + (x - s.box.x0);
      s.mean[k] = p;
      // Population variance of a 0/1 sample with mean p.
      s.stddev[k] = std::sqrt(p * (1.0 - p));
    }
  }
  s.inner = iso_contours(s.mean, s.box, kInnerContourLevel);
  s.outer = iso_contours(s.mean, s.box, kOuterContourLevel);
  return s;
}

}  // namespace starcert
