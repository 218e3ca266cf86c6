#include "starcert/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "starcert/error.hpp"

namespace starcert {

namespace {

// Tolerance for "point lies on an edge".
constexpr double kEdgeEps = 1e-9;

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }

bool on_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const Point ap = p - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0.0 ? (ap.x * ab.x + ap.y * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = a.x + t * ab.x - p.x;
  const double dy = a.y + t * ab.y - p.y;
  return dx * dx + dy * dy <= kEdgeEps * kEdgeEps;
}

bool on_boundary(std::span<const Point> poly, Point p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  }
  return false;
}

bool crosses_row(Point a, Point b, double yc) {
  return (a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y);
}

int floor_div64(int v) { return v >= 0 ? v / 64 : -((-v + 63) / 64); }

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::MissingFile: return "missing file";
    case ErrorCode::MalformedJson: return "malformed json";
    case ErrorCode::SizeMismatch: return "size mismatch";
    case ErrorCode::UnsupportedVersion: return "unsupported version";
    case ErrorCode::InvalidManifest: return "invalid manifest";
    case ErrorCode::InvalidSample: return "invalid sample";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::EmptyOperands: return "empty operands";
    case ErrorCode::EmptyCluster: return "empty cluster";
    case ErrorCode::CenterMismatch: return "center mismatch";
    case ErrorCode::OutsidePolygon: return "point outside polygon";
    case ErrorCode::OutOfBounds: return "out of bounds";
    case ErrorCode::UndefinedCorrelation: return "undefined correlation";
    case ErrorCode::NoData: return "no data";
    case ErrorCode::SceneTooCrowded: return "scene too crowded";
    case ErrorCode::Io: return "i/o failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// RayConfig / RadialPolygon

RayConfig::RayConfig(int n) : n_(n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "ray count must be >= 3");
}

double RayConfig::angle(int i) const {
  return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_);
}

Point RayConfig::direction(int i) const {
  if ((4 * i) % n_ == 0) {
    switch ((4 * i / n_) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double a = angle(i);
  return {std::cos(a), std::sin(a)};
}

void validate(const RadialPolygon& poly) {
  if (poly.radii.size() < 3) {
    throw Error(ErrorCode::InvalidSample, "polygon needs at least 3 rays");
  }
  if (!std::isfinite(poly.cx) || !std::isfinite(poly.cy)) {
    throw Error(ErrorCode::InvalidSample, "polygon center is not finite");
  }
  for (std::size_t i = 0; i < poly.radii.size(); ++i) {
    const double r = poly.radii[i];
    if (!std::isfinite(r) || r <= 0.0) {
      std::ostringstream os;
      os << "polygon radius " << i << " must be finite and > 0 (got " << r << ")";
      throw Error(ErrorCode::InvalidSample, os.str());
    }
  }
}

std::vector<Point> vertices(const RadialPolygon& poly) {
  const RayConfig rays(poly.n_rays());
  std::vector<Point> out;
  out.reserve(poly.radii.size());
  for (int i = 0; i < rays.n(); ++i) {
    const Point d = rays.direction(i);
    out.push_back({poly.cx + poly.radii[i] * d.x, poly.cy + poly.radii[i] * d.y});
  }
  return out;
}

double polygon_area(const RadialPolygon& poly) {
  const std::size_t n = poly.radii.size();
  if (n < 3) throw Error(ErrorCode::InvalidSample, "polygon needs at least 3 rays");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += poly.radii[i] * poly.radii[(i + 1) % n];
  return 0.5 * sum * std::sin(2.0 * std::numbers::pi / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Box

// ---------------------------------------------------------------------------
// BitMask

BitMask::BitMask(int width, int height) : BitMask(width, height, Box{0, 0, width, height}) {}

BitMask::BitMask(int width, int height, Box roi) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  roi_ = intersect(roi, Box{0, 0, width, height});
  words_per_row_ = (roi_.width() + 63) / 64;
  words_.assign(std::size_t(words_per_row_) * roi_.height(), 0);
}

bool BitMask::test(int x, int y) const noexcept {
  if (!roi_.contains(x, y)) return false;
  const int lx = x - roi_.x0;
  const std::uint64_t w = words_[std::size_t(y - roi_.y0) * words_per_row_ + lx / 64];
  return (w >> (lx % 64)) & 1u;
}

void BitMask::set(int x, int y, bool value) {
  if (!roi_.contains(x, y)) {
    std::ostringstream os;
    os << "pixel (" << x << ", " << y << ") outside mask storage";
    throw Error(ErrorCode::OutOfBounds, os.str());
  }
  const int lx = x - roi_.x0;
  std::uint64_t& w = words_[std::size_t(y - roi_.y0) * words_per_row_ + lx / 64];
  const std::uint64_t bit = std::uint64_t{1} << (lx % 64);
  const bool was = (w & bit) != 0;
  if (was == value) return;
  if (value) {
    w |= bit;
    ++count_;
    if (!bounds_dirty_) bounds_ = unite(bounds_, Box{x, y, x + 1, y + 1});
  } else {
    w &= ~bit;
    --count_;
    bounds_dirty_ = true;
  }
}

Box BitMask::bounds() const {
  if (!bounds_dirty_) return bounds_;
  Box b{};
  for (int y = roi_.y0; y < roi_.y1; ++y) {
    for (int x = roi_.x0; x < roi_.x1; ++x) {
      if (test(x, y)) b = unite(b, Box{x, y, x + 1, y + 1});
    }
  }
  bounds_ = b;
  bounds_dirty_ = false;
  return bounds_;
}

std::uint64_t BitMask::window(int y, int x) const noexcept {
  if (y < roi_.y0 || y >= roi_.y1 || words_per_row_ == 0) return 0;
  const std::uint64_t* row = words_.data() + std::size_t(y - roi_.y0) * words_per_row_;
  const int lx = x - roi_.x0;
  const int k = floor_div64(lx);
  const int s = lx - 64 * k;
  auto word = [&](int i) -> std::uint64_t {
    return (i >= 0 && i < words_per_row_) ? row[i] : 0;
  };
  std::uint64_t v = word(k) >> s;
  if (s != 0) v |= word(k + 1) << (64 - s);
  return v;
}

bool operator==(const BitMask& a, const BitMask& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_ || a.count_ != b.count_) return false;
  return intersection_count(a, b) == a.count_;
}

std::size_t intersection_count(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
  }
  const Box overlap = intersect(a.bounds(), b.bounds());
  if (overlap.empty()) return 0;
  // The overlap lies inside both regions of interest, so offsets are >= 0.
  auto fetch = [](const BitMask& m, const std::uint64_t* row, int x) {
    const int lx = x - m.roi_.x0;
    const int k = lx >> 6;
    const int s = lx & 63;
    std::uint64_t v = row[k] >> s;
    if (s != 0 && k + 1 < m.words_per_row_) v |= row[k + 1] << (64 - s);
    return v;
  };
  std::size_t inter = 0;
  for (int y = overlap.y0; y < overlap.y1; ++y) {
    const std::uint64_t* ra = a.words_.data() + std::size_t(y - a.roi_.y0) * a.words_per_row_;
    const std::uint64_t* rb = b.words_.data() + std::size_t(y - b.roi_.y0) * b.words_per_row_;
    for (int x = overlap.x0; x < overlap.x1; x += 64) {
      std::uint64_t w = fetch(a, ra, x) & fetch(b, rb, x);
      const int span = overlap.x1 - x;
      if (span < 64) w &= (std::uint64_t{1} << span) - 1;
      inter += static_cast<std::size_t>(std::popcount(w));
    }
  }
  return inter;
}

std::vector<LabeledMask> split_labels(const LabelMask& labels) {
  std::map<int, Box> boxes;
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const int l = labels.at(x, y);
      if (l == 0) continue;
      auto [it, inserted] = boxes.try_emplace(l, Box{x, y, x + 1, y + 1});
      if (!inserted) it->second = unite(it->second, Box{x, y, x + 1, y + 1});
    }
  }
  std::vector<LabeledMask> out;
  std::map<int, std::size_t> slot;
  for (const auto& [label, box] : boxes) {
    slot[label] = out.size();
    out.push_back({label, BitMask(labels.width, labels.height, box)});
  }
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const int l = labels.at(x, y);
      if (l != 0) out[slot[l]].mask.set(x, y);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rasterization and IoU

bool contains(std::span<const Point> polygon, Point p) {
  if (on_boundary(polygon, p)) return true;
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    if (!crosses_row(a, b, p.y)) continue;
    const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
    if (x > p.x) inside = !inside;
  }
  return inside;
}

Box polygon_box(const RadialPolygon& poly, int width, int height) {
  const auto vs = vertices(poly);
  double minx = vs[0].x, maxx = vs[0].x, miny = vs[0].y, maxy = vs[0].y;
  for (const Point& v : vs) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  // Pixel x is a candidate iff x + 0.5 lies in [minx, maxx].
  const auto lo = [](double v) { return static_cast<int>(std::ceil(v - 0.5 - kEdgeEps)); };
  const auto hi = [](double v) { return static_cast<int>(std::floor(v - 0.5 + kEdgeEps)) + 1; };
  const Box raw{lo(minx), lo(miny), hi(maxx), hi(maxy)};
  return intersect(raw, Box{0, 0, width, height});
}

BitMask rasterize(const RadialPolygon& poly, int width, int height) {
  const Box box = polygon_box(poly, width, height);
  BitMask mask(width, height, box);
  if (box.empty()) return mask;
  const auto vs = vertices(poly);
  const std::size_t n = vs.size();
  std::vector<double> xs;
  for (int y = box.y0; y < box.y1; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vs[i];
      const Point b = vs[(i + 1) % n];
      if (crosses_row(a, b, yc)) xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int x0 = std::max(box.x0, static_cast<int>(std::ceil(xs[k] - 0.5 - kEdgeEps)));
      const int x1 = std::min(box.x1 - 1, static_cast<int>(std::floor(xs[k + 1] - 0.5 + kEdgeEps)));
      for (int x = x0; x <= x1; ++x) mask.set(x, y);
    }
    // Centers lying exactly on an edge that the crossing rule skipped
    // (horizontal edges, touching vertices) still count as inside.
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vs[i];
      const Point b = vs[(i + 1) % n];
      if (yc < std::min(a.y, b.y) - kEdgeEps || yc > std::max(a.y, b.y) + kEdgeEps) continue;
      double xl, xr;
      if (std::abs(b.y - a.y) <= kEdgeEps) {
        xl = std::min(a.x, b.x);
        xr = std::max(a.x, b.x);
      } else {
        xl = xr = a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y);
      }
      const int x0 = std::max(box.x0, static_cast<int>(std::ceil(xl - 0.5 - kEdgeEps)));
      const int x1 = std::min(box.x1 - 1, static_cast<int>(std::floor(xr - 0.5 + kEdgeEps)));
      for (int x = x0; x <= x1; ++x) {
        if (!mask.test(x, y) && on_segment({x + 0.5, yc}, a, b)) mask.set(x, y);
      }
    }
  }
  return mask;
}

double iou_mask(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
  }
  if (a.empty() && b.empty()) {
    throw Error(ErrorCode::EmptyOperands, "empty operands: IoU of two empty masks is undefined");
  }
  const std::size_t inter = intersection_count(a, b);
  const std::size_t uni = a.count() + b.count() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double iou_radial_same_center(const RadialPolygon& a, const RadialPolygon& b) {
  if (a.cx != b.cx || a.cy != b.cy) {
    throw Error(ErrorCode::CenterMismatch, "polygons do not share a center");
  }
  if (a.radii.size() != b.radii.size()) {
    throw Error(ErrorCode::CenterMismatch, "polygons use different ray counts");
  }
  const std::size_t n = a.radii.size();
  double inner = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    inner += std::min(a.radii[i], b.radii[i]) * std::min(a.radii[j], b.radii[j]);
    outer += std::max(a.radii[i], b.radii[i]) * std::max(a.radii[j], b.radii[j]);
  }
  // The common 0.5 * sin(2 pi / n) factor cancels.
  return inner / outer;
}

double ray_distance_to_boundary(Point point, double direction_angle, const RadialPolygon& poly) {
  const auto vs = vertices(poly);
  if (on_boundary(vs, point) || !contains(vs, point)) {
    std::ostringstream os;
    os << "point (" << point.x << ", " << point.y << ") is not strictly inside the polygon";
    throw Error(ErrorCode::OutsidePolygon, os.str());
  }
  const Point d{std::cos(direction_angle), std::sin(direction_angle)};
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vs[i];
    const Point e = vs[(i + 1) % n] - a;
    const double denom = cross(d, e);
    if (std::abs(denom) < 1e-15) continue;
    const Point ap = a - point;
    const double t = cross(ap, e) / denom;
    const double s = cross(ap, d) / denom;
    if (s < -1e-12 || s > 1.0 + 1e-12 || t <= 0.0) continue;
    best = std::min(best, t);
  }
  return best;
}

}  // namespace starcert
