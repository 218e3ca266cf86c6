#pragma once

// Star-convex polygons, bit masks and the IoU primitives shared by every
// other module.
//
// Conventions used throughout the library:
//  * ray i points along angle 2*pi*i/n, starting at +x;
//  * image y grows downward, so increasing angles sweep clockwise on screen;
//  * pixel (x, y) is sampled at its center (x + 0.5, y + 0.5).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace starcert {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

/// Number of equidistant ray directions. Angles are never stored.
class RayConfig {
 public:
  explicit RayConfig(int n);
  int n() const noexcept { return n_; }
  double angle(int i) const;
  /// Unit direction of ray i; exact for quarter turns.
  Point direction(int i) const;

 private:
  int n_;
};

/// Center plus one positive distance per ray.
struct RadialPolygon {
  double cx = 0.0;
  double cy = 0.0;
  std::vector<double> radii;

  RadialPolygon() = default;
  RadialPolygon(double cx_, double cy_, std::vector<double> radii_)
      : cx(cx_), cy(cy_), radii(std::move(radii_)) {}

  int n_rays() const noexcept { return static_cast<int>(radii.size()); }
  Point center() const noexcept { return {cx, cy}; }
  bool operator==(const RadialPolygon&) const = default;
};

/// Throws InvalidSample unless the polygon has >= 3 finite positive radii.
void validate(const RadialPolygon& poly);

/// Half-open integer box [x0, x1) x [y0, y1).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool empty() const noexcept { return x1 <= x0 || y1 <= y0; }
  int width() const noexcept { return empty() ? 0 : x1 - x0; }
  int height() const noexcept { return empty() ? 0 : y1 - y0; }
  bool contains(int x, int y) const noexcept {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  bool operator==(const Box&) const = default;
};

inline Box intersect(const Box& a, const Box& b) noexcept {
  const Box r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
              std::min(a.y1, b.y1)};
  return r.empty() ? Box{} : r;
}

inline Box unite(const Box& a, const Box& b) noexcept {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

/// Binary mask over a width x height image. Storage covers only a region of
/// interest (bit-packed rows), so small instances in large images stay cheap.
/// Pixels outside the region read as unset.
class BitMask {
 public:
  BitMask() = default;
  /// Empty mask whose region of interest is the whole image.
  BitMask(int width, int height);
  /// Empty mask storing only `roi` (clipped to the image).
  BitMask(int width, int height, Box roi);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Box roi() const noexcept { return roi_; }

  bool test(int x, int y) const noexcept;
  /// Throws OutOfBounds if (x, y) is outside the region of interest.
  void set(int x, int y, bool value = true);

  std::size_t count() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  /// Tight bounding box of the set pixels (empty box for an empty mask).
  Box bounds() const;

  /// 64 pixels of row y starting at image column x; bit k is column x + k.
  std::uint64_t window(int y, int x) const noexcept;

  friend bool operator==(const BitMask& a, const BitMask& b);
  friend std::size_t intersection_count(const BitMask& a, const BitMask& b);

 private:
  int width_ = 0;
  int height_ = 0;
  Box roi_{};
  int words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
  mutable Box bounds_{};
  mutable bool bounds_dirty_ = false;
};

/// Pixels set in both masks. Dimensions must agree.
std::size_t intersection_count(const BitMask& a, const BitMask& b);

/// Instance labels over an image; 0 is background.
struct LabelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  LabelMask() = default;
  LabelMask(int w, int h) : width(w), height(h), labels(std::size_t(w) * h, 0) {}

  std::uint16_t at(int x, int y) const { return labels[std::size_t(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return labels[std::size_t(y) * width + x]; }
};

struct LabeledMask {
  int label = 0;
  BitMask mask;
};

/// One mask per positive label, ordered by label.
std::vector<LabeledMask> split_labels(const LabelMask& labels);

std::vector<Point> vertices(const RadialPolygon& poly);

/// Shoelace area: 0.5 * sum r_i r_{i+1} sin(2 pi / n).
double polygon_area(const RadialPolygon& poly);

/// Pixel-space bounding box of all pixels the polygon could cover.
Box polygon_box(const RadialPolygon& poly, int width, int height);

/// Even-odd point-in-polygon with points on an edge counted as inside.
bool contains(std::span<const Point> polygon, Point p);

/// Pixel (x, y) is set iff (x + 0.5, y + 0.5) lies inside the vertex polygon.
BitMask rasterize(const RadialPolygon& poly, int width, int height);

/// Pixel-counting IoU. Throws DimensionMismatch or EmptyOperands.
double iou_mask(const BitMask& a, const BitMask& b);

/// area(min radii) / area(max radii) for two polygons sharing a center.
///
/// This approximates the mask IoU: it is exact for the sampled rays only.
/// Throws CenterMismatch when the centers or ray counts differ.
double iou_radial_same_center(const RadialPolygon& a, const RadialPolygon& b);

/// Distance along the ray from `point` to the first boundary crossing.
/// Throws OutsidePolygon unless `point` is strictly inside the polygon.
double ray_distance_to_boundary(Point point, double direction_angle,
                                const RadialPolygon& poly);

}  // namespace starcert
