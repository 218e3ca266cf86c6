#pragma once

// Per-cluster representative prediction, certainty scores and the data behind
// uncertainty overlays.
//
//   spatial    c_spl  = mean IoU between each member and the median prediction
//   fractional c_frac = |O_m| / F
//   hybrid     c_hyb  = c_spl * c_frac

#include <span>
#include <vector>

#include "starcert/clustering.hpp"
#include "starcert/geometry.hpp"

namespace starcert {

struct CertaintyScores {
  double spatial = 0.0;
  double fractional = 0.0;
  double hybrid = 0.0;
};

/// Linear interpolation between closest ranks; p in [0, 100].
double percentile(std::vector<double> values, double p);

/// Per-pixel median of binary membership; a pixel set in exactly half of the
/// members is set.
BitMask median_prediction_pixel(const MaskCluster& cluster);

/// Per-ray median, interpolated for even member counts.
RadialPolygon median_prediction_radial(const PolygonCluster& cluster);

double spatial_certainty(const MaskCluster& cluster, const BitMask& median);
/// Same-center radial IoU, or rasterized mask IoU when exact_iou is set
/// (width/height give the raster size).
double spatial_certainty(const PolygonCluster& cluster, const RadialPolygon& median,
                         bool exact_iou = false, int width = 0, int height = 0);

/// |O_m| / passes. Throws InvalidArgument if passes < 1 or members > passes.
double fractional_certainty(std::size_t members, int passes);

double hybrid_certainty(double spatial, double fractional);

/// Inner and outer polygons from per-ray percentiles at the cluster center.
struct RadialBand {
  RadialPolygon inner;
  RadialPolygon outer;
};

RadialBand percentile_band_radial(const PolygonCluster& cluster, double lo = 2.5,
                                  double hi = 97.5);

using Contour = std::vector<Point>;  // closed; last vertex connects to the first

/// Boundary of {pixel : value >= level} traced by marching squares over pixel
/// centers, with vertices at cell-edge midpoints.
std::vector<Contour> iso_contours(std::span<const double> values, const Box& box, double level);

/// Mean and population standard deviation of binary membership, stored over
/// `box` (the union of the member bounds), plus contours of the mean map.
struct PixelStats {
  int width = 0;
  int height = 0;
  Box box;
  std::vector<double> mean;  // row-major over box
  std::vector<double> stddev;
  std::vector<Contour> inner;  // mean >= 0.975
  std::vector<Contour> outer;  // mean >= 0.025

  double mean_at(int x, int y) const;
  double std_at(int x, int y) const;
};

inline constexpr double kInnerContourLevel = 0.975;
inline constexpr double kOuterContourLevel = 0.025;

PixelStats pixel_stats(const MaskCluster& cluster);

}  // namespace starcert
