#pragma once

// Synthetic ground truth and a forward-pass simulator standing in for
// MC-Dropout / ensemble sampling.

#include <cstdint>
#include <vector>

#include "starcert/geometry.hpp"
#include "starcert/samples.hpp"

namespace starcert {

struct SyntheticScene {
  int width = 0;
  int height = 0;
  std::vector<RadialPolygon> gt_polygons;
  LabelMask gt_mask;  // label j + 1 for gt_polygons[j]
  std::uint64_t seed = 0;
};

struct SceneParams {
  int width = 128;
  int height = 128;
  int instances = 8;
  int n_rays = 16;
  double r_min = 6.0;
  double r_max = 14.0;
  /// Relative amplitude of the sinusoidal radius perturbation.
  double smoothness = 0.2;
  /// Minimum free space between the outermost extents of two instances.
  double gap = 2.0;
  std::uint64_t seed = 0;
};

/// Centers sit on pixel centers; instances never touch each other or the
/// image border. Throws SceneTooCrowded when placement runs out of retries.
SyntheticScene generate_scene(const SceneParams& params);

struct NoiseModel {
  double p_det = 1.0;
  double sigma_radius = 0.0;  // stddev of the log radius factor
  double sigma_prob = 0.0;
  bool heterogeneous = false;  // draw p_det per instance from U[0.3, 1.0]
};

void validate(const NoiseModel& noise);

struct SimulatedPasses {
  std::vector<DenseOutput> dense;
  std::vector<PredictionSet> instances;
  std::vector<double> detection_prob;  // p_det used for each instance
};

/// Every random draw comes from a substream keyed by (seed, pass, instance),
/// so pass f is identical whatever the total pass count.
SimulatedPasses simulate_passes(const SyntheticScene& scene, int passes, const NoiseModel& noise,
                                std::uint64_t seed);

/// Object probability and radial distances of a single polygon written into
/// `out` where they beat the existing probability. Pixels inside the polygon
/// get 1 - |p - c| / rho, rho being the boundary distance from the center
/// toward p.
void paint_instance(const RadialPolygon& poly, DenseOutput& out);

}  // namespace starcert
