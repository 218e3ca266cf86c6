#include "starcert/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "starcert/error.hpp"

namespace starcert {

namespace {

enum class Stream : std::uint64_t { Scene = 1, Detection = 2, Instance = 3, ProbNoise = 4 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, Stream kind, std::uint64_t pass,
                          std::uint64_t instance) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  h = splitmix64(h ^ pass);
  h = splitmix64(h ^ instance);
  return std::mt19937_64(h);
}

double max_radius(const RadialPolygon& p) {
  return *std::max_element(p.radii.begin(), p.radii.end());
}

std::optional<double> boundary_distance(Point p, double angle, const RadialPolygon& poly) {
  try {
    return ray_distance_to_boundary(p, angle, poly);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

SyntheticScene generate_scene(const SceneParams& params) {
  if (params.width <= 0 || params.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "scene dimensions must be positive");
  }
  if (params.instances < 0) throw Error(ErrorCode::InvalidArgument, "instance count must be >= 0");
  if (!(params.r_min > 0.0 && params.r_min <= params.r_max)) {
    throw Error(ErrorCode::InvalidArgument, "radii must satisfy 0 < r_min <= r_max");
  }
  if (params.smoothness < 0.0) throw Error(ErrorCode::InvalidArgument, "smoothness must be >= 0");
  const RayConfig rays(params.n_rays);

  SyntheticScene scene;
  scene.width = params.width;
  scene.height = params.height;
  scene.seed = params.seed;
  scene.gt_mask = LabelMask(params.width, params.height);

  auto rng = substream(params.seed, Stream::Scene, 0, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kHarmonics = 2;
  constexpr int kAttempts = 2000;

  for (int j = 0; j < params.instances; ++j) {
    const double base = params.r_min + (params.r_max - params.r_min) * unit(rng);
    double amp[kHarmonics], phase[kHarmonics];
    for (int k = 0; k < kHarmonics; ++k) {
      amp[k] = params.smoothness * base / (k + 1) * unit(rng);
      phase[k] = 2.0 * std::numbers::pi * unit(rng);
    }
    std::vector<double> radii(params.n_rays);
    for (int i = 0; i < params.n_rays; ++i) {
      double r = base;
      for (int k = 0; k < kHarmonics; ++k) r += amp[k] * std::cos((k + 1) * rays.angle(i) + phase[k]);
      radii[i] = std::clamp(r, params.r_min, params.r_max);
    }
    const double reach = *std::max_element(radii.begin(), radii.end());
    const int margin = static_cast<int>(std::ceil(reach)) + 1;
    const int span_x = params.width - 2 * margin;
    const int span_y = params.height - 2 * margin;

    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && span_x > 0 && span_y > 0; ++attempt) {
      const int ix = margin + static_cast<int>(unit(rng) * span_x);
      const int iy = margin + static_cast<int>(unit(rng) * span_y);
      const RadialPolygon candidate(ix + 0.5, iy + 0.5, radii);
      bool clear = true;
      for (const RadialPolygon& other : scene.gt_polygons) {
        const double d = std::hypot(other.cx - candidate.cx, other.cy - candidate.cy);
        if (d < reach + max_radius(other) + params.gap) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      scene.gt_polygons.push_back(candidate);
      placed = true;
      break;
    }
    if (!placed) {
      std::ostringstream os;
      os << "scene too crowded: could not place instance " << j + 1 << " of " << params.instances
         << " in " << params.width << "x" << params.height;
      throw Error(ErrorCode::SceneTooCrowded, os.str());
    }
  }

  for (std::size_t j = 0; j < scene.gt_polygons.size(); ++j) {
    const BitMask m = rasterize(scene.gt_polygons[j], params.width, params.height);
    const Box b = m.bounds();
    for (int y = b.y0; y < b.y1; ++y) {
      for (int x = b.x0; x < b.x1; ++x) {
        if (m.test(x, y)) scene.gt_mask.at(x, y) = static_cast<std::uint16_t>(j + 1);
      }
    }
  }
  return scene;
}

void validate(const NoiseModel& noise) {
  if (!(noise.p_det >= 0.0 && noise.p_det <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p_det must lie in [0, 1]");
  }
  if (!(noise.sigma_radius >= 0.0) || !(noise.sigma_prob >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise standard deviations must be >= 0");
  }
}

void paint_instance(const RadialPolygon& poly, DenseOutput& out) {
  const RayConfig rays(poly.n_rays());
  const BitMask mask = rasterize(poly, out.width, out.height);
  const Box b = mask.bounds();
  for (int y = b.y0; y < b.y1; ++y) {
    for (int x = b.x0; x < b.x1; ++x) {
      if (!mask.test(x, y)) continue;
      const Point p{x + 0.5, y + 0.5};
      const double dx = p.x - poly.cx, dy = p.y - poly.cy;
      const double dist = std::hypot(dx, dy);
      double prob = 1.0;
      std::vector<float> radii(poly.n_rays());
      if (dist == 0.0) {
        for (int i = 0; i < poly.n_rays(); ++i) radii[i] = static_cast<float>(poly.radii[i]);
      } else {
        const auto rho = boundary_distance(poly.center(), std::atan2(dy, dx), poly);
        if (!rho) continue;
        prob = std::max(0.0, 1.0 - dist / *rho);
        bool ok = true;
        for (int i = 0; i < poly.n_rays() && ok; ++i) {
          const auto r = boundary_distance(p, rays.angle(i), poly);
          ok = r.has_value();
          if (ok) radii[i] = static_cast<float>(*r);
        }
        if (!ok) continue;  // center on the boundary itself
      }
      const std::size_t k = std::size_t(y) * out.width + x;
      if (prob <= out.prob[k]) continue;
      out.prob[k] = static_cast<float>(prob);
      std::copy(radii.begin(), radii.end(), out.radii_at(x, y).begin());
    }
  }
}

SimulatedPasses simulate_passes(const SyntheticScene& scene, int passes, const NoiseModel& noise,
                                std::uint64_t seed) {
  if (passes < 1) throw Error(ErrorCode::InvalidArgument, "pass count must be >= 1");
  validate(noise);
  const std::size_t m = scene.gt_polygons.size();
  const int n_rays = m > 0 ? scene.gt_polygons.front().n_rays() : 16;

  SimulatedPasses out;
  out.detection_prob.resize(m, noise.p_det);
  if (noise.heterogeneous) {
    for (std::size_t j = 0; j < m; ++j) {
      auto rng = substream(seed, Stream::Detection, 0, j);
      out.detection_prob[j] = std::uniform_real_distribution<double>(0.3, 1.0)(rng);
    }
  }

  for (int f = 1; f <= passes; ++f) {
    DenseOutput dense(scene.width, scene.height, n_rays);
    PredictionSet set{f, {}};
    for (std::size_t j = 0; j < m; ++j) {
      auto rng = substream(seed, Stream::Instance, f, j);
      const bool detected = std::uniform_real_distribution<double>(0.0, 1.0)(rng) <
                            out.detection_prob[j];
      RadialPolygon poly = scene.gt_polygons[j];
      std::normal_distribution<double> log_factor(0.0, 1.0);
      for (double& r : poly.radii) r *= std::exp(noise.sigma_radius * log_factor(rng));
      if (!detected) continue;
      paint_instance(poly, dense);
      set.predictions.emplace_back(std::move(poly));
    }
    if (noise.sigma_prob > 0.0) {
      auto rng = substream(seed, Stream::ProbNoise, f, 0);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double clip = 3.0 * noise.sigma_prob;
      for (float& p : dense.prob) {
        const double e = std::clamp(noise.sigma_prob * gauss(rng), -clip, clip);
        p = static_cast<float>(std::clamp(static_cast<double>(p) + e, 0.0, 1.0));
      }
    }
    out.dense.push_back(std::move(dense));
    out.instances.push_back(std::move(set));
  }
  return out;
}

}  // namespace starcert
