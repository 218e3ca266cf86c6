#pragma once

// Per-pass prediction samples: dense fields before suppression and decoded
// instance sets after it.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "starcert/geometry.hpp"

namespace starcert {

/// Object probability per pixel plus n radial distances per pixel.
/// Radial layout is (y * width + x) * n_rays + i.
struct DenseOutput {
  int width = 0;
  int height = 0;
  int n_rays = 0;
  std::vector<float> prob;
  std::vector<float> radial;

  DenseOutput() = default;
  DenseOutput(int w, int h, int n)
      : width(w), height(h), n_rays(n), prob(std::size_t(w) * h, 0.0f),
        radial(std::size_t(w) * h * n, 0.0f) {}

  float prob_at(int x, int y) const { return prob[std::size_t(y) * width + x]; }
  std::span<const float> radii_at(int x, int y) const {
    return {radial.data() + (std::size_t(y) * width + x) * n_rays, std::size_t(n_rays)};
  }
  std::span<float> radii_at(int x, int y) {
    return {radial.data() + (std::size_t(y) * width + x) * n_rays, std::size_t(n_rays)};
  }
  bool same_shape(const DenseOutput& o) const {
    return width == o.width && height == o.height && n_rays == o.n_rays;
  }
};

/// Throws InvalidSample naming the first pixel whose probability is outside
/// [0, 1] or whose radial value is negative or non-finite.
void validate(const DenseOutput& g);

using Prediction = std::variant<RadialPolygon, BitMask>;

/// Instances decoded from one forward pass. pass_id is 1-based.
struct PredictionSet {
  int pass_id = 1;
  std::vector<Prediction> predictions;
};

/// Instances of one pass in mask form, the input of the pixel approach.
struct MaskSet {
  int pass_id = 1;
  std::vector<BitMask> masks;
};

BitMask to_mask(const Prediction& p, int width, int height);
MaskSet to_masks(const PredictionSet& set, int width, int height);
std::vector<MaskSet> to_masks(std::span<const PredictionSet> sets, int width, int height);

}  // namespace starcert
