#include "starcert/samples.hpp"

#include <cmath>
#include <sstream>

#include "starcert/error.hpp"

namespace starcert {

void validate(const DenseOutput& g) {
  const std::size_t pixels = std::size_t(g.width) * g.height;
  if (g.prob.size() != pixels || g.radial.size() != pixels * g.n_rays) {
    throw Error(ErrorCode::SizeMismatch, "dense output arrays do not match its dimensions");
  }
  for (std::size_t k = 0; k < pixels; ++k) {
    const float p = g.prob[k];
    if (!(p >= 0.0f && p <= 1.0f)) {
      std::ostringstream os;
      os << "invalid sample: probability " << p << " at pixel (" << k % g.width << ", "
         << k / g.width << ") outside [0, 1]";
      throw Error(ErrorCode::InvalidSample, os.str());
    }
    for (int i = 0; i < g.n_rays; ++i) {
      const float r = g.radial[k * g.n_rays + i];
      if (!std::isfinite(r) || r < 0.0f) {
        std::ostringstream os;
        os << "invalid sample: radial value " << r << " at pixel (" << k % g.width << ", "
           << k / g.width << "), ray " << i;
        throw Error(ErrorCode::InvalidSample, os.str());
      }
    }
  }
}

BitMask to_mask(const Prediction& p, int width, int height) {
  if (const auto* poly = std::get_if<RadialPolygon>(&p)) return rasterize(*poly, width, height);
  const auto& mask = std::get<BitMask>(p);
  if (mask.width() != width || mask.height() != height) {
    throw Error(ErrorCode::DimensionMismatch, "prediction mask dimensions differ from image");
  }
  return mask;
}

MaskSet to_masks(const PredictionSet& set, int width, int height) {
  MaskSet out{set.pass_id, {}};
  out.masks.reserve(set.predictions.size());
  for (const auto& p : set.predictions) out.masks.push_back(to_mask(p, width, height));
  return out;
}

std::vector<MaskSet> to_masks(std::span<const PredictionSet> sets, int width, int height) {
  std::vector<MaskSet> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(to_masks(s, width, height));
  return out;
}

}  // namespace starcert
