#include <sstream>

#include "starcert/clustering.hpp"
#include "starcert/error.hpp"

namespace starcert {

MeanDense mean_dense(std::span<const DenseOutput> samples) {
  if (samples.empty()) throw Error(ErrorCode::NoData, "mean of an empty sample set");
  const DenseOutput& first = samples.front();
  for (const DenseOutput& g : samples) {
    if (!g.same_shape(first)) {
      throw Error(ErrorCode::DimensionMismatch, "dense samples have different dimensions");
    }
  }
  // Accumulate in double, one sample at a time, so the result does not depend
  // on how pixels are partitioned.
  std::vector<double> prob(first.prob.size(), 0.0);
  std::vector<double> radial(first.radial.size(), 0.0);
  for (const DenseOutput& g : samples) {
    for (std::size_t k = 0; k < prob.size(); ++k) prob[k] += g.prob[k];
    for (std::size_t k = 0; k < radial.size(); ++k) radial[k] += g.radial[k];
  }
  const double f = static_cast<double>(samples.size());
  MeanDense out{DenseOutput(first.width, first.height, first.n_rays),
                static_cast<int>(samples.size())};
  for (std::size_t k = 0; k < prob.size(); ++k) out.field.prob[k] = static_cast<float>(prob[k] / f);
  for (std::size_t k = 0; k < radial.size(); ++k) {
    out.field.radial[k] = static_cast<float>(radial[k] / f);
  }
  return out;
}

CenterSet extract_centers(const MeanDense& mean, double prob_threshold, double nms_threshold,
                          const NmsOptions& options) {
  CenterSet out;
  for (Candidate& c : decode(mean.field, prob_threshold, nms_threshold, options)) {
    out.centers.push_back({c.pixel, c.prob, std::move(c.polygon)});
  }
  return out;
}

RadialClustering cluster_radial(std::span<const DenseOutput> samples, const CenterSet& centers,
                                double prob_threshold) {
  if (!(prob_threshold > 0.0 && prob_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "probability threshold must lie in (0, 1)");
  }
  for (std::size_t f = 1; f < samples.size(); ++f) {
    if (!samples[f].same_shape(samples[0])) {
      throw Error(ErrorCode::DimensionMismatch, "dense samples have different dimensions");
    }
  }
  RadialClustering out;
  for (std::size_t m = 0; m < centers.centers.size(); ++m) {
    const Pixel c = centers.centers[m].pixel;
    PolygonCluster cluster{static_cast<int>(m) + 1, c, {}};
    for (std::size_t f = 0; f < samples.size(); ++f) {
      const DenseOutput& g = samples[f];
      if (c.x < 0 || c.y < 0 || c.x >= g.width || c.y >= g.height) {
        std::ostringstream os;
        os << "center (" << c.x << ", " << c.y << ") outside the " << g.width << "x" << g.height
           << " sample";
        throw Error(ErrorCode::OutOfBounds, os.str());
      }
      if (!(g.prob_at(c.x, c.y) > prob_threshold)) continue;
      const auto r = g.radii_at(c.x, c.y);
      bool valid = true;
      for (float v : r) valid = valid && v > 0.0f;
      if (!valid) continue;
      cluster.members.push_back(
          {static_cast<int>(f) + 1, RadialPolygon(c.x + 0.5, c.y + 0.5, {r.begin(), r.end()})});
    }
    if (cluster.members.empty()) {
      out.empty_cluster_ids.push_back(cluster.id);
    } else {
      out.clusters.push_back(std::move(cluster));
    }
  }
  return out;
}

}  // namespace starcert
