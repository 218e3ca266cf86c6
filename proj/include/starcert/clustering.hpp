#pragma once

// Grouping of per-pass predictions into clusters, one per physical instance.
//
// Pixel approach: sequential (BSAS) clustering of instance masks by IoU.
// Radial approach: shared centers from the mean dense output, membership by
// per-pass object probability at the center.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "starcert/geometry.hpp"
#include "starcert/nms.hpp"
#include "starcert/samples.hpp"

namespace starcert {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr double kDefaultProbClusterThreshold = 0.5;

struct MaskMember {
  int pass_id = 0;
  std::size_t index = 0;  // position within its pass
  BitMask mask;
};

/// Cluster of the pixel approach. At most one member per pass.
struct MaskCluster {
  int id = 0;
  std::vector<MaskMember> members;
};

struct PolygonMember {
  int pass_id = 0;
  RadialPolygon polygon;
};

/// Cluster of the radial approach. Every member polygon is centered at
/// (center.x + 0.5, center.y + 0.5).
struct PolygonCluster {
  int id = 0;
  Pixel center;
  std::vector<PolygonMember> members;
};

// ---------------------------------------------------------------------------
// Pixel approach

/// Passes are taken in the given order, predictions in file order. A
/// prediction may join a cluster when its IoU with every member is
/// >= iou_threshold and the cluster holds nothing from the same pass; among
/// eligible clusters the highest mean IoU wins, then the lowest id. Otherwise
/// it founds a new cluster. Cluster ids start at 1. An empty mask overlaps
/// nothing and always founds its own cluster.
std::vector<MaskCluster> cluster_bsas(std::span<const MaskSet> samples, double iou_threshold);

/// Same contract as cluster_bsas, without bounding-box pruning or early exit.
/// Masks are compared by scanning the full image.
std::vector<MaskCluster> cluster_bsas_naive(std::span<const MaskSet> samples,
                                            double iou_threshold);

// ---------------------------------------------------------------------------
// Radial approach

struct MeanDense {
  DenseOutput field;
  int samples = 0;
};

struct Center {
  Pixel pixel;
  double prob = 0.0;
  RadialPolygon polygon;  // mean polygon at the center
};

struct CenterSet {
  std::vector<Center> centers;  // acceptance order
};

MeanDense mean_dense(std::span<const DenseOutput> samples);

CenterSet extract_centers(const MeanDense& mean, double prob_threshold, double nms_threshold,
                          const NmsOptions& options = {});

struct RadialClustering {
  std::vector<PolygonCluster> clusters;   // non-empty clusters, center order
  std::vector<int> empty_cluster_ids;     // centers no pass exceeded the threshold for
};

/// Pass f joins cluster m iff D_f(x_m, y_m) > prob_threshold (strict). Passes
/// whose radial distances at the center are not all positive count as
/// non-detections. Cluster id m is the 1-based center index.
RadialClustering cluster_radial(std::span<const DenseOutput> samples, const CenterSet& centers,
                                double prob_threshold);

}  // namespace starcert
