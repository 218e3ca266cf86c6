#include "starcert/nms.hpp"

#include <algorithm>
#include <cstdint>

#include "starcert/error.hpp"

namespace starcert {

namespace {

void check_threshold(double t, const char* name) {
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
  }
}

// Masks that rasterize to nothing cannot overlap anything.
double suppression_iou(const BitMask& a, const BitMask& b) {
  if (a.empty() || b.empty()) return 0.0;
  return iou_mask(a, b);
}

class AcceptedGrid {
 public:
  AcceptedGrid(int width, int height, int cell)
      : cell_(std::max(cell, 1)),
        cols_((width + cell_ - 1) / cell_),
        rows_((height + cell_ - 1) / cell_),
        cells_(std::size_t(cols_) * rows_) {}

  void insert(std::size_t index, const Box& b) {
    if (b.empty()) return;
    for_cells(b, [&](std::vector<std::size_t>& c) { c.push_back(index); });
  }

  template <typename Fn>
  void visit(const Box& b, std::vector<std::uint32_t>& stamp, std::uint32_t tick, Fn&& fn) {
    if (b.empty()) return;
    for_cells(b, [&](std::vector<std::size_t>& c) {
      for (std::size_t idx : c) {
        if (stamp[idx] == tick) continue;
        stamp[idx] = tick;
        fn(idx);
      }
    });
  }

 private:
  template <typename Fn>
  void for_cells(const Box& b, Fn&& fn) {
    for (int cy = b.y0 / cell_; cy <= (b.y1 - 1) / cell_; ++cy) {
      for (int cx = b.x0 / cell_; cx <= (b.x1 - 1) / cell_; ++cx) {
        fn(cells_[std::size_t(cy) * cols_ + cx]);
      }
    }
  }

  int cell_;
  int cols_;
  int rows_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

std::vector<Candidate> extract_candidates(const DenseOutput& g, double prob_threshold) {
  check_threshold(prob_threshold, "probability threshold");
  std::vector<Candidate> out;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const double p = g.prob_at(x, y);
      if (p < prob_threshold) continue;
      const auto r = g.radii_at(x, y);
      if (std::any_of(r.begin(), r.end(), [](float v) { return !(v > 0.0f); })) continue;
      out.push_back({{x, y}, p, RadialPolygon(x + 0.5, y + 0.5, {r.begin(), r.end()})});
    }
  }
  // Row-major scan already orders ties by (y, x); a stable sort keeps it.
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.prob > b.prob; });
  return out;
}

std::vector<Candidate> nms(const std::vector<Candidate>& candidates, double nms_threshold,
                           int width, int height, const NmsOptions& options) {
  check_threshold(nms_threshold, "NMS threshold");
  std::vector<Candidate> accepted;
  std::vector<BitMask> accepted_masks;
  AcceptedGrid grid(width, height, options.grid_cell);
  std::vector<std::uint32_t> stamp;
  std::uint32_t tick = 0;

  for (const Candidate& c : candidates) {
    BitMask mask = rasterize(c.polygon, width, height);
    bool keep = true;
    if (options.exact_iou) {
      for (const BitMask& m : accepted_masks) {
        if (suppression_iou(mask, m) >= nms_threshold) {
          keep = false;
          break;
        }
      }
    } else {
      ++tick;
      grid.visit(mask.bounds(), stamp, tick, [&](std::size_t idx) {
        if (keep && suppression_iou(mask, accepted_masks[idx]) >= nms_threshold) keep = false;
      });
    }
    if (!keep) continue;
    grid.insert(accepted.size(), mask.bounds());
    stamp.push_back(0);
    accepted.push_back(c);
    accepted_masks.push_back(std::move(mask));
  }
  return accepted;
}

std::vector<Candidate> decode(const DenseOutput& g, double prob_threshold, double nms_threshold,
                              const NmsOptions& options) {
  return nms(extract_candidates(g, prob_threshold), nms_threshold, g.width, g.height, options);
}

}  // namespace starcert
