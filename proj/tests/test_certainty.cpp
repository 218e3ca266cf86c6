#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "starcert/certainty.hpp"
#include "starcert/error.hpp"

using namespace starcert;

namespace {

MaskCluster mask_cluster(const std::vector<BitMask>& ms) {
  MaskCluster c;
  c.id = 1;
  for (std::size_t i = 0; i < ms.size(); ++i) c.members.push_back({int(i + 1), 0, ms[i]});
  return c;
}

PolygonCluster polygon_cluster(const std::vector<std::vector<double>>& radii) {
  PolygonCluster c;
  c.id = 1;
  c.center = {10, 10};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    c.members.push_back({int(i + 1), RadialPolygon(10.5, 10.5, radii[i])});
  }
  return c;
}

PolygonCluster random_polygon_cluster(std::mt19937_64& rng, int members, int n) {
  std::uniform_real_distribution<double> u(1.0, 12.0);
  std::vector<std::vector<double>> radii(members, std::vector<double>(n));
  for (auto& r : radii) {
    for (double& v : r) v = u(rng);
  }
  return polygon_cluster(radii);
}

BitMask row_mask(int x0, int x1) { return oracle::rect(32, 3, x0, 1, x1, 2); }

}  // namespace

TEST_CASE("percentile interpolates between closest ranks") {
  CHECK(percentile({2, 3, 4}, 2.5) == doctest::Approx(2.05));
  CHECK(percentile({2, 3, 4}, 97.5) == doctest::Approx(3.95));
  CHECK(percentile({5}, 30) == 5);
  CHECK(percentile({4, 1, 3, 2}, 50) == doctest::Approx(2.5));
  CHECK(percentile({4, 1, 3, 2}, 0) == 1);
  CHECK(percentile({4, 1, 3, 2}, 100) == 4);
  CHECK_THROWS_AS(percentile({}, 50), Error);
  CHECK_THROWS_AS(percentile({1.0}, 101), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + t % 9);
    for (double& x : v) x = u(rng);
    const double p = u(rng) * 10;
    CHECK(percentile(v, p) == doctest::Approx(oracle::percentile(v, p)));
  }
}

TEST_CASE("pixel median of one member is that member") {
  const BitMask m = oracle::rect(16, 16, 2, 3, 9, 11);
  CHECK(median_prediction_pixel(mask_cluster({m})) == m);
}

TEST_CASE("pixel median takes the majority and keeps ties") {
  const BitMask on = oracle::rect(4, 4, 1, 1, 2, 2);
  const BitMask off(4, 4);
  CHECK(median_prediction_pixel(mask_cluster({on, on, off})).test(1, 1));
  CHECK_FALSE(median_prediction_pixel(mask_cluster({on, off, off})).test(1, 1));
  CHECK(median_prediction_pixel(mask_cluster({on, off, on, off})).test(1, 1));
  CHECK_FALSE(median_prediction_pixel(mask_cluster({on, off, off, off})).test(1, 1));
}

TEST_CASE("pixel median matches a per-pixel vote count") {
  std::mt19937_64 rng(8);
  for (int members = 1; members <= 6; ++members) {
    std::vector<BitMask> ms;
    for (int k = 0; k < members; ++k) {
      ms.push_back(rasterize(oracle::random_polygon(rng, 20.5, 18.5, 16, 5, 12, 0.4), 40, 36));
    }
    const BitMask med = median_prediction_pixel(mask_cluster(ms));
    for (int y = 0; y < 36; ++y) {
      for (int x = 0; x < 40; ++x) {
        int votes = 0;
        for (const auto& m : ms) votes += m.test(x, y);
        CHECK(med.test(x, y) == (2 * votes >= members));
      }
    }
  }
}

TEST_CASE("radial median per ray") {
  const auto odd = median_prediction_radial(
      polygon_cluster({std::vector<double>(8, 2), std::vector<double>(8, 4), std::vector<double>(8, 6)}));
  CHECK(odd.radii == std::vector<double>(8, 4));
  CHECK(odd.cx == 10.5);
  CHECK(odd.cy == 10.5);
  const auto even =
      median_prediction_radial(polygon_cluster({std::vector<double>(8, 2), std::vector<double>(8, 4)}));
  CHECK(even.radii == std::vector<double>(8, 3));
}

TEST_CASE("radial median of 20 members matches sort and pick") {
  std::mt19937_64 rng(9);
  const auto c = random_polygon_cluster(rng, 20, 16);
  const auto med = median_prediction_radial(c);
  for (int i = 0; i < 16; ++i) {
    std::vector<double> v;
    for (const auto& m : c.members) v.push_back(m.polygon.radii[i]);
    std::sort(v.begin(), v.end());
    CHECK(med.radii[i] == doctest::Approx(0.5 * (v[9] + v[10])));
  }
}

TEST_CASE("empty clusters are rejected") {
  CHECK_THROWS_AS(median_prediction_pixel(MaskCluster{}), Error);
  CHECK_THROWS_AS(median_prediction_radial(PolygonCluster{}), Error);
  CHECK_THROWS_AS(percentile_band_radial(PolygonCluster{}), Error);
  CHECK_THROWS_AS(pixel_stats(MaskCluster{}), Error);
  CHECK_THROWS_AS(spatial_certainty(MaskCluster{}, BitMask(4, 4)), Error);
}

TEST_CASE("identical members have spatial certainty 1") {
  const BitMask m = oracle::rect(16, 16, 2, 3, 9, 11);
  const auto c = mask_cluster({m, m, m});
  CHECK(spatial_certainty(c, median_prediction_pixel(c)) == 1.0);
  const auto p = polygon_cluster(std::vector<std::vector<double>>(4, std::vector<double>(8, 3.5)));
  CHECK(spatial_certainty(p, median_prediction_radial(p)) == doctest::Approx(1.0));
  CHECK(spatial_certainty(p, median_prediction_radial(p), true, 24, 24) == 1.0);
}

TEST_CASE("spatial certainty averages the member IoUs") {
  const BitMask median = row_mask(0, 10);
  const BitMask a = row_mask(0, 8);
  const BitMask b = row_mask(0, 6);
  REQUIRE(oracle::iou(a, median) == doctest::Approx(0.8));
  REQUIRE(oracle::iou(b, median) == doctest::Approx(0.6));
  CHECK(spatial_certainty(mask_cluster({a, b}), median) == doctest::Approx(0.7));

  const BitMask half = row_mask(0, 5);
  const BitMask away = row_mask(20, 25);
  CHECK(spatial_certainty(mask_cluster({median, half, away}), median) == doctest::Approx(0.5));
}

TEST_CASE("exact radial spatial certainty matches the rasterized oracle") {
  std::mt19937_64 rng(12);
  const auto c = random_polygon_cluster(rng, 5, 16);
  const auto med = median_prediction_radial(c);
  double expected = 0;
  const auto mr = oracle::raster(med, 24, 24);
  for (const auto& m : c.members) expected += oracle::iou(oracle::raster(m.polygon, 24, 24), mr);
  CHECK(spatial_certainty(c, med, true, 24, 24) == doctest::Approx(expected / 5));
}

TEST_CASE("fractional certainty for the four-pass fixture clusters") {
  CHECK(fractional_certainty(4, 4) == 1.0);
  CHECK(fractional_certainty(1, 4) == 0.25);
  CHECK(fractional_certainty(3, 4) == 0.75);
  CHECK_THROWS_AS(fractional_certainty(5, 4), Error);
  CHECK_THROWS_AS(fractional_certainty(0, 0), Error);
}

TEST_CASE("hybrid certainty is the product") {
  CHECK(hybrid_certainty(1.0, 0.25) == 0.25);
  CHECK(hybrid_certainty(0.7, 1.0) == 0.7);
  CHECK(hybrid_certainty(0.0, 0.63) == 0.0);
  CHECK(hybrid_certainty(0.63, 0.0) == 0.0);
}

TEST_CASE("radial band percentiles") {
  const auto one = polygon_cluster({{1, 2, 3, 4}});
  const auto b1 = percentile_band_radial(one);
  CHECK(b1.inner == one.members[0].polygon);
  CHECK(b1.outer == one.members[0].polygon);

  const auto three =
      polygon_cluster({std::vector<double>(8, 2), std::vector<double>(8, 3), std::vector<double>(8, 4)});
  const auto b3 = percentile_band_radial(three);
  for (int i = 0; i < 8; ++i) {
    CHECK(b3.inner.radii[i] == doctest::Approx(2.05));
    CHECK(b3.outer.radii[i] == doctest::Approx(3.95));
  }
  CHECK(b3.inner.cx == 10.5);
  CHECK_THROWS_AS(percentile_band_radial(three, 50, 50), Error);
}

TEST_CASE("band nesting on 100 random clusters") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto c = random_polygon_cluster(rng, 1 + t % 12, 16);
    const auto band = percentile_band_radial(c);
    const auto med = median_prediction_radial(c);
    for (int i = 0; i < 16; ++i) {
      CHECK(band.inner.radii[i] <= med.radii[i]);
      CHECK(med.radii[i] <= band.outer.radii[i]);
    }
    const auto in = oracle::raster(band.inner, 24, 24);
    const auto out = oracle::raster(band.outer, 24, 24);
    for (std::size_t k = 0; k < in.bits.size(); ++k) CHECK((!in.bits[k] || out.bits[k]));
  }
}

TEST_CASE("pixel stats of identical members") {
  const BitMask m = oracle::rect(20, 20, 4, 5, 12, 14);
  const auto s = pixel_stats(mask_cluster({m, m, m}));
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      CHECK(s.std_at(x, y) == 0.0);
      CHECK(s.mean_at(x, y) == (m.test(x, y) ? 1.0 : 0.0));
    }
  }
  REQUIRE(s.inner.size() == 1);
  CHECK(s.inner == s.outer);
  // Every contour vertex sits on the mask's outline.
  for (const Point& p : s.inner[0]) {
    const bool on_x = p.x == 4.0 || p.x == 12.0;
    const bool on_y = p.y == 5.0 || p.y == 14.0;
    CHECK((on_x || on_y));
    CHECK(p.x >= 4.0);
    CHECK(p.x <= 12.0);
    CHECK(p.y >= 5.0);
    CHECK(p.y <= 14.0);
  }
}

TEST_CASE("a pixel set in half the members has mean and std 0.5") {
  const BitMask on = oracle::rect(6, 6, 2, 2, 3, 3);
  const BitMask wide = oracle::rect(6, 6, 1, 1, 4, 4);
  const auto s = pixel_stats(mask_cluster({on, wide, wide, on}));
  CHECK(s.mean_at(2, 2) == 1.0);
  CHECK(s.std_at(2, 2) == 0.0);
  const auto h = pixel_stats(mask_cluster({on, BitMask(6, 6)}));
  CHECK(h.mean_at(2, 2) == doctest::Approx(0.5));
  CHECK(h.std_at(2, 2) == doctest::Approx(0.5));
}

TEST_CASE("pixel stats match a two-pass computation") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    std::vector<BitMask> ms;
    const int k = 2 + t;
    for (int i = 0; i < k; ++i) {
      ms.push_back(rasterize(oracle::random_polygon(rng, 16.5, 15.5, 16, 4, 11, 0.4), 32, 32));
    }
    const auto s = pixel_stats(mask_cluster(ms));
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        double mean = 0;
        for (const auto& m : ms) mean += m.test(x, y);
        mean /= k;
        double var = 0;
        for (const auto& m : ms) var += (m.test(x, y) - mean) * (m.test(x, y) - mean);
        CHECK(std::abs(s.mean_at(x, y) - mean) <= 1e-6);
        CHECK(std::abs(s.std_at(x, y) - std::sqrt(var / k)) <= 1e-6);
        CHECK((s.std_at(x, y) == 0.0) == (mean == 0.0 || mean == 1.0));
      }
    }
  }
}

TEST_CASE("inner contours lie within outer ones") {
  std::mt19937_64 rng(15);
  std::vector<BitMask> ms;
  for (int i = 0; i < 8; ++i) {
    ms.push_back(rasterize(oracle::random_polygon(rng, 16.5, 15.5, 16, 5, 11, 0.3), 32, 32));
  }
  const auto s = pixel_stats(mask_cluster(ms));
  REQUIRE_FALSE(s.inner.empty());
  REQUIRE_FALSE(s.outer.empty());
  for (const auto& c : s.inner) {
    for (const Point& p : c) {
      bool inside = false;
      for (const auto& o : s.outer) inside = inside || contains(o, p);
      CHECK(inside);
    }
  }
}

TEST_CASE("iso contours of a lone pixel form a diamond") {
  const std::vector<double> v{0, 0, 0, 0, 1, 0, 0, 0, 0};
  const auto cs = iso_contours(v, Box{0, 0, 3, 3}, 0.5);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].size() == 4);
  for (const Point& p : cs[0]) {
    CHECK(std::abs(p.x - 1.5) + std::abs(p.y - 1.5) == doctest::Approx(0.5));
  }
}
