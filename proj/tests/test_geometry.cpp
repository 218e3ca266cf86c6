#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "starcert/error.hpp"
#include "starcert/geometry.hpp"

using namespace starcert;

namespace {

RadialPolygon uniform(double cx, double cy, int n, double r) {
  return RadialPolygon(cx, cy, std::vector<double>(n, r));
}

void check_point(Point p, double x, double y) {
  CHECK(p.x == doctest::Approx(x).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(y).epsilon(1e-12));
}

}  // namespace

TEST_CASE("ray config rejects fewer than three rays") {
  CHECK_THROWS_AS(RayConfig(2), Error);
  CHECK(RayConfig(3).n() == 3);
  const RayConfig r(4);
  CHECK(r.angle(1) == doctest::Approx(std::numbers::pi / 2));
  CHECK(r.direction(1) == Point{0.0, 1.0});
  CHECK(r.direction(2) == Point{-1.0, 0.0});
}

TEST_CASE("polygon validation") {
  CHECK_NOTHROW(validate(uniform(0, 0, 4, 1)));
  CHECK_THROWS_AS(validate(RadialPolygon(0, 0, {1, 1})), Error);
  CHECK_THROWS_AS(validate(RadialPolygon(0, 0, {1, 0, 1, 1})), Error);
  CHECK_THROWS_AS(validate(RadialPolygon(0, 0, {1, -1, 1, 1})), Error);
  CHECK_THROWS_AS(validate(RadialPolygon(0, 0, {1, NAN, 1, 1})), Error);
}

TEST_CASE("vertices of the unit diamond") {
  const auto v = vertices(uniform(0, 0, 4, 1));
  REQUIRE(v.size() == 4);
  check_point(v[0], 1, 0);
  check_point(v[1], 0, 1);
  check_point(v[2], -1, 0);
  check_point(v[3], 0, -1);
}

TEST_CASE("vertices translate and scale") {
  const auto v = vertices(uniform(5, 5, 4, 2));
  check_point(v[0], 7, 5);
  check_point(v[1], 5, 7);
  check_point(v[2], 3, 5);
  check_point(v[3], 5, 3);
}

TEST_CASE("vertices of a regular 16-gon match direct trigonometry") {
  const auto v = vertices(uniform(0, 0, 16, 1));
  REQUIRE(v.size() == 16);
  for (int i = 0; i < 16; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 16;
    CHECK(v[i].x == doctest::Approx(std::cos(a)).epsilon(1e-12));
    CHECK(v[i].y == doctest::Approx(std::sin(a)).epsilon(1e-12));
  }
}

TEST_CASE("polygon area") {
  CHECK(polygon_area(uniform(0, 0, 4, 1)) == doctest::Approx(2.0));
  const double r = 3.5;
  CHECK(polygon_area(uniform(1, 2, 16, r)) ==
        doctest::Approx(8.0 * r * r * std::sin(std::numbers::pi / 8)));
  std::mt19937_64 rng(3);
  const auto p = oracle::random_polygon(rng, 0, 0, 16, 4, 9);
  auto q = p;
  for (double& x : q.radii) x *= 2.5;
  CHECK(polygon_area(q) == doctest::Approx(6.25 * polygon_area(p)));
  // Shoelace over the vertices agrees with the closed form.
  const auto v = oracle::polygon_points(p);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += a.x * b.y - b.x * a.y;
  }
  CHECK(polygon_area(p) == doctest::Approx(std::abs(s) / 2));
}

TEST_CASE("rasterize clips a polygon outside the image to an empty mask") {
  const BitMask m = rasterize(uniform(-50, -50, 16, 5), 20, 20);
  CHECK(m.empty());
  CHECK(m.bounds().empty());
}

TEST_CASE("rasterize the diamond matches the brute-force oracle") {
  const auto poly = uniform(4.5, 4.5, 4, 3);
  const BitMask m = rasterize(poly, 10, 10);
  const auto ref = oracle::raster(poly, 10, 10);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) CHECK(m.test(x, y) == ref.at(x, y));
  }
  CHECK(m.count() == 25);  // |dx| + |dy| <= 3 over integer offsets
}

TEST_CASE("rasterize random polygons matches brute force, including clipped ones") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 45.0);
  for (int t = 0; t < 60; ++t) {
    const auto poly = oracle::random_polygon(rng, u(rng), u(rng), t % 2 ? 16 : 7, 2, 12, 0.4);
    const BitMask m = rasterize(poly, 40, 37);
    const auto ref = oracle::raster(poly, 40, 37);
    CHECK(oracle::to_dense(m).bits == ref.bits);
    CHECK(m.count() == ref.count());
  }
}

TEST_CASE("rasterized pixel count follows the area for large polygons") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto poly = oracle::random_polygon(rng, 50.3, 49.7, 16, 12, 30, 0.15);
    const BitMask m = rasterize(poly, 100, 100);
    CHECK(std::abs(double(m.count()) - polygon_area(poly)) / polygon_area(poly) < 0.02);
  }
}

TEST_CASE("rasterize is translation consistent") {
  std::mt19937_64 rng(8);
  const auto p = oracle::random_polygon(rng, 20.25, 18.5, 16, 5, 9);
  auto q = p;
  q.cx += 7;
  q.cy -= 3;
  const BitMask a = rasterize(p, 64, 64), b = rasterize(q, 64, 64);
  CHECK(a.count() == b.count());
  for (int y = 3; y < 64; ++y) {
    for (int x = 0; x + 7 < 64; ++x) CHECK(a.test(x, y) == b.test(x + 7, y - 3));
  }
}

TEST_CASE("bit mask storage and bounds") {
  BitMask m(200, 10, Box{60, 2, 140, 8});
  CHECK(m.roi() == Box{60, 2, 140, 8});
  CHECK_THROWS_AS(m.set(10, 3), Error);
  m.set(63, 3);
  m.set(64, 3);
  m.set(130, 7);
  CHECK(m.count() == 3);
  CHECK(m.bounds() == Box{63, 3, 131, 8});
  CHECK(m.test(64, 3));
  CHECK_FALSE(m.test(65, 3));
  CHECK_FALSE(m.test(5, 5));
  CHECK(m.window(3, 63) == 0b11);
  m.set(64, 3, false);
  CHECK(m.count() == 2);
  CHECK(m.bounds() == Box{63, 3, 131, 8});
}

TEST_CASE("mask IoU examples") {
  const BitMask a = oracle::rect(8, 8, 0, 0, 4, 2);  // rows 0-1, cols 0-3
  const BitMask b = oracle::rect(8, 8, 0, 0, 2, 4);  // rows 0-3, cols 0-1
  CHECK(iou_mask(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(iou_mask(a, a) == 1.0);
  CHECK(iou_mask(a, oracle::rect(8, 8, 5, 5, 7, 7)) == 0.0);
  CHECK(iou_mask(a, b) == iou_mask(b, a));
}

TEST_CASE("mask IoU errors") {
  const BitMask a = oracle::rect(8, 8, 0, 0, 4, 2);
  CHECK_THROWS_AS(iou_mask(a, BitMask(9, 8)), Error);
  try {
    iou_mask(BitMask(8, 8), BitMask(8, 8));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyOperands);
    CHECK(std::string(e.what()).find("empty operands") != std::string::npos);
  }
  CHECK(iou_mask(a, BitMask(8, 8)) == 0.0);
}

TEST_CASE("mask IoU agrees with pixel counting across word boundaries") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::random_polygon(rng, u(rng), u(rng) / 4, 16, 3, 40, 0.4);
    auto q = p;
    q.cx += u(rng) / 10 - 10;
    q.cy += u(rng) / 40 - 2.5;
    const BitMask a = rasterize(p, 200, 50), b = rasterize(q, 200, 50);
    if (a.empty() && b.empty()) continue;
    CHECK(iou_mask(a, b) == doctest::Approx(oracle::iou(a, b)).epsilon(1e-15));
    CHECK(intersection_count(a, b) == intersection_count(b, a));
  }
}

TEST_CASE("same-center radial IoU") {
  std::mt19937_64 rng(2);
  const auto p = oracle::random_polygon(rng, 10, 10, 16, 4, 8);
  CHECK(iou_radial_same_center(p, p) == 1.0);
  auto half = p;
  for (double& r : half.radii) r /= 2;
  CHECK(iou_radial_same_center(half, p) == doctest::Approx(0.25).epsilon(1e-12));
  auto moved = p;
  moved.cx += 1;
  CHECK_THROWS_AS(iou_radial_same_center(p, moved), Error);
}

TEST_CASE("same-center radial IoU is monotone as b approaches a") {
  std::mt19937_64 rng(4);
  const auto a = oracle::random_polygon(rng, 0, 0, 16, 6, 10);
  auto b = oracle::random_polygon(rng, 0, 0, 16, 3, 14, 0.5);
  double prev = iou_radial_same_center(a, b);
  for (int step = 0; step < 10; ++step) {
    for (int i = 0; i < 16; ++i) b.radii[i] += 0.2 * (a.radii[i] - b.radii[i]);
    const double cur = iou_radial_same_center(a, b);
    CHECK(cur >= prev - 1e-15);
    prev = cur;
  }
}

TEST_CASE("same-center radial IoU tracks rasterized IoU on smooth pairs") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto a = oracle::random_polygon(rng, 40.5, 40.5, 16, 10, 20);
    // Smooth multiplicative deformation: scale plus a first and second harmonic.
    const double s = 0.8 + 0.4 * u(rng), e1 = 0.15 * u(rng), e2 = 0.08 * u(rng);
    const double p1 = 2 * std::numbers::pi * u(rng), p2 = 2 * std::numbers::pi * u(rng);
    auto b = a;
    for (int i = 0; i < 16; ++i) {
      const double ang = 2 * std::numbers::pi * i / 16;
      b.radii[i] *= s * (1 + e1 * std::cos(ang + p1) + e2 * std::cos(2 * ang + p2));
    }
    const double approx = iou_radial_same_center(a, b);
    const double exact = iou_mask(rasterize(a, 81, 81), rasterize(b, 81, 81));
    CHECK(std::abs(approx - exact) <= 0.05);
  }
}

TEST_CASE("ray distance to the boundary") {
  const auto diamond = uniform(0, 0, 4, 1);
  CHECK(ray_distance_to_boundary({0, 0}, 0.0, diamond) == doctest::Approx(1.0));
  CHECK(ray_distance_to_boundary({0, 0}, std::numbers::pi / 4, diamond) ==
        doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  std::mt19937_64 rng(6);
  const auto p = oracle::random_polygon(rng, 3, -2, 16, 4, 9);
  const RayConfig rays(16);
  for (int i = 0; i < 16; ++i) {
    CHECK(ray_distance_to_boundary(p.center(), rays.angle(i), p) ==
          doctest::Approx(p.radii[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ray_distance_to_boundary({50, 50}, 0.0, p), Error);
}

TEST_CASE("ray distance lands on the boundary") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto p = oracle::random_polygon(rng, 0, 0, 16, 4, 9, 0.3);
    const Point q{u(rng) * 3 - 1.5, u(rng) * 3 - 1.5};
    const double a = u(rng) * 2 * std::numbers::pi;
    const double d = ray_distance_to_boundary(q, a, p);
    const Point hit{q.x + d * std::cos(a), q.y + d * std::sin(a)};
    const auto v = oracle::polygon_points(p);
    bool on = false;
    for (std::size_t i = 0; i < v.size() && !on; ++i) {
      on = oracle::on_segment(v[i], v[(i + 1) % v.size()], hit, 1e-9);
    }
    CHECK(on);
  }
}

TEST_CASE("split labels yields one mask per positive label") {
  LabelMask l(6, 4);
  l.at(1, 1) = 2;
  l.at(2, 1) = 2;
  l.at(5, 3) = 7;
  const auto parts = split_labels(l);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].label == 2);
  CHECK(parts[0].mask.count() == 2);
  CHECK(parts[1].label == 7);
  CHECK(parts[1].mask.test(5, 3));
}
