#include <doctest.h>

#include <random>

#include "infogen/error.hpp"
#include "infogen/geometry.hpp"
#include "oracles.hpp"

using namespace infogen;

namespace {

std::vector<Point2d> pts(std::initializer_list<std::pair<double, double>> list) {
  std::vector<Point2d> out;
  for (auto [x, y] : list) out.emplace_back(x, y);
  return out;
}

std::vector<oracle::P> to_oracle(const std::vector<Point2d>& v) {
  std::vector<oracle::P> out;
  for (const auto& p : v) out.push_back({p.x(), p.y()});
  return out;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("triangle is its own hull") {
    const auto hull = convex_hull(pts({{0, 0}, {4, 0}, {0, 3}}));
    REQUIRE(hull.size() == 3);
    CHECK(hull[0] == Point2d(0, 0));
    CHECK(hull[1] == Point2d(4, 0));
    CHECK(hull[2] == Point2d(0, 3));
  }

  TEST_CASE("interior point is dropped") {
    const auto hull = convex_hull(pts({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}}));
    CHECK(hull.size() == 4);
    CHECK(std::find(hull.begin(), hull.end(), Point2d(1, 1)) == hull.end());
  }

  TEST_CASE("empty hull input throws") {
    CHECK_THROWS_WITH_AS(convex_hull(std::vector<Point2d>{}), "empty point set", Error);
  }

  TEST_CASE("hull is counter-clockwise with no collinear vertices") {
    const auto hull = convex_hull(pts({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 2}, {0, 2}}));
    REQUIRE(hull.size() == 4);
    for (std::size_t i = 0; i < hull.size(); ++i)
      CHECK(cross(hull[i], hull[(i + 1) % 4], hull[(i + 2) % 4]) > 0);
  }

  TEST_CASE("monotone chain matches brute-force hull on random sets") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point2d> p;
      for (int i = 0; i < 50; ++i) p.emplace_back(u(rng), u(rng));
      const auto hull = convex_hull(p);
      const auto expect = oracle::brute_hull_vertices(to_oracle(p));
      const auto got = to_oracle(hull);
      CHECK(std::set<oracle::P>(got.begin(), got.end()) == expect);
    }
  }

  TEST_CASE("hull of integer grids with collinear points") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point2d> p;
      for (int i = 0; i < 12; ++i) p.emplace_back(u(rng), u(rng));
      const auto got = to_oracle(convex_hull(p));
      CHECK(std::set<oracle::P>(got.begin(), got.end()) == oracle::brute_hull_vertices(to_oracle(p)));
    }
  }

  TEST_CASE("polygon area basics") {
    CHECK(polygon_area(pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(1.0));
    CHECK(polygon_area(pts({{0, 0}, {1, 1}, {2, 2}})) == 0.0);
    CHECK(polygon_area(pts({{0, 0}, {1, 1}})) == 0.0);
  }

  TEST_CASE("shoelace agrees with a Monte-Carlo estimate") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 10);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Point2d> p;
      for (int i = 0; i < 12; ++i) p.emplace_back(u(rng), u(rng));
      const auto hull = convex_hull(p);
      const double mc = oracle::monte_carlo_area(to_oracle(hull), 1'000'000, 100 + trial);
      CHECK(std::abs(polygon_area(hull) - mc) / mc < 0.01);
    }
  }

  TEST_CASE("point in bbox is boundary inclusive") {
    const BBox2d b{0, 0, 10, 10};
    CHECK(point_in_bbox(Point2d(5, 5), b));
    CHECK(point_in_bbox(Point2d(10, 10), b));
    CHECK_FALSE(point_in_bbox(Point2d(10.001, 5), b));
  }

  TEST_CASE("straight stroke reduces to its endpoints") {
    Polyline2d s;
    for (int i = 0; i < 20; ++i) s.emplace_back(i * 0.5, i * 0.25);
    const auto d = dominant_points(s, 0.5);
    REQUIRE(d.size() == 2);
    CHECK(d.front() == s.front());
    CHECK(d.back() == s.back());
  }

  TEST_CASE("L stroke keeps its corner") {
    Polyline2d s;
    for (int i = 0; i < 15; ++i) s.emplace_back(0, i * 10.0 / 14);
    for (int i = 1; i <= 15; ++i) s.emplace_back(i * 10.0 / 15, 10);
    const auto d = dominant_points(s, 0.5);
    const auto o = oracle::rdp(to_oracle(s), 0.5);
    REQUIRE(d.size() == 3);
    CHECK(to_oracle(d) == o);
    CHECK(d[1] == Point2d(0, 10));
  }

  TEST_CASE("circle keeps points all around") {
    Polyline2d s;
    for (int i = 0; i < 64; ++i) {
      const double t = 2 * M_PI * i / 64;
      s.emplace_back(10 * std::cos(t), 10 * std::sin(t));
    }
    const auto d = dominant_points(s, 0.1);
    CHECK(d.size() >= 8);
    CHECK(to_oracle(d) == oracle::rdp(to_oracle(s), 0.1));
  }

  TEST_CASE("RDP agrees with the recursive oracle on random walks") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> step(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
      Polyline2d s{Point2d(0, 0)};
      for (int i = 0; i < 40; ++i) s.push_back(s.back() + Point2d(step(rng), step(rng)));
      const double eps = 0.5 + trial * 0.02;
      CHECK(to_oracle(dominant_points(s, eps)) == oracle::rdp(to_oracle(s), eps));
    }
  }

  TEST_CASE("dominant points rejects bad input") {
    Polyline2d s{Point2d(0, 0), Point2d(1, 1)};
    CHECK_THROWS_AS(dominant_points(s, 0.0), Error);
    CHECK_THROWS_AS(dominant_points(Polyline2d{Point2d(0, 0)}, 1.0), Error);
  }

  TEST_CASE("arc-length resampling spaces points evenly") {
    const Polyline2d l{Point2d(0, 0), Point2d(2, 0), Point2d(2, 1)};
    const auto r = resample_arc_length(l, 4);
    REQUIRE(r.size() == 4);
    CHECK(r[1].isApprox(Point2d(1, 0)));
    CHECK(r[2].isApprox(Point2d(2, 0)));
    CHECK(r[3].isApprox(Point2d(2, 1)));
  }

  TEST_CASE("angle helpers") {
    CHECK(wrap_degrees(180.0) == -180.0);
    CHECK(wrap_degrees(-190.0) == doctest::Approx(170.0));
    CHECK(wrap_degrees(540.0) == -180.0);
    CHECK(direction_degrees(Point2d(50, 50), Point2d(50, 10)) == doctest::Approx(-90.0));
  }

  TEST_CASE("geometry is usable with float scalars") {
    std::vector<Point<float>> p{{0.f, 0.f}, {2.f, 0.f}, {2.f, 2.f}, {0.f, 2.f}, {1.f, 1.f}};
    CHECK(polygon_area(convex_hull(p)) == doctest::Approx(4.0f));
  }
}
