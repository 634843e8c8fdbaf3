#pragma once

// Twelve mutually distinct flow shapes in the unit square, for clustering
// and sketch fixtures.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "infogen/layout.hpp"

namespace fixtures {

inline std::vector<infogen::VifLayout> twelve_shapes() {
  using infogen::Point2d;
  // Vertices snap to 32x32 cell centres, so sub-cell jitter rarely flips a cell.
  auto snap = [](double v) { return (std::floor(v * 32) + 0.5) / 32; };
  auto L = [&](std::string id, std::vector<Point2d> p) {
    for (auto& q : p) q = Point2d(snap(q.x()), snap(q.y()));
    return infogen::VifLayout{std::move(id), std::move(p), {}, "fixture"};
  };
  std::vector<Point2d> ring;
  for (int i = 0; i < 8; ++i) {
    const double t = 2 * M_PI * i / 8;
    ring.emplace_back(0.5 + 0.4 * std::cos(t), 0.5 + 0.4 * std::sin(t));
  }
  return {
      L("row", {{0.05, 0.5}, {0.35, 0.5}, {0.65, 0.5}, {0.95, 0.5}}),
      L("column", {{0.5, 0.05}, {0.5, 0.35}, {0.5, 0.65}, {0.5, 0.95}}),
      L("diag", {{0.05, 0.05}, {0.5, 0.5}, {0.95, 0.95}}),
      L("antidiag", {{0.05, 0.95}, {0.5, 0.5}, {0.95, 0.05}}),
      L("vee", {{0.05, 0.05}, {0.5, 0.95}, {0.95, 0.05}}),
      L("caret", {{0.05, 0.95}, {0.5, 0.05}, {0.95, 0.95}}),
      L("ring", ring),
      L("zigzag", {{0.05, 0.2}, {0.25, 0.8}, {0.45, 0.2}, {0.65, 0.8}, {0.85, 0.2}}),
      L("snake", {{0.05, 0.1}, {0.95, 0.1}, {0.95, 0.5}, {0.05, 0.5}, {0.05, 0.9}, {0.95, 0.9}}),
      L("bolt", {{0.2, 0.05}, {0.7, 0.45}, {0.3, 0.55}, {0.8, 0.95}}),
      L("cup", {{0.1, 0.05}, {0.1, 0.9}, {0.9, 0.9}, {0.9, 0.05}}),
      L("zed", {{0.05, 0.1}, {0.95, 0.1}, {0.05, 0.9}, {0.95, 0.9}}),
  };
}

// Copies each shape with uniform jitter of at most `amount` per coordinate.
inline std::vector<infogen::VifLayout> jittered_pairs(double amount, std::uint64_t seed) {
  auto base = twelve_shapes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amount, amount);
  std::vector<infogen::VifLayout> out = base;
  for (auto l : base) {
    l.id += "-copy";
    for (auto& p : l.points) p += infogen::Point2d(u(rng), u(rng));
    out.push_back(l);
  }
  return out;
}

}  // namespace fixtures
