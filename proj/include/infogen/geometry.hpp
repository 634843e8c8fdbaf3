#pragma once

// 2D primitives shared by scoring, sketch matching and placement.
// Canvas convention: origin top-left, x rightward, y downward.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "infogen/error.hpp"

namespace infogen {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;

using Point2d = Point<double>;

template <typename Scalar>
struct BBox {
  Scalar x{0}, y{0}, w{0}, h{0};

  Point<Scalar> center() const { return {x + w / Scalar(2), y + h / Scalar(2)}; }
  Scalar max_extent() const { return std::max(w, h); }
  bool operator==(const BBox&) const = default;
};

using BBox2d = BBox<double>;

template <typename Scalar>
using Polyline = std::vector<Point<Scalar>>;

using Polyline2d = Polyline<double>;

/// z-component of (b - a) x (c - a); positive when a->b->c turns
/// counter-clockwise in a y-up frame.
template <typename Scalar>
Scalar cross(const Point<Scalar>& a, const Point<Scalar>& b, const Point<Scalar>& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

template <typename Scalar>
bool is_finite(const Point<Scalar>& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y());
}

/// Andrew's monotone chain. Returns the hull with positive orientation and
/// without collinear vertices. Fewer than three non-collinear points yield
/// the degenerate hull: the distinct points, or the two extremes of a
/// collinear set.
template <typename Scalar>
std::vector<Point<Scalar>> convex_hull(std::span<const Point<Scalar>> points) {
  if (points.empty()) throw Error(Stage::Geometry, "empty_point_set", "empty point set");

  std::vector<Point<Scalar>> pts(points.begin(), points.end());
  auto lex = [](const Point<Scalar>& a, const Point<Scalar>& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  };
  std::sort(pts.begin(), pts.end(), lex);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

template <typename Scalar>
std::vector<Point<Scalar>> convex_hull(const std::vector<Point<Scalar>>& points) {
  return convex_hull(std::span<const Point<Scalar>>(points));
}

/// Absolute shoelace area; degenerate polygons give 0.
template <typename Scalar>
Scalar polygon_area(std::span<const Point<Scalar>> polygon) {
  if (polygon.size() < 3) return Scalar(0);
  Scalar twice = 0;
  for (std::size_t i = 0, n = polygon.size(); i < n; ++i) {
    const auto& a = polygon[i];
    const auto& b = polygon[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(twice) / Scalar(2);
}

template <typename Scalar>
Scalar polygon_area(const std::vector<Point<Scalar>>& polygon) {
  return polygon_area(std::span<const Point<Scalar>>(polygon));
}

/// Boundary-inclusive: a point on the edge counts as inside.
template <typename Scalar>
bool point_in_bbox(const Point<Scalar>& p, const BBox<Scalar>& b) {
  return b.x <= p.x() && p.x() <= b.x + b.w && b.y <= p.y() && p.y() <= b.y + b.h;
}

template <typename Scalar>
BBox<Scalar> bounding_box(std::span<const Point<Scalar>> points) {
  if (points.empty()) throw Error(Stage::Geometry, "empty_point_set", "empty point set");
  Point<Scalar> lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo.x(), lo.y(), hi.x() - lo.x(), hi.y() - lo.y()};
}

template <typename Scalar>
BBox<Scalar> bounding_box(const std::vector<Point<Scalar>>& points) {
  return bounding_box(std::span<const Point<Scalar>>(points));
}

template <typename Scalar>
Scalar distance_to_segment(const Point<Scalar>& p, const Point<Scalar>& a, const Point<Scalar>& b) {
  const Point<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Drops consecutive duplicates.
template <typename Scalar>
Polyline<Scalar> normalize_polyline(std::span<const Point<Scalar>> stroke) {
  Polyline<Scalar> out;
  out.reserve(stroke.size());
  for (const auto& p : stroke)
    if (out.empty() || out.back() != p) out.push_back(p);
  return out;
}

/// Extreme points of a stroke by Ramer-Douglas-Peucker simplification:
/// an ordered subset of the input that always keeps both endpoints.
template <typename Scalar>
Polyline<Scalar> dominant_points(std::span<const Point<Scalar>> stroke, Scalar epsilon) {
  if (!(epsilon > Scalar(0)))
    throw Error(Stage::Geometry, "bad_epsilon", "dominant_points: epsilon must be positive");
  if (stroke.size() < 2)
    throw Error(Stage::Geometry, "short_stroke", "dominant_points: stroke needs at least 2 points");

  const std::size_t n = stroke.size();
  std::vector<char> keep(n, 0);
  keep.front() = keep.back() = 1;
  std::vector<std::pair<std::size_t, std::size_t>> work{{0, n - 1}};
  while (!work.empty()) {
    auto [first, last] = work.back();
    work.pop_back();
    if (last <= first + 1) continue;
    Scalar worst = -1;
    std::size_t split = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      const Scalar d = distance_to_segment(stroke[i], stroke[first], stroke[last]);
      if (d > worst) {
        worst = d;
        split = i;
      }
    }
    if (worst > epsilon) {
      keep[split] = 1;
      work.emplace_back(first, split);
      work.emplace_back(split, last);
    }
  }

  Polyline<Scalar> out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(stroke[i]);
  return out;
}

template <typename Scalar>
Polyline<Scalar> dominant_points(const Polyline<Scalar>& stroke, Scalar epsilon) {
  return dominant_points(std::span<const Point<Scalar>>(stroke), epsilon);
}

template <typename Scalar>
Scalar polyline_length(std::span<const Point<Scalar>> line) {
  Scalar total = 0;
  for (std::size_t i = 1; i < line.size(); ++i) total += (line[i] - line[i - 1]).norm();
  return total;
}

/// Resamples to `count` points spaced uniformly by arc length, keeping both
/// endpoints. A zero-length polyline repeats its first point.
template <typename Scalar>
Polyline<Scalar> resample_arc_length(std::span<const Point<Scalar>> line, std::size_t count) {
  if (line.empty() || count == 0) return {};
  if (count == 1) return {line.front()};
  const Scalar total = polyline_length(line);
  Polyline<Scalar> out;
  out.reserve(count);
  if (total == Scalar(0)) {
    out.assign(count, line.front());
    return out;
  }
  std::size_t seg = 1;
  Scalar walked = 0;  // arc length at line[seg - 1]
  for (std::size_t k = 0; k < count; ++k) {
    if (k + 1 == count) {
      out.push_back(line.back());
      break;
    }
    const Scalar target = total * Scalar(k) / Scalar(count - 1);
    while (seg + 1 < line.size() && walked + (line[seg] - line[seg - 1]).norm() < target) {
      walked += (line[seg] - line[seg - 1]).norm();
      ++seg;
    }
    const Scalar len = (line[seg] - line[seg - 1]).norm();
    const Scalar t = len > Scalar(0) ? std::clamp((target - walked) / len, Scalar(0), Scalar(1)) : Scalar(0);
    out.push_back(line[seg - 1] + t * (line[seg] - line[seg - 1]));
  }
  return out;
}

template <typename Scalar>
Polyline<Scalar> resample_arc_length(const Polyline<Scalar>& line, std::size_t count) {
  return resample_arc_length(std::span<const Point<Scalar>>(line), count);
}

/// Degrees in [-180, 180).
template <typename Scalar>
Scalar wrap_degrees(Scalar deg) {
  Scalar r = std::fmod(deg + Scalar(180), Scalar(360));
  if (r < 0) r += Scalar(360);
  return r - Scalar(180);
}

template <typename Scalar>
Scalar direction_degrees(const Point<Scalar>& from, const Point<Scalar>& to) {
  const Point<Scalar> d = to - from;
  return wrap_degrees(std::atan2(d.y(), d.x()) * Scalar(180) / Scalar(M_PI));
}

}  // namespace infogen
