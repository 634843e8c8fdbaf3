#include "infogen/layout.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace infogen {
namespace {

LayoutScore score_points(const std::vector<Point2d>& pts, const Canvas& canvas,
                         const std::optional<PivotGraphic>& pivot, double alpha) {
  LayoutScore s;
  s.alpha = alpha;

  if (pivot) {
    for (const auto& p : pts)
      if (point_in_bbox(p, pivot->bbox)) {
        s.e_o = 0;
        break;
      }
  }

  s.e_c = polygon_area(convex_hull(pts)) / canvas.area();

  const Point2d ref = pivot ? pivot->bbox.center() : canvas.center();
  std::vector<double> dist;
  dist.reserve(pts.size());
  for (const auto& p : pts) dist.push_back((p - ref).norm());
  double mean = 0;
  for (double d : dist) mean += d;
  mean /= static_cast<double>(dist.size());
  double ss = 0;
  for (double d : dist) ss += (d - mean) * (d - mean);
  s.e_u_raw = std::sqrt(ss / static_cast<double>(dist.size()));
  s.u = mean > 0 ? 1.0 / (1.0 + s.e_u_raw / mean) : 1.0;

  s.e_l = s.e_o * (alpha * s.e_c + (1.0 - alpha) * s.u);
  return s;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(Stage::Layout, "bad_alpha", fmt::format("alpha must lie in [0, 1], got {}", alpha));
}

void check_canvas(const Canvas& canvas) {
  if (!(canvas.width > 0 && canvas.height > 0))
    throw Error(Stage::Layout, "bad_canvas", "canvas extents must be positive");
}

// Shape comparison frame shared by sketches and candidate layouts.
double oriented_distance(const std::vector<Point2d>& q, const std::vector<Point2d>& p) {
  const std::size_t n = q.size();
  double fwd = 0, rev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fwd += (q[i] - p[i]).norm();
    rev += (q[i] - p[n - 1 - i]).norm();
  }
  return std::min(fwd, rev) / static_cast<double>(n);
}

}  // namespace

std::vector<Point2d> denormalize(const VifLayout& layout, const Canvas& canvas) {
  std::vector<Point2d> out;
  out.reserve(layout.points.size());
  for (const auto& p : layout.points) out.emplace_back(p.x() * canvas.width, p.y() * canvas.height);
  return out;
}

LayoutScore score_layout(const VifLayout& layout, const Canvas& canvas, const std::optional<PivotGraphic>& pivot,
                         double alpha) {
  if (layout.points.size() < 2)
    throw Error(Stage::Layout, "short_layout", fmt::format("layout '{}' has fewer than 2 points", layout.id));
  check_alpha(alpha);
  check_canvas(canvas);
  return score_points(denormalize(layout, canvas), canvas, pivot, alpha);
}

VifLayout take_first(const VifLayout& layout, std::size_t n) {
  VifLayout out = layout;
  if (out.points.size() > n) out.points.resize(n);
  return out;
}

std::vector<ScoredLayout> rank_layouts(const std::vector<VifLayout>& dataset, std::size_t n_vgs, const Canvas& canvas,
                                       const std::optional<PivotGraphic>& pivot, const RankOptions& options) {
  if (n_vgs < 1 || n_vgs > 12)
    throw Error(Stage::Layout, "bad_count", fmt::format("visual group count must be in [1, 12], got {}", n_vgs));
  if (dataset.empty()) throw Error(Stage::Layout, "empty_dataset", "layout dataset is empty");
  check_alpha(options.alpha);
  check_canvas(canvas);

  std::vector<ScoredLayout> ranked;
  for (const auto& layout : dataset) {
    const std::size_t n = layout.points.size();
    if (n != n_vgs && !(options.relax_count && n > n_vgs)) continue;
    VifLayout view = take_first(layout, n_vgs);
    auto score = score_points(denormalize(view, canvas), canvas, pivot, options.alpha);
    if (options.require_clear_pivot && score.e_o == 0) continue;
    ranked.push_back({std::move(view), score});
  }
  if (ranked.empty()) {
    if (options.require_clear_pivot && pivot)
      throw Error(Stage::Layout, "no_layouts",
                  fmt::format("no layouts for {} visual groups clear of the pivot graphic", n_vgs));
    throw Error(Stage::Layout, "no_layouts", fmt::format("no layouts for {} visual groups", n_vgs));
  }

  std::stable_sort(ranked.begin(), ranked.end(), [](const ScoredLayout& a, const ScoredLayout& b) {
    if (a.score.e_l != b.score.e_l) return a.score.e_l > b.score.e_l;
    return a.layout.id < b.layout.id;
  });
  if (ranked.size() > options.top_k) ranked.resize(options.top_k);
  return ranked;
}

std::vector<Point2d> normalize_to_unit(std::span<const Point2d> points) {
  const auto box = bounding_box(points);
  const double extent = box.max_extent();
  const Point2d c = box.center();
  std::vector<Point2d> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (extent > 0)
      out.push_back((p - c) / extent + Point2d(0.5, 0.5));
    else
      out.emplace_back(0.5, 0.5);
  }
  return out;
}

std::vector<Point2d> sketch_positions(const Polyline2d& stroke, std::size_t n_vgs, std::optional<double> epsilon) {
  auto clean = normalize_polyline<double>(stroke);
  // Drawing direction carries no meaning: process the lexicographically
  // smaller of the stroke and its reverse so both give bit-identical output.
  for (std::size_t i = 0, j = clean.size(); i < clean.size(); ++i) {
    const auto& a = clean[i];
    const auto& b = clean[--j];
    if (a == b) continue;
    if (b.x() < a.x() || (b.x() == a.x() && b.y() < a.y())) std::reverse(clean.begin(), clean.end());
    break;
  }
  if (clean.size() < 2) throw Error(Stage::Layout, "degenerate_sketch", "degenerate sketch");
  const auto box = bounding_box(clean);
  const double diagonal = std::hypot(box.w, box.h);
  if (diagonal == 0) throw Error(Stage::Layout, "degenerate_sketch", "degenerate sketch");

  auto corners = dominant_points<double>(clean, epsilon.value_or(0.02 * diagonal));
  if (corners.size() != n_vgs) corners = resample_arc_length<double>(corners, n_vgs);
  return corners;
}

std::vector<SketchMatch> match_sketch(const Polyline2d& stroke, const std::vector<VifLayout>& dataset,
                                      std::size_t n_vgs, std::size_t top_k, bool relax_count) {
  if (stroke.size() < 2) throw Error(Stage::Layout, "degenerate_sketch", "degenerate sketch");
  for (const auto& p : stroke)
    if (!is_finite(p)) throw Error(Stage::Layout, "degenerate_sketch", "sketch contains non-finite coordinates");
  if (n_vgs < 1 || n_vgs > 12)
    throw Error(Stage::Layout, "bad_count", fmt::format("visual group count must be in [1, 12], got {}", n_vgs));

  const auto query = normalize_to_unit(sketch_positions(stroke, n_vgs));

  std::vector<SketchMatch> matches;
  for (const auto& layout : dataset) {
    const std::size_t n = layout.points.size();
    if (n != n_vgs && !(relax_count && n > n_vgs)) continue;
    VifLayout view = take_first(layout, n_vgs);
    const auto cand = normalize_to_unit(view.points);
    matches.push_back({std::move(view), oriented_distance(query, cand)});
  }
  if (matches.empty())
    throw Error(Stage::Layout, "no_layouts", fmt::format("no layouts for {} visual groups", n_vgs));

  std::stable_sort(matches.begin(), matches.end(), [](const SketchMatch& a, const SketchMatch& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.layout.id < b.layout.id;
  });
  if (matches.size() > top_k) matches.resize(top_k);
  return matches;
}

}  // namespace infogen
