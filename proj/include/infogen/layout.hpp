#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "infogen/geometry.hpp"

namespace infogen {

/// Ordered VG positions in the unit square; order is the reading flow.
struct VifLayout {
  std::string id;
  std::vector<Point2d> points;
  std::optional<int> cluster_id;
  std::string source;

  bool operator==(const VifLayout&) const = default;
};

struct Canvas {
  double width = 800;
  double height = 600;

  double area() const { return width * height; }
  Point2d center() const { return {width / 2, height / 2}; }
  bool operator==(const Canvas&) const = default;
};

struct PivotGraphic {
  BBox2d bbox;
  std::optional<std::string> graphic;  // SVG fragment

  bool operator==(const PivotGraphic&) const = default;
};

struct LayoutScore {
  int e_o = 1;
  double e_c = 0;
  double e_u_raw = 0;
  double u = 1;
  double alpha = 0.5;
  double e_l = 0;
};

inline constexpr double kDefaultAlpha = 0.5;

/// Layout points scaled to canvas units.
std::vector<Point2d> denormalize(const VifLayout& layout, const Canvas& canvas);

/// Layout energy: e_l = e_o * (alpha * e_c + (1 - alpha) * u).
///
/// e_o is the pivot-overlap indicator, e_c the hull coverage of the canvas,
/// and u = 1 / (1 + sigma / mean) maps the spread of point distances about
/// the pivot center (canvas center without a pivot) into (0, 1], so a more
/// uniform spread scores higher.
LayoutScore score_layout(const VifLayout& layout, const Canvas& canvas, const std::optional<PivotGraphic>& pivot,
                         double alpha = kDefaultAlpha);

struct ScoredLayout {
  VifLayout layout;
  LayoutScore score;
};

struct RankOptions {
  double alpha = kDefaultAlpha;
  std::size_t top_k = 10;
  /// Accept layouts with more than n points, truncated to the first n.
  bool relax_count = false;
  /// Drop layouts that overlap the pivot (e_o = 0) before the top_k cut.
  bool require_clear_pivot = false;
};

/// Layouts with `n_vgs` points, e_l descending, ties by id ascending.
std::vector<ScoredLayout> rank_layouts(const std::vector<VifLayout>& dataset, std::size_t n_vgs, const Canvas& canvas,
                                       const std::optional<PivotGraphic>& pivot, const RankOptions& options = {});

struct SketchMatch {
  VifLayout layout;
  double distance = 0;
};

/// Maps points into the unit square keeping aspect ratio: centered on
/// (0.5, 0.5) and scaled by the larger bounding-box extent.
std::vector<Point2d> normalize_to_unit(std::span<const Point2d> points);

/// Dominant points of the sketch (default tolerance 2% of the bbox
/// diagonal), resampled to n_vgs by arc length when the counts differ.
std::vector<Point2d> sketch_positions(const Polyline2d& stroke, std::size_t n_vgs,
                                      std::optional<double> epsilon = std::nullopt);

/// Nearest dataset layouts to a freehand stroke. The distance is the mean
/// point-to-point distance in normalized frames, minimized over forward
/// and reversed point order.
std::vector<SketchMatch> match_sketch(const Polyline2d& stroke, const std::vector<VifLayout>& dataset,
                                      std::size_t n_vgs, std::size_t top_k, bool relax_count = false);

/// Truncation view used by the relaxed count filter.
VifLayout take_first(const VifLayout& layout, std::size_t n);

}  // namespace infogen
