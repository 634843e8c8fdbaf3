#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infogen/composer.hpp"
#include "infogen/dataset.hpp"

namespace infogen {

/// Fixed stage choices; pinned stages are not ranked.
struct StageOverrides {
  std::optional<std::string> layout_id;
  std::optional<std::string> vg_id;
  std::optional<ConnectionStyle> connection_style;
};

struct RecommendOptions {
  double alpha = kDefaultAlpha;
  std::size_t top_k_layouts = 5;
  std::size_t top_k_vgs = 5;
  std::size_t top_k_styles = 5;
  std::size_t n = 5;
  bool relax_count = false;
  std::optional<std::string> palette;
  StageOverrides overrides;
  ComposeParams params;
};

struct RecommendInput {
  ContentSpec content;
  Canvas canvas;
  std::optional<PivotGraphic> pivot;
  std::optional<Polyline2d> sketch;
};

struct Recommendation {
  InfographicDesign design;
  int cluster_id = 0;
  std::optional<double> sketch_distance;
};

/// Three-stage pipeline: rank layouts (or sketch neighbours re-ordered by
/// layout energy), then VG designs per layout cluster, then connection
/// styles; the Cartesian product is ordered by the composite score.
std::vector<Recommendation> recommend(const DatasetManifest& dataset, const RecommendInput& input,
                                      const RecommendOptions& options = {});

/// Shape used to draw a style: first by id that lists the style (or lists
/// none), else the first shape.
std::optional<ConnectionShape> shape_for_style(const DatasetManifest& dataset, ConnectionStyle style);

}  // namespace infogen
