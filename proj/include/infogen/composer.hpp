#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infogen/content.hpp"
#include "infogen/layout.hpp"
#include "infogen/vg_index.hpp"

namespace infogen {

struct Placement {
  std::string vg_template_id;
  Point2d position = Point2d::Zero();  // canvas units
  double rotation = 0;                  // degrees, [-180, 180)
  double scale = 1;
  ContentItem content;
};

enum class ConnectionStyle { FlowShape, Regular, Alternating, Pivot, None };

inline constexpr std::array<ConnectionStyle, 5> kAllStyles{ConnectionStyle::FlowShape, ConnectionStyle::Regular,
                                                          ConnectionStyle::Alternating, ConnectionStyle::Pivot,
                                                          ConnectionStyle::None};

std::string_view style_name(ConnectionStyle s);
std::optional<ConnectionStyle> parse_style(std::string_view name);

struct ConnectionPlacement {
  std::string shape_id;
  Point2d position = Point2d::Zero();
  double rotation = 0;
  double length = 0;
};

/// Per-cluster frequency table over the five connection styles.
struct CVifIndex {
  std::map<int, std::map<ConnectionStyle, int>> counts;

  bool operator==(const CVifIndex&) const = default;
};

struct ConnectionShape {
  std::string id;
  std::string svg;
  BBox2d extent;
  std::vector<ConnectionStyle> styles;  // styles the shape suits; empty = any

  bool operator==(const ConnectionShape&) const = default;
};

struct Palette {
  std::string name;
  std::vector<std::string> colors;  // theme tokens 1..4 map positionally
  std::string background = "#ffffff";

  bool operator==(const Palette&) const = default;
};

/// Tunables for placement and connection geometry.
struct ComposeParams {
  double beta = 0.8;   // VG larger extent as a fraction of the closest point pair distance
  double gamma = 0.6;  // connection length as a fraction of the free gap
  double delta = 0.5;  // flow-shape inset toward the center
};

std::vector<Placement> place_vgs(const VifLayout& layout, const VgTemplate& vg, const ContentSpec& content,
                                 const Canvas& canvas, const std::optional<PivotGraphic>& pivot,
                                 const ComposeParams& params = {});

/// Larger on-canvas extent of a VG placed at `scale`.
double vg_extent(const VgTemplate& vg, double scale);

/// Greedy word wrap where each character advances 0.6 * font size.
std::vector<std::string> wrap_text(std::string_view text, double font_size, double width);

/// Largest integer font size (>= 1) whose wrapped text fits the box at a
/// line height of one font size.
int fit_font_size(std::string_view text, double width, double height);

/// Content for every populated slot, each group counter-rotated by
/// -rotation about its placeholder center so it reads upright.
std::string embed_content(const VgTemplate& vg, const ContentItem& item, double rotation);

struct StyleRanking {
  std::vector<std::pair<ConnectionStyle, double>> styles;
  bool fallback = false;  // cluster missing from the index; uniform
};

/// Add-one smoothed style probabilities for a cluster.
StyleRanking rank_connection_styles(const CVifIndex& index, int cluster_id);

/// `points` are the denormalized layout points.
std::vector<ConnectionPlacement> generate_connections(ConnectionStyle style, const std::vector<Placement>& placements,
                                                      const std::vector<Point2d>& points,
                                                      const std::optional<PivotGraphic>& pivot, const Canvas& canvas,
                                                      const std::string& shape_id, double vg_extent,
                                                      const ComposeParams& params = {});

struct DesignScores {
  LayoutScore layout;
  double tfidf = 0;
  double p_style = 0;
  double composite = 0;
};

struct InfographicDesign {
  Canvas canvas;
  VifLayout layout;
  VgTemplate vg;
  std::vector<Placement> placements;
  ConnectionStyle connection_style = ConnectionStyle::None;
  std::optional<ConnectionShape> connection_shape;
  std::vector<ConnectionPlacement> connections;
  std::optional<PivotGraphic> pivot;
  std::optional<std::string> heading;
  std::vector<std::string> palette;
  std::string background = "#ffffff";
  DesignScores scores;
};

/// Stage maxima over the candidate set, used to normalize the composite.
struct StageNormalizers {
  double max_e_l = 0;
  double max_tfidf = 0;
};

double composite_score(double e_l, double tfidf, double p_style, const StageNormalizers& norm);

struct StageChoice {
  ScoredLayout layout;
  ScoredTemplate vg;
  ConnectionStyle style = ConnectionStyle::None;
  double p_style = 0;
};

InfographicDesign compose_design(const ContentSpec& content, const Canvas& canvas, const StageChoice& choice,
                                 const std::optional<PivotGraphic>& pivot, const Palette& palette,
                                 const std::optional<ConnectionShape>& shape, const StageNormalizers& norm,
                                 const ComposeParams& params = {});

/// Layers: background, pivot, connections, VG groups. Byte-deterministic.
std::string render_svg(const InfographicDesign& design);

/// Fixed 4-decimal formatting used throughout the SVG output.
std::string fmt_num(double v);

}  // namespace infogen
