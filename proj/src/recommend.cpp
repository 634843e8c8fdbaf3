#include "infogen/recommend.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <tuple>

namespace infogen {
namespace {

struct LayoutCandidate {
  ScoredLayout scored;
  int cluster = 0;
  std::optional<double> sketch_distance;
};

struct Candidate {
  std::size_t layout = 0;
  ScoredTemplate vg;
  ConnectionStyle style = ConnectionStyle::None;
  double p_style = 0;
  double composite = 0;
};

std::vector<LayoutCandidate> layout_stage(const DatasetManifest& m, const RecommendInput& in,
                                          const RecommendOptions& opt, std::size_t n) {
  std::vector<LayoutCandidate> out;
  auto cluster_of = [&](const VifLayout& view) { return layout_cluster(m, *m.find_layout(view.id)); };

  if (opt.overrides.layout_id) {
    const VifLayout* l = m.find_layout(*opt.overrides.layout_id);
    if (!l) throw Error(Stage::Layout, "unknown_layout", fmt::format("unknown layout id '{}'", *opt.overrides.layout_id));
    if (l->points.size() != n && !(opt.relax_count && l->points.size() > n))
      throw Error(Stage::Layout, "count_mismatch",
                  fmt::format("layout '{}' has {} points, content has {} items", l->id, l->points.size(), n));
    const auto ranked = rank_layouts({*l}, n, in.canvas, in.pivot,
                                     {opt.alpha, 1, opt.relax_count, /*require_clear_pivot=*/false});
    if (ranked.front().score.e_o == 0)
      throw Error(Stage::Layout, "pivot_overlap", fmt::format("layout '{}' overlaps the pivot graphic", l->id));
    out.push_back({ranked.front(), cluster_of(ranked.front().layout), std::nullopt});
    return out;
  }

  if (in.sketch) {
    const auto near = match_sketch(*in.sketch, m.layouts, n, opt.top_k_layouts, opt.relax_count);
    for (const auto& match : near) {
      const auto ranked = rank_layouts({match.layout}, n, in.canvas, in.pivot, {opt.alpha, 1, false, false});
      if (ranked.front().score.e_o == 0) continue;
      out.push_back({ranked.front(), cluster_of(match.layout), match.distance});
    }
    if (out.empty())
      throw Error(Stage::Layout, "no_layouts",
                  fmt::format("no layouts for {} visual groups clear of the pivot graphic near the sketch", n));
    std::stable_sort(out.begin(), out.end(), [](const LayoutCandidate& a, const LayoutCandidate& b) {
      if (a.scored.score.e_l != b.scored.score.e_l) return a.scored.score.e_l > b.scored.score.e_l;
      return a.scored.layout.id < b.scored.layout.id;
    });
    return out;
  }

  RankOptions ro;
  ro.alpha = opt.alpha;
  ro.top_k = opt.top_k_layouts;
  ro.relax_count = opt.relax_count;
  ro.require_clear_pivot = true;
  for (auto& s : rank_layouts(m.layouts, n, in.canvas, in.pivot, ro)) {
    const int c = cluster_of(s.layout);
    out.push_back({std::move(s), c, std::nullopt});
  }
  return out;
}

std::vector<ScoredTemplate> vg_stage(const DatasetManifest& m, int cluster, const SlotSet& required,
                                     const RecommendOptions& opt) {
  static const VgVifIndex kEmpty;
  const VgVifIndex& index = m.vg_vif_index ? *m.vg_vif_index : kEmpty;
  if (opt.overrides.vg_id) {
    const VgTemplate* t = m.find_vg(*opt.overrides.vg_id);
    if (!t) throw Error(Stage::Vg, "unknown_vg", fmt::format("unknown vg id '{}'", *opt.overrides.vg_id));
    return rank_vgs(index, {*t}, cluster, required, 1);
  }
  return rank_vgs(index, m.vg_templates, cluster, required, opt.top_k_vgs);
}

std::vector<std::pair<ConnectionStyle, double>> style_stage(const DatasetManifest& m, int cluster, bool has_pivot,
                                                           const RecommendOptions& opt) {
  static const CVifIndex kEmpty;
  const auto ranking = rank_connection_styles(m.c_vif_index ? *m.c_vif_index : kEmpty, cluster);
  std::vector<std::pair<ConnectionStyle, double>> out;
  if (opt.overrides.connection_style) {
    const auto s = *opt.overrides.connection_style;
    if (s == ConnectionStyle::Pivot && !has_pivot)
      throw Error(Stage::Composer, "pivot_required", "pivot connection style requires a pivot graphic");
    for (const auto& entry : ranking.styles)
      if (entry.first == s) out.push_back(entry);
    return out;
  }
  for (const auto& entry : ranking.styles) {
    if (entry.first == ConnectionStyle::Pivot && !has_pivot) continue;
    if (out.size() < opt.top_k_styles) out.push_back(entry);
  }
  return out;
}

}  // namespace

std::optional<ConnectionShape> shape_for_style(const DatasetManifest& m, ConnectionStyle style) {
  std::vector<const ConnectionShape*> shapes;
  for (const auto& s : m.connection_shapes) shapes.push_back(&s);
  std::sort(shapes.begin(), shapes.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* s : shapes)
    if (s->styles.empty() || std::find(s->styles.begin(), s->styles.end(), style) != s->styles.end()) return *s;
  if (!shapes.empty()) return *shapes.front();
  return std::nullopt;
}

std::vector<Recommendation> recommend(const DatasetManifest& m, const RecommendInput& in,
                                      const RecommendOptions& opt) {
  const std::size_t n = in.content.items.size();
  if (n == 0) throw Error(Stage::Content, "no_items", "no content items");
  if (opt.n == 0) return {};

  const SlotSet required = required_slots(in.content);
  const auto layouts = layout_stage(m, in, opt, n);

  std::vector<Candidate> candidates;
  StageNormalizers norm;
  for (std::size_t li = 0; li < layouts.size(); ++li) {
    norm.max_e_l = std::max(norm.max_e_l, layouts[li].scored.score.e_l);
    const auto vgs = vg_stage(m, layouts[li].cluster, required, opt);
    const auto styles = style_stage(m, layouts[li].cluster, in.pivot.has_value(), opt);
    for (const auto& vg : vgs) {
      norm.max_tfidf = std::max(norm.max_tfidf, vg.score);
      for (const auto& [style, p] : styles) candidates.push_back({li, vg, style, p, 0.0});
    }
  }
  if (candidates.empty())
    throw Error(Stage::Connection, "no_styles", "no connection style candidates for the chosen layouts");

  for (auto& c : candidates)
    c.composite = composite_score(layouts[c.layout].scored.score.e_l, c.vg.score, c.p_style, norm);
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    const auto& la = layouts[a.layout].scored.layout.id;
    const auto& lb = layouts[b.layout].scored.layout.id;
    return std::tie(la, a.vg.vg.id, a.style) < std::tie(lb, b.vg.vg.id, b.style);
  });
  if (candidates.size() > opt.n) candidates.resize(opt.n);

  Palette palette{"default", {}, "#ffffff"};
  if (opt.palette) {
    const Palette* p = m.find_palette(*opt.palette);
    if (!p) throw Error(Stage::Composer, "unknown_palette", fmt::format("unknown palette '{}'", *opt.palette));
    palette = *p;
  } else if (!m.palettes.empty()) {
    palette = m.palettes.front();
  }

  std::vector<Recommendation> out;
  for (const auto& c : candidates) {
    const auto& lc = layouts[c.layout];
    StageChoice choice{lc.scored, c.vg, c.style, c.p_style};
    Recommendation r;
    r.design = compose_design(in.content, in.canvas, choice, in.pivot, palette, shape_for_style(m, c.style), norm,
                              opt.params);
    r.cluster_id = lc.cluster;
    r.sketch_distance = lc.sketch_distance;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace infogen
