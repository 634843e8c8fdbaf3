#include "infogen/composer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "infogen/svg_xml.hpp"

namespace infogen {
namespace {

constexpr double kGlyphAdvance = 0.6;
constexpr double kBaseline = 0.8;  // baseline offset within a line, in font sizes
constexpr const char* kTextColor = "#222222";

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80 ? 1 : 0;
  return n;
}

bool text_fits(std::string_view text, double font, double width, double height) {
  const auto lines = wrap_text(text, font, width);
  if (static_cast<double>(lines.size()) * font > height) return false;
  for (const auto& l : lines)
    if (static_cast<double>(utf8_length(l)) * kGlyphAdvance * font > width) return false;
  return true;
}

xml::Node text_block(std::string_view value, const BBox2d& box, bool bold) {
  const int font = fit_font_size(value, box.w, box.h);
  const auto lines = wrap_text(value, font, box.w);
  const double top = box.y + (box.h - static_cast<double>(lines.size()) * font) / 2.0;
  const double cx = box.x + box.w / 2.0;

  auto text = xml::Node::element("text");
  text.set_attr("x", fmt_num(cx));
  text.set_attr("y", fmt_num(top + kBaseline * font));
  text.set_attr("font-family", "sans-serif");
  text.set_attr("font-size", std::to_string(font));
  if (bold) text.set_attr("font-weight", "bold");
  text.set_attr("text-anchor", "middle");
  text.set_attr("fill", kTextColor);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto span = xml::Node::element("tspan");
    span.set_attr("x", fmt_num(cx));
    span.set_attr("y", fmt_num(top + (static_cast<double>(i) + kBaseline) * font));
    span.children.push_back(xml::Node::text_node(lines[i]));
    text.children.push_back(std::move(span));
  }
  return text;
}

// Populated slot content wrapped in an upright group; nullopt when empty.
std::optional<xml::Node> embed_slot(SlotKind kind, const BBox2d& box, const std::string& value, double rotation) {
  if (value.empty()) return std::nullopt;
  auto group = xml::Node::element("g");
  group.set_attr("class", fmt::format("slot-{}", slot_name(kind)));
  if (rotation != 0.0) {
    const Point2d c = box.center();
    group.set_attr("transform", fmt::format("rotate({} {} {})", fmt_num(-rotation), fmt_num(c.x()), fmt_num(c.y())));
  }
  if (kind == SlotKind::Image) {
    auto img = xml::Node::element("image");
    img.set_attr("x", fmt_num(box.x));
    img.set_attr("y", fmt_num(box.y));
    img.set_attr("width", fmt_num(box.w));
    img.set_attr("height", fmt_num(box.h));
    img.set_attr("preserveAspectRatio", "xMidYMid meet");
    img.set_attr("xlink:href", value);
    group.children.push_back(std::move(img));
  } else {
    group.children.push_back(text_block(value, box, kind == SlotKind::Title));
  }
  return group;
}

void check_embeddable(const VgTemplate& vg, const ContentItem& item) {
  const auto sig = slot_signature(item);
  if (!vg.slots().includes(sig))
    throw Error(Stage::Composer, "slot_mismatch",
                fmt::format("content item has slots the VG design '{}' lacks", vg.id));
}

void strip_data_attributes(xml::Node& e) {
  std::erase_if(e.attributes, [](const auto& kv) { return kv.first.starts_with("data-"); });
}

void apply_theme(xml::Node& e, const std::vector<std::string>& palette) {
  const auto token = e.attr("data-theme-color");
  if (!token) return;
  const auto idx = xml::parse_number(*token);
  if (!idx || *idx < 1 || static_cast<std::size_t>(*idx) > palette.size()) return;
  const auto& color = palette[static_cast<std::size_t>(*idx) - 1];
  if (e.attr("fill") == std::optional<std::string>("none")) e.set_attr("stroke", color);
  else e.set_attr("fill", color);
}

// Template children with placeholders replaced and palette applied.
std::vector<xml::Node> instantiate(const std::vector<xml::Node>& nodes, const VgTemplate& vg,
                                   const ContentItem* item, double rotation, const std::vector<std::string>& palette) {
  std::vector<xml::Node> out;
  for (const auto& n : nodes) {
    if (!n.is_element()) {
      out.push_back(n);
      continue;
    }
    if (const auto slot = n.attr("data-slot")) {
      const auto kind = parse_slot_kind(*slot);
      if (item && kind) {
        const auto& value = item->field(*kind);
        if (value)
          if (auto g = embed_slot(*kind, vg.placeholders.at(*kind), *value, rotation)) out.push_back(std::move(*g));
      }
      continue;
    }
    xml::Node copy = n;
    apply_theme(copy, palette);
    strip_data_attributes(copy);
    copy.children = instantiate(n.children, vg, item, rotation, palette);
    out.push_back(std::move(copy));
  }
  return out;
}

std::vector<xml::Node> fragment_children(const std::string& svg) {
  auto root = xml::parse(svg);
  if (root.name == "svg") return root.children;
  return {root};
}

std::string transform_chain(const Point2d& pos, double rotation, double scale, const Point2d& anchor) {
  return fmt::format("translate({} {}) rotate({}) scale({}) translate({} {})", fmt_num(pos.x()), fmt_num(pos.y()),
                     fmt_num(rotation), fmt_num(scale), fmt_num(-anchor.x()), fmt_num(-anchor.y()));
}

}  // namespace

std::string fmt_num(double v) {
  auto s = fmt::format("{:.4f}", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string_view style_name(ConnectionStyle s) {
  switch (s) {
    case ConnectionStyle::FlowShape: return "flow_shape";
    case ConnectionStyle::Regular: return "regular";
    case ConnectionStyle::Alternating: return "alternating";
    case ConnectionStyle::Pivot: return "pivot";
    case ConnectionStyle::None: return "none";
  }
  return "none";
}

std::optional<ConnectionStyle> parse_style(std::string_view name) {
  for (auto s : kAllStyles)
    if (style_name(s) == name) return s;
  return std::nullopt;
}

double vg_extent(const VgTemplate& vg, double scale) { return scale * vg.extent.max_extent(); }

std::vector<Placement> place_vgs(const VifLayout& layout, const VgTemplate& vg, const ContentSpec& content,
                                 const Canvas& canvas, const std::optional<PivotGraphic>& pivot,
                                 const ComposeParams& params) {
  if (layout.points.size() != content.items.size())
    throw Error(Stage::Composer, "count_mismatch",
                fmt::format("layout '{}' has {} points but content has {} items", layout.id, layout.points.size(),
                            content.items.size()));
  const double size = vg.extent.max_extent();
  if (!(size > 0)) throw Error(Stage::Composer, "empty_vg", fmt::format("VG design '{}' has zero extent", vg.id));

  const auto pts = denormalize(layout, canvas);
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d_min = std::min(d_min, (pts[i] - pts[j]).norm());
  const double target = (pts.size() < 2 || !(d_min > 0)) ? params.beta * std::min(canvas.width, canvas.height) / 4.0
                                                          : params.beta * d_min;

  std::vector<Placement> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Placement p;
    p.vg_template_id = vg.id;
    p.position = pts[i];
    p.scale = target / size;
    // Templates face +x, so the pivot-to-VG direction is the rotation itself.
    p.rotation = pivot ? direction_degrees(pivot->bbox.center(), pts[i]) : 0.0;
    p.content = content.items[i];
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> wrap_text(std::string_view text, double font_size, double width) {
  const double max_chars = width / (kGlyphAdvance * font_size);
  std::vector<std::string> lines;
  std::string line;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    auto end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const auto word = text.substr(pos, end - pos);
    pos = end;
    if (line.empty()) {
      line = word;
    } else if (static_cast<double>(utf8_length(line) + 1 + utf8_length(word)) <= max_chars) {
      line += ' ';
      line += word;
    } else {
      lines.push_back(std::move(line));
      line = word;
    }
  }
  if (!line.empty()) lines.push_back(std::move(line));
  return lines;
}

int fit_font_size(std::string_view text, double width, double height) {
  int lo = 1;
  int hi = std::max(1, static_cast<int>(std::floor(height)));
  if (!text_fits(text, lo, width, height)) return 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (text_fits(text, mid, width, height)) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

std::string embed_content(const VgTemplate& vg, const ContentItem& item, double rotation) {
  check_embeddable(vg, item);
  std::string out;
  for (auto kind : kAllSlots) {
    const auto& value = item.field(kind);
    if (!value) continue;
    if (auto g = embed_slot(kind, vg.placeholders.at(kind), *value, rotation)) out += xml::serialize(*g);
  }
  return out;
}

StyleRanking rank_connection_styles(const CVifIndex& index, int cluster_id) {
  StyleRanking r;
  const auto it = index.counts.find(cluster_id);
  if (it == index.counts.end()) {
    r.fallback = true;
    for (auto s : kAllStyles) r.styles.emplace_back(s, 1.0 / kAllStyles.size());
    return r;
  }
  int total = 0;
  for (const auto& [_, c] : it->second) total += c;
  for (auto s : kAllStyles) {
    const auto c = it->second.find(s);
    const int count = c == it->second.end() ? 0 : c->second;
    r.styles.emplace_back(s, (count + 1.0) / (total + static_cast<double>(kAllStyles.size())));
  }
  std::stable_sort(r.styles.begin(), r.styles.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return r;
}

std::vector<ConnectionPlacement> generate_connections(ConnectionStyle style, const std::vector<Placement>& placements,
                                                      const std::vector<Point2d>& points,
                                                      const std::optional<PivotGraphic>& pivot, const Canvas& canvas,
                                                      const std::string& shape_id, double vg_extent,
                                                      const ComposeParams& params) {
  std::vector<ConnectionPlacement> out;
  auto flow_line = [&](std::size_t i, const Point2d& center, double inset) {
    const Point2d a = points[i], b = points[i + 1];
    const Point2d mid = (a + b) / 2.0;
    ConnectionPlacement c;
    c.shape_id = shape_id;
    c.position = mid + inset * (center - mid);
    c.rotation = direction_degrees(a, b);
    c.length = std::max(0.0, params.gamma * ((b - a).norm() - vg_extent));
    return c;
  };

  switch (style) {
    case ConnectionStyle::None:
      break;
    case ConnectionStyle::Regular:
    case ConnectionStyle::Alternating:
      for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (style == ConnectionStyle::Regular || i % 2 == 0) out.push_back(flow_line(i, points[i], 0.0));
      break;
    case ConnectionStyle::FlowShape: {
      const Point2d center = pivot ? pivot->bbox.center() : canvas.center();
      for (std::size_t i = 0; i + 1 < points.size(); ++i) out.push_back(flow_line(i, center, params.delta));
      break;
    }
    case ConnectionStyle::Pivot: {
      if (!pivot)
        throw Error(Stage::Composer, "pivot_required", "pivot connection style requires a pivot graphic");
      const Point2d c = pivot->bbox.center();
      const double pivot_size = pivot->bbox.max_extent();
      for (const auto& p : placements) {
        ConnectionPlacement cp;
        cp.shape_id = shape_id;
        cp.position = (c + p.position) / 2.0;
        cp.rotation = direction_degrees(c, p.position);
        cp.length = std::max(0.0, params.gamma * ((p.position - c).norm() - (pivot_size + vg_extent) / 2.0));
        out.push_back(cp);
      }
      break;
    }
  }
  return out;
}

double composite_score(double e_l, double tfidf, double p_style, const StageNormalizers& norm) {
  const double layout = norm.max_e_l > 0 ? e_l / norm.max_e_l : 1.0;
  const double vg = norm.max_tfidf > 0 ? tfidf / norm.max_tfidf : 1.0;
  return layout * vg * p_style;
}

InfographicDesign compose_design(const ContentSpec& content, const Canvas& canvas, const StageChoice& choice,
                                 const std::optional<PivotGraphic>& pivot, const Palette& palette,
                                 const std::optional<ConnectionShape>& shape, const StageNormalizers& norm,
                                 const ComposeParams& params) {
  for (const auto& item : content.items) check_embeddable(choice.vg.vg, item);

  InfographicDesign d;
  d.canvas = canvas;
  d.layout = choice.layout.layout;
  d.vg = choice.vg.vg;
  d.placements = place_vgs(d.layout, d.vg, content, canvas, pivot, params);
  d.connection_style = choice.style;
  d.connection_shape = shape;
  const double extent = d.placements.empty() ? 0.0 : vg_extent(d.vg, d.placements.front().scale);
  d.connections = generate_connections(choice.style, d.placements, denormalize(d.layout, canvas), pivot, canvas,
                                       shape ? shape->id : std::string(), extent, params);
  d.pivot = pivot;
  d.heading = content.heading;
  d.palette = palette.colors;
  d.background = palette.background;
  d.scores.layout = choice.layout.score;
  d.scores.tfidf = choice.vg.score;
  d.scores.p_style = choice.p_style;
  d.scores.composite = composite_score(choice.layout.score.e_l, choice.vg.score, choice.p_style, norm);
  return d;
}

std::string render_svg(const InfographicDesign& d) {
  const auto w = fmt_num(d.canvas.width), h = fmt_num(d.canvas.height);
  std::string out;
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      w, h);
  out += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", w, h,
                     xml::escape(d.background, true));

  if (d.heading && !d.heading->empty()) {
    const BBox2d band{d.canvas.width * 0.05, 0.0, d.canvas.width * 0.9, d.canvas.height * 0.1};
    auto g = xml::Node::element("g");
    g.set_attr("class", "heading");
    g.children.push_back(text_block(*d.heading, band, true));
    out += xml::serialize(g) + "\n";
  }

  if (d.pivot) {
    const auto& b = d.pivot->bbox;
    auto g = xml::Node::element("g");
    g.set_attr("class", "pivot");
    std::optional<BBox2d> ext;
    std::vector<xml::Node> body;
    if (d.pivot->graphic) {
      auto root = xml::parse(*d.pivot->graphic);
      ext = xml::fragment_extent(root);
      body = root.name == "svg" ? root.children : std::vector<xml::Node>{root};
    }
    if (ext && ext->w > 0 && ext->h > 0) {
      const double s = std::min(b.w / ext->w, b.h / ext->h);
      const double tx = b.x + (b.w - s * ext->w) / 2.0 - s * ext->x;
      const double ty = b.y + (b.h - s * ext->h) / 2.0 - s * ext->y;
      g.set_attr("transform", fmt::format("translate({} {}) scale({})", fmt_num(tx), fmt_num(ty), fmt_num(s)));
      g.children = instantiate(body, d.vg, nullptr, 0.0, d.palette);
    } else {
      auto rect = xml::Node::element("rect");
      rect.set_attr("x", fmt_num(b.x));
      rect.set_attr("y", fmt_num(b.y));
      rect.set_attr("width", fmt_num(b.w));
      rect.set_attr("height", fmt_num(b.h));
      rect.set_attr("rx", fmt_num(std::min(b.w, b.h) / 8.0));
      rect.set_attr("fill", d.palette.empty() ? "#dddddd" : d.palette.front());
      g.children.push_back(std::move(rect));
    }
    out += xml::serialize(g) + "\n";
  }

  if (!d.connections.empty()) {
    auto layer = xml::Node::element("g");
    layer.set_attr("class", "connections");
    std::vector<xml::Node> shape_body;
    std::optional<BBox2d> shape_ext;
    if (d.connection_shape) {
      auto root = xml::parse(d.connection_shape->svg);
      shape_ext = d.connection_shape->extent;
      shape_body = root.name == "svg" ? root.children : std::vector<xml::Node>{root};
      shape_body = instantiate(shape_body, d.vg, nullptr, 0.0, d.palette);
    }
    const std::string stroke = d.palette.size() > 1 ? d.palette[1] : "#888888";
    for (const auto& c : d.connections) {
      if (!(c.length > 0)) continue;
      auto g = xml::Node::element("g");
      g.set_attr("class", "connection");
      if (shape_ext && shape_ext->w > 0) {
        g.set_attr("transform", transform_chain(c.position, c.rotation, c.length / shape_ext->w, shape_ext->center()));
        g.children = shape_body;
      } else {
        g.set_attr("transform", fmt::format("translate({} {}) rotate({})", fmt_num(c.position.x()),
                                            fmt_num(c.position.y()), fmt_num(c.rotation)));
        auto line = xml::Node::element("line");
        line.set_attr("x1", fmt_num(-c.length / 2.0));
        line.set_attr("y1", "0.0000");
        line.set_attr("x2", fmt_num(c.length / 2.0));
        line.set_attr("y2", "0.0000");
        line.set_attr("stroke", stroke);
        line.set_attr("stroke-width", "2");
        g.children.push_back(std::move(line));
      }
      layer.children.push_back(std::move(g));
    }
    out += xml::serialize(layer) + "\n";
  }

  const auto body = fragment_children(d.vg.svg);
  for (std::size_t i = 0; i < d.placements.size(); ++i) {
    const auto& p = d.placements[i];
    auto g = xml::Node::element("g");
    g.set_attr("class", "vg");
    g.set_attr("id", fmt::format("vg-{}", i + 1));
    g.set_attr("transform", transform_chain(p.position, p.rotation, p.scale, d.vg.anchor));
    g.children = instantiate(body, d.vg, &p.content, p.rotation, d.palette);
    out += xml::serialize(g) + "\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace infogen
