#include "infogen/svg_xml.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace infogen::xml {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node document() {
    skip_misc();
    if (!starts("<")) fail("expected root element");
    Node root = element();
    skip_misc();
    if (pos_ != src_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(std::string_view what) const {
    throw Error(Stage::Dataset, "malformed_svg", fmt::format("malformed SVG at offset {}: {}", pos_, what));
  }

  bool starts(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void skip_past(std::string_view terminator) {
    const auto at = src_.find(terminator, pos_);
    if (at == std::string_view::npos) fail(fmt::format("unterminated construct, missing '{}'", terminator));
    pos_ = at + terminator.size();
  }

  // Prolog, comments, processing instructions and doctype around the root.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts("<?")) skip_past("?>");
      else if (starts("<!--")) skip_past("-->");
      else if (starts("<!DOCTYPE")) skip_past(">");
      else return;
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.';
  }

  std::string name() {
    const auto begin = pos_;
    while (pos_ < src_.size() && name_char(src_[pos_])) ++pos_;
    if (begin == pos_) fail("expected a name");
    return std::string(src_.substr(begin, pos_ - begin));
  }

  std::string decode(std::string_view raw) const {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        if (raw[i] == '<') fail("'<' in character data");
        out += raw[i];
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const auto ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else if (ent.starts_with("#")) {
        unsigned long cp = 0;
        const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
        const auto digits = ent.substr(hex ? 2 : 1);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
        if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty()) fail("bad character reference");
        append_utf8(out, cp);
      } else {
        fail(fmt::format("unknown entity '&{};'", ent));
      }
      i = semi;
    }
    return out;
  }

  void append_utf8(std::string& out, unsigned long cp) const {
    if (cp < 0x80) out += static_cast<char>(cp);
    else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      fail("character reference out of range");
    }
  }

  Node element() {
    ++pos_;  // '<'
    Node node = Node::element(name());
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size()) fail("unterminated start tag");
      if (starts("/>")) {
        pos_ += 2;
        return node;
      }
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      auto key = name();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '=') fail("expected '=' after attribute name");
      ++pos_;
      skip_ws();
      if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\'')) fail("expected quoted attribute value");
      const char quote = src_[pos_++];
      const auto end = src_.find(quote, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      if (node.attr(key)) fail(fmt::format("duplicate attribute '{}'", key));
      node.attributes.emplace_back(std::move(key), decode(src_.substr(pos_, end - pos_)));
      pos_ = end + 1;
    }

    for (;;) {
      if (pos_ >= src_.size()) fail(fmt::format("unclosed element <{}>", node.name));
      if (starts("</")) {
        pos_ += 2;
        const auto closing = name();
        if (closing != node.name) fail(fmt::format("mismatched </{}> for <{}>", closing, node.name));
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '>') fail("expected '>'");
        ++pos_;
        return node;
      }
      if (starts("<!--")) {
        skip_past("-->");
      } else if (starts("<![CDATA[")) {
        pos_ += 9;
        const auto end = src_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        node.children.push_back(Node::text_node(std::string(src_.substr(pos_, end - pos_))));
        pos_ = end + 3;
      } else if (starts("<?")) {
        skip_past("?>");
      } else if (src_[pos_] == '<') {
        node.children.push_back(element());
      } else {
        const auto end = src_.find('<', pos_);
        const auto raw = src_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
        pos_ += raw.size();
        node.children.push_back(Node::text_node(decode(raw)));
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

void serialize_into(const Node& node, std::string& out) {
  if (!node.is_element()) {
    out += escape(node.text, false);
    return;
  }
  out += '<';
  out += node.name;
  for (const auto& [k, v] : node.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape(v, true);
    out += '"';
  }
  if (node.children.empty()) {
    out += "/>";
    return;
  }
  out += '>';
  for (const auto& c : node.children) serialize_into(c, out);
  out += "</";
  out += node.name;
  out += '>';
}

std::vector<double> number_list(std::string_view s) {
  std::vector<double> out;
  std::string buf(s);
  const char* p = buf.c_str();
  char* end = nullptr;
  for (;;) {
    while (*p && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
    if (!*p) break;
    const double v = std::strtod(p, &end);
    if (end == p) break;
    out.push_back(v);
    p = end;
  }
  return out;
}

struct Extent {
  bool any = false;
  Point2d lo, hi;
  void add(double x, double y) {
    if (!any) {
      lo = hi = Point2d(x, y);
      any = true;
    } else {
      lo = lo.cwiseMin(Point2d(x, y));
      hi = hi.cwiseMax(Point2d(x, y));
    }
  }
  std::optional<BBox2d> box() const {
    if (!any) return std::nullopt;
    return BBox2d{lo.x(), lo.y(), hi.x() - lo.x(), hi.y() - lo.y()};
  }
};

// Path extent over endpoints and control points.
std::optional<BBox2d> path_bbox(std::string_view d) {
  Extent ext;
  Point2d cur(0, 0), start(0, 0);
  std::string buf(d);
  const char* p = buf.c_str();
  char cmd = 0;
  auto read = [&](double& v) {
    while (*p && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
    char* end = nullptr;
    v = std::strtod(p, &end);
    if (end == p) return false;
    p = end;
    return true;
  };
  for (;;) {
    while (*p && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',')) ++p;
    if (!*p) break;
    if (std::isalpha(static_cast<unsigned char>(*p))) cmd = *p++;
    if (!cmd) return std::nullopt;
    const bool rel = std::islower(static_cast<unsigned char>(cmd));
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    if (c == 'Z') {
      cur = start;
      continue;
    }
    int pairs = 0;
    switch (c) {
      case 'M': case 'L': case 'T': pairs = 1; break;
      case 'S': case 'Q': pairs = 2; break;
      case 'C': pairs = 3; break;
      case 'H': case 'V': pairs = 0; break;
      case 'A': pairs = -1; break;
      default: return std::nullopt;
    }
    if (c == 'H' || c == 'V') {
      double v;
      if (!read(v)) return std::nullopt;
      if (c == 'H') cur.x() = rel ? cur.x() + v : v;
      else cur.y() = rel ? cur.y() + v : v;
      ext.add(cur.x(), cur.y());
      continue;
    }
    if (c == 'A') {
      double rx, ry, rot, large, sweep, x, y;
      if (!(read(rx) && read(ry) && read(rot) && read(large) && read(sweep) && read(x) && read(y))) return std::nullopt;
      cur = rel ? Point2d(cur.x() + x, cur.y() + y) : Point2d(x, y);
      ext.add(cur.x(), cur.y());
      continue;
    }
    Point2d last = cur;
    for (int i = 0; i < pairs; ++i) {
      double x, y;
      if (!(read(x) && read(y))) return std::nullopt;
      last = rel ? Point2d(cur.x() + x, cur.y() + y) : Point2d(x, y);
      ext.add(last.x(), last.y());
    }
    cur = last;
    if (c == 'M') {
      start = cur;
      cmd = rel ? 'l' : 'L';
    }
  }
  return ext.box();
}

}  // namespace

std::optional<std::string> Node::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return v;
  return std::nullopt;
}

void Node::set_attr(std::string_view key, std::string value) {
  for (auto& [k, v] : attributes)
    if (k == key) {
      v = std::move(value);
      return;
    }
  attributes.emplace_back(std::string(key), std::move(value));
}

void Node::remove_attr(std::string_view key) {
  std::erase_if(attributes, [&](const auto& kv) { return kv.first == key; });
}

Node parse(std::string_view source) { return Parser(source).document(); }

std::string escape(std::string_view raw, bool attribute) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"':
        if (attribute) out += "&quot;";
        else out += c;
        break;
      default: out += c;
    }
  }
  return out;
}

std::string serialize(const Node& node) {
  std::string out;
  serialize_into(node, out);
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  if (s.ends_with("px")) s.remove_suffix(2);
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str()) return std::nullopt;
  while (*end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end) return std::nullopt;
  return v;
}

std::optional<BBox2d> element_bbox(const Node& e) {
  if (!e.is_element()) return std::nullopt;
  auto num = [&](std::string_view key, double fallback = 0.0) -> std::optional<double> {
    const auto v = e.attr(key);
    if (!v) return fallback;
    return parse_number(*v);
  };
  auto all = [](auto... v) { return (v.has_value() && ...); };

  if (e.name == "rect" || e.name == "image" || e.name == "use" || e.name == "foreignObject") {
    auto x = num("x"), y = num("y"), w = num("width", -1), h = num("height", -1);
    if (!all(x, y, w, h) || *w < 0 || *h < 0) return std::nullopt;
    return BBox2d{*x, *y, *w, *h};
  }
  if (e.name == "circle") {
    auto cx = num("cx"), cy = num("cy"), r = num("r", -1);
    if (!all(cx, cy, r) || *r < 0) return std::nullopt;
    return BBox2d{*cx - *r, *cy - *r, 2 * *r, 2 * *r};
  }
  if (e.name == "ellipse") {
    auto cx = num("cx"), cy = num("cy"), rx = num("rx", -1), ry = num("ry", -1);
    if (!all(cx, cy, rx, ry) || *rx < 0 || *ry < 0) return std::nullopt;
    return BBox2d{*cx - *rx, *cy - *ry, 2 * *rx, 2 * *ry};
  }
  if (e.name == "line") {
    auto x1 = num("x1"), y1 = num("y1"), x2 = num("x2"), y2 = num("y2");
    if (!all(x1, y1, x2, y2)) return std::nullopt;
    Extent ext;
    ext.add(*x1, *y1);
    ext.add(*x2, *y2);
    return ext.box();
  }
  if (e.name == "polygon" || e.name == "polyline") {
    const auto pts = number_list(e.attr("points").value_or(""));
    Extent ext;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) ext.add(pts[i], pts[i + 1]);
    return ext.box();
  }
  if (e.name == "path") {
    const auto d = e.attr("d");
    return d ? path_bbox(*d) : std::nullopt;
  }
  return std::nullopt;
}

std::optional<BBox2d> fragment_extent(const Node& root) {
  if (const auto vb = root.attr("viewBox")) {
    const auto v = number_list(*vb);
    if (v.size() == 4 && v[2] >= 0 && v[3] >= 0) return BBox2d{v[0], v[1], v[2], v[3]};
  }
  Extent ext;
  for_each_element(root, [&](const Node& e) {
    if (const auto b = element_bbox(e)) {
      ext.add(b->x, b->y);
      ext.add(b->x + b->w, b->y + b->h);
    }
  });
  return ext.box();
}

}  // namespace infogen::xml
