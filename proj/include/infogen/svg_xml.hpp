#pragma once

// Minimal XML tree for SVG templates: enough to discover placeholders,
// rewrite attributes and serialize deterministically. No namespaces,
// no DTD processing.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infogen/geometry.hpp"

namespace infogen::xml {

struct Node {
  enum class Kind { Element, Text };

  Kind kind = Kind::Element;
  std::string name;  // element name, empty for text
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;  // decoded character data for text nodes

  static Node element(std::string name) {
    Node n;
    n.name = std::move(name);
    return n;
  }
  static Node text_node(std::string text) {
    Node n;
    n.kind = Kind::Text;
    n.text = std::move(text);
    return n;
  }

  bool is_element() const { return kind == Kind::Element; }
  std::optional<std::string> attr(std::string_view key) const;
  void set_attr(std::string_view key, std::string value);
  void remove_attr(std::string_view key);

  bool operator==(const Node&) const = default;
};

/// Parses one document (optional prolog/comments, exactly one root element).
/// Throws infogen::Error(Stage::Dataset, "malformed_svg") on bad input.
Node parse(std::string_view source);

std::string escape(std::string_view raw, bool attribute);
std::string serialize(const Node& node);

/// Depth-first visit of every element.
template <typename Fn>
void for_each_element(const Node& node, Fn&& fn) {
  if (!node.is_element()) return;
  fn(node);
  for (const auto& c : node.children) for_each_element(c, fn);
}

template <typename Fn>
void for_each_element(Node& node, Fn&& fn) {
  if (!node.is_element()) return;
  fn(node);
  for (auto& c : node.children) for_each_element(c, fn);
}

/// Geometric extent of a basic shape element (rect, image, circle, ellipse,
/// line, polygon, polyline, path) in its own coordinates.
/// Transforms are ignored; path curves contribute their control points.
std::optional<BBox2d> element_bbox(const Node& element);

std::optional<double> parse_number(std::string_view s);

/// Extent of an SVG fragment: the root viewBox when present, otherwise the
/// union of all measurable element extents.
std::optional<BBox2d> fragment_extent(const Node& root);

}  // namespace infogen::xml
