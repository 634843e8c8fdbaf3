#include <doctest.h>

#include <random>
#include <regex>

#include "infogen/composer.hpp"
#include "infogen/dataset.hpp"
#include "infogen/error.hpp"
#include "infogen/svg_xml.hpp"
#include "oracles.hpp"

using namespace infogen;

namespace {

const char* kCardSvg =
    "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 100 60\">"
    "<rect x=\"0\" y=\"0\" width=\"100\" height=\"60\" data-theme-color=\"1\"/>"
    "<rect x=\"5\" y=\"5\" width=\"90\" height=\"20\" data-slot=\"title\"/>"
    "<rect x=\"5\" y=\"30\" width=\"90\" height=\"25\" data-slot=\"text\"/>"
    "</svg>";

VgTemplate card() { return validate_vg_template(kCardSvg, "card", "test"); }

VifLayout make(std::string id, std::vector<Point2d> p) { return {std::move(id), std::move(p), {}, ""}; }

ContentSpec items(std::size_t n) {
  ContentSpec s;
  s.heading = "Heading";
  for (std::size_t i = 0; i < n; ++i) s.items.push_back({"T" + std::to_string(i), "body text " + std::to_string(i), {}, {}});
  return s;
}

Placement at(double x, double y) {
  Placement p;
  p.position = Point2d(x, y);
  return p;
}

}  // namespace

TEST_SUITE("composer") {
  TEST_CASE("no pivot means no rotation") {
    const auto p = place_vgs(make("l", {{0.1, 0.2}, {0.5, 0.8}, {0.9, 0.3}}), card(), items(3), {800, 600}, std::nullopt);
    REQUIRE(p.size() == 3);
    for (const auto& q : p) CHECK(q.rotation == 0.0);
  }

  TEST_CASE("VG to the right of the pivot has rotation 0") {
    const PivotGraphic pivot{BBox2d{40, 40, 20, 20}, std::nullopt};
    const auto p = place_vgs(make("l", {{0.9, 0.5}, {0.1, 0.5}}), card(), items(2), {100, 100}, pivot);
    CHECK(p[0].rotation == doctest::Approx(0.0));
    CHECK(p[0].position.isApprox(Point2d(90, 50)));
  }

  TEST_CASE("four points around the pivot rotate in 90 degree steps") {
    const PivotGraphic pivot{BBox2d{40, 40, 20, 20}, std::nullopt};
    const auto p = place_vgs(make("l", {{0.9, 0.5}, {0.5, 0.9}, {0.1, 0.5}, {0.5, 0.1}}), card(), items(4), {100, 100},
                             pivot);
    for (std::size_t i = 1; i < 4; ++i)
      CHECK(std::abs(wrap_degrees(p[i].rotation - p[i - 1].rotation - 90.0)) < 1e-9);
  }

  TEST_CASE("scale follows the closest pair") {
    const auto p = place_vgs(make("l", {{0.1, 0.5}, {0.3, 0.5}, {0.9, 0.5}}), card(), items(3), {100, 100}, std::nullopt);
    // d_min = 20, larger template extent 100 -> scale 0.8 * 20 / 100
    CHECK(p[0].scale == doctest::Approx(0.16));
    CHECK(vg_extent(card(), p[0].scale) == doctest::Approx(16));
    CHECK_THROWS_AS(place_vgs(make("l", {{0.1, 0.5}, {0.3, 0.5}}), card(), items(3), {100, 100}, std::nullopt), Error);
  }

  TEST_CASE("Regular connection fixture") {
    const std::vector<Point2d> pts{{10, 50}, {90, 50}};
    const auto c = generate_connections(ConnectionStyle::Regular, {at(10, 50), at(90, 50)}, pts, std::nullopt, {100, 100},
                                        "bar", 20);
    REQUIRE(c.size() == 1);
    CHECK(c[0].position.isApprox(Point2d(50, 50)));
    CHECK(c[0].rotation == 0.0);
    CHECK(c[0].length == doctest::Approx(36));
  }

  TEST_CASE("Alternating uses even flow lines") {
    std::vector<Point2d> pts;
    std::vector<Placement> pl;
    for (int i = 0; i < 5; ++i) {
      pts.emplace_back(10 + 20 * i, 50 + (i % 2) * 10);
      pl.push_back(at(pts.back().x(), pts.back().y()));
    }
    const auto c = generate_connections(ConnectionStyle::Alternating, pl, pts, std::nullopt, {100, 100}, "bar", 1);
    REQUIRE(c.size() == 2);
    CHECK(c[0].position.isApprox((pts[0] + pts[1]) / 2));
    CHECK(c[1].position.isApprox((pts[2] + pts[3]) / 2));
  }

  TEST_CASE("Pivot connection fixture") {
    const PivotGraphic pivot{BBox2d{40, 40, 20, 20}, std::nullopt};
    const auto c = generate_connections(ConnectionStyle::Pivot, {at(50, 10)}, {Point2d(50, 10)}, pivot, {100, 100}, "bar", 10);
    REQUIRE(c.size() == 1);
    CHECK(c[0].position.isApprox(Point2d(50, 30)));
    CHECK(c[0].rotation == doctest::Approx(-90));
    CHECK(c[0].length == doctest::Approx(0.6 * (40 - (20 + 10) / 2.0)));
    CHECK_THROWS_WITH(generate_connections(ConnectionStyle::Pivot, {at(50, 10)}, {Point2d(50, 10)}, std::nullopt,
                                           {100, 100}, "bar", 10),
                      "pivot connection style requires a pivot graphic");
  }

  TEST_CASE("FlowShape insets toward the center") {
    const std::vector<Point2d> pts{{10, 10}, {90, 10}};
    const auto c = generate_connections(ConnectionStyle::FlowShape, {at(10, 10), at(90, 10)}, pts, std::nullopt,
                                        {100, 100}, "s", 0);
    REQUIRE(c.size() == 1);
    CHECK(c[0].position.isApprox(Point2d(50, 30)));
    CHECK(generate_connections(ConnectionStyle::None, {}, pts, std::nullopt, {100, 100}, "s", 0).empty());
  }

  TEST_CASE("Hi fits at 20 in a 100x20 box") {
    CHECK(fit_font_size("Hi", 100, 20) == 20);
    CHECK(fit_font_size("Hi", 100, 20) == oracle::fit_font("Hi", 100, 20));
  }

  TEST_CASE("font fitting matches a linear-scan oracle") {
    std::mt19937_64 rng(2);
    const std::vector<std::string> words{"a", "to", "the", "flow", "graphic", "information", "x"};
    std::uniform_real_distribution<double> dim(8, 300);
    for (int trial = 0; trial < 300; ++trial) {
      std::string text;
      const int n = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) text += (i ? " " : "") + words[rng() % words.size()];
      const double w = dim(rng), h = dim(rng);
      CHECK_MESSAGE(fit_font_size(text, w, h) == oracle::fit_font(text, w, h), text, " ", w, "x", h);
    }
  }

  TEST_CASE("wrapping") {
    const auto lines = wrap_text("one two three", 10, 50);  // 8 chars per line
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "one two");
    CHECK(lines[1] == "three");
  }

  TEST_CASE("embedded content") {
    ContentItem item{"Title", "", {}, {}};
    const auto none = embed_content(card(), item, 0);
    CHECK(none.find("slot-text") == std::string::npos);
    CHECK(none.find("rotate") == std::string::npos);
    const auto turned = embed_content(card(), item, 30);
    CHECK(turned.find("rotate(-30.0000 50.0000 15.0000)") != std::string::npos);
    ContentItem bad{{}, {}, "01", {}};
    CHECK_THROWS_AS(embed_content(card(), bad, 0), Error);
  }

  TEST_CASE("style ranking with add-one smoothing") {
    CVifIndex idx;
    idx.counts[2] = {{ConnectionStyle::Regular, 8}, {ConnectionStyle::Pivot, 2}};
    const auto r = rank_connection_styles(idx, 2);
    CHECK_FALSE(r.fallback);
    REQUIRE(r.styles.size() == 5);
    CHECK(r.styles[0].first == ConnectionStyle::Regular);
    CHECK(r.styles[0].second == doctest::Approx(9.0 / 15));
    CHECK(r.styles[1].first == ConnectionStyle::Pivot);
    CHECK(r.styles[1].second == doctest::Approx(3.0 / 15));
    for (std::size_t i = 2; i < 5; ++i) CHECK(r.styles[i].second == doctest::Approx(1.0 / 15));
    CHECK(r.styles[2].first == ConnectionStyle::FlowShape);

    const auto unseen = rank_connection_styles(idx, 5);
    CHECK(unseen.fallback);
    for (const auto& [_, p] : unseen.styles) CHECK(p == doctest::Approx(0.2));

    idx.counts[3] = {{ConnectionStyle::FlowShape, 1}, {ConnectionStyle::Regular, 1}, {ConnectionStyle::Alternating, 1},
                     {ConnectionStyle::Pivot, 1}, {ConnectionStyle::None, 1}};
    const auto even = rank_connection_styles(idx, 3);
    for (std::size_t i = 0; i < 5; ++i) CHECK(even.styles[i].first == kAllStyles[i]);
  }

  TEST_CASE("composite score normalizes per stage") {
    CHECK(composite_score(0.4, 2.0, 0.3, {0.4, 2.0}) == doctest::Approx(0.3));
    CHECK(composite_score(0.2, 1.0, 0.5, {0.4, 2.0}) == doctest::Approx(0.125));
    CHECK(composite_score(0.2, 0.0, 0.5, {0.4, 0.0}) == doctest::Approx(0.25));
  }

  TEST_CASE("rendered design") {
    const auto layout = make("l", {{0.2, 0.3}, {0.5, 0.7}, {0.8, 0.3}});
    const PivotGraphic pivot{BBox2d{350, 250, 100, 100},
                             std::string("<svg viewBox=\"0 0 10 10\"><circle cx=\"5\" cy=\"5\" r=\"5\"/></svg>")};
    const LayoutScore score = score_layout(layout, {800, 600}, pivot, 0.5);
    const StageChoice choice{{layout, score}, {card(), 0.5}, ConnectionStyle::Regular, 0.4};
    const Palette palette{"p", {"#123456"}, "#fafafa"};
    const ConnectionShape shape{"bar", "<svg viewBox=\"0 0 100 20\"><rect x=\"0\" y=\"8\" width=\"100\" height=\"4\"/></svg>",
                                BBox2d{0, 0, 100, 20}, {}};
    const auto d = compose_design(items(3), {800, 600}, choice, pivot, palette, shape, {score.e_l, 0.5});
    CHECK(d.placements.size() == 3);
    CHECK(d.connections.size() == 2);
    CHECK(d.scores.composite == doctest::Approx(0.4));

    const auto svg = render_svg(d);
    CHECK(svg == render_svg(d));
    const auto root = xml::parse(svg);
    CHECK(root.name == "svg");
    const auto pivot_at = svg.find("class=\"pivot\"");
    const auto vg_at = svg.find("class=\"vg\"");
    REQUIRE(pivot_at != std::string::npos);
    CHECK(pivot_at < svg.find("class=\"connections\""));
    CHECK(svg.find("class=\"connections\"") < vg_at);
    CHECK(svg.find("fill=\"#123456\"") != std::string::npos);
    CHECK(svg.find("data-slot") == std::string::npos);
    CHECK(svg.find("viewBox=\"0 0 800.0000 600.0000\"") != std::string::npos);
    // Upright content: each slot group undoes its VG's rotation.
    const std::regex vg_rot(R"(class="vg" id="vg-\d+" transform="translate\([^)]*\) rotate\(([-0-9.]+)\))");
    const std::regex slot_rot(R"(class="slot-title" transform="rotate\(([-0-9.]+) )");
    auto vg_it = std::sregex_iterator(svg.begin(), svg.end(), vg_rot);
    auto slot_it = std::sregex_iterator(svg.begin(), svg.end(), slot_rot);
    int checked = 0;
    for (; vg_it != std::sregex_iterator() && slot_it != std::sregex_iterator(); ++vg_it, ++slot_it, ++checked)
      CHECK(std::stod((*vg_it)[1]) + std::stod((*slot_it)[1]) == 0.0);
    CHECK(checked == 3);
  }

  TEST_CASE("minimal design renders background and groups only") {
    const auto layout = make("l", {{0.2, 0.3}, {0.8, 0.3}});
    const LayoutScore score = score_layout(layout, {800, 600}, std::nullopt, 0.5);
    const StageChoice choice{{layout, score}, {card(), 0.0}, ConnectionStyle::None, 0.2};
    auto content = items(2);
    content.heading.reset();
    const auto d = compose_design(content, {800, 600}, choice, std::nullopt, Palette{"none", {}, "#ffffff"},
                                  std::nullopt, {score.e_l, 0.0});
    const auto root = xml::parse(render_svg(d));
    std::vector<std::string> classes;
    for (const auto& c : root.children)
      if (c.kind == xml::Node::Kind::Element) classes.push_back(c.attr("class").value_or(""));
    CHECK(classes == std::vector<std::string>{"background", "vg", "vg"});
  }

  TEST_CASE("number formatting") {
    CHECK(fmt_num(-0.00001) == "0.0000");
    CHECK(fmt_num(1.23456) == "1.2346");
  }
}
