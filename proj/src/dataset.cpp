#include "infogen/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "infogen/svg_xml.hpp"

namespace infogen {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
const T* find_by(const std::vector<T>& items, std::string_view id, std::string T::*member) {
  for (const auto& item : items)
    if (item.*member == id) return &item;
  return nullptr;
}

std::string summarize(const std::vector<Diagnostic>& diags) {
  if (diags.empty()) return "dataset invalid";
  std::string msg = fmt::format("dataset invalid ({} violation{}): ", diags.size(), diags.size() == 1 ? "" : "s");
  msg += diags.front().pointer + ": " + diags.front().message;
  return msg;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Stage::Dataset, "io", fmt::format("cannot read '{}'", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Stage::Dataset, "io", fmt::format("cannot write '{}'", p.string()));
  out << data;
  if (!out) throw Error(Stage::Dataset, "io", fmt::format("write failed for '{}'", p.string()));
}

// Accumulates every violation while walking a manifest document.
class Checker {
 public:
  explicit Checker(fs::path base) : base_(std::move(base)) {}

  void add(std::string pointer, std::string message) { diags_.push_back({std::move(pointer), std::move(message)}); }
  std::vector<Diagnostic>& diagnostics() { return diags_; }

  std::optional<std::string> string_at(const json& obj, const std::string& ptr, const char* key, bool required) {
    const std::string here = ptr + "/" + key;
    if (!obj.contains(key)) {
      if (required) add(here, "missing required field");
      return std::nullopt;
    }
    if (!obj[key].is_string()) {
      add(here, "expected a string");
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  const json* array_at(const json& obj, const std::string& ptr, const char* key, bool required) {
    const std::string here = ptr + "/" + key;
    if (!obj.contains(key)) {
      if (required) add(here, "missing required field");
      return nullptr;
    }
    if (!obj[key].is_array()) {
      add(here, "expected an array");
      return nullptr;
    }
    return &obj[key];
  }

  std::optional<int> cluster_id(const json& v, const std::string& ptr) {
    if (!v.is_number_integer()) {
      add(ptr, "cluster id must be an integer");
      return std::nullopt;
    }
    const int c = v.get<int>();
    if (c < 0 || c >= kClusterCount) {
      add(ptr, fmt::format("cluster id {} outside [0, {}]", c, kClusterCount - 1));
      return std::nullopt;
    }
    return c;
  }

  std::optional<int> cluster_key(const std::string& key, const std::string& ptr) {
    try {
      std::size_t used = 0;
      const int c = std::stoi(key, &used);
      if (used == key.size()) return cluster_id(json(c), ptr);
    } catch (const std::exception&) {
    }
    add(ptr, fmt::format("cluster key '{}' is not an integer", key));
    return std::nullopt;
  }

  std::optional<std::string> svg_file(const json& obj, const std::string& ptr) {
    const auto file = string_at(obj, ptr, "file", true);
    if (!file) return std::nullopt;
    const fs::path p = base_ / *file;
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) {
      add(ptr + "/file", fmt::format("referenced file '{}' not found", *file));
      return std::nullopt;
    }
    try {
      return read_file(p);
    } catch (const Error& e) {
      add(ptr + "/file", e.what());
      return std::nullopt;
    }
  }

  std::optional<ConnectionStyle> style(const json& v, const std::string& ptr) {
    if (!v.is_string()) {
      add(ptr, "connection style must be a string");
      return std::nullopt;
    }
    const auto s = parse_style(v.get<std::string>());
    if (!s)
      add(ptr, fmt::format("unknown connection style '{}' (expected flow_shape, regular, alternating, pivot, none)",
                           v.get<std::string>()));
    return s;
  }

 private:
  fs::path base_;
  std::vector<Diagnostic> diags_;
};

std::optional<Eigen::VectorXd> vector_from(const json& v) {
  if (!v.is_array()) return std::nullopt;
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) return std::nullopt;
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

std::optional<Eigen::MatrixXd> matrix_from(const json& v, Eigen::Index cols) {
  if (!v.is_array()) return std::nullopt;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    const auto row = vector_from(v[r]);
    if (!row || row->size() != cols) return std::nullopt;
    out.row(static_cast<Eigen::Index>(r)) = row->transpose();
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

void parse_layouts(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "layouts", true);
  if (!arr) return;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/layouts/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    VifLayout layout;
    const auto id = ck.string_at(rec, ptr, "id", true);
    if (id) {
      if (!seen.insert(*id).second) ck.add(ptr + "/id", fmt::format("duplicate layout id '{}'", *id));
      layout.id = *id;
    }
    const std::string who = id ? fmt::format("layout '{}'", *id) : "layout";
    if (const json* pts = ck.array_at(rec, ptr, "points", true)) {
      if (pts->size() < 2 || pts->size() > 12)
        ck.add(ptr + "/points", fmt::format("{} must have 2 to 12 points, has {}", who, pts->size()));
      for (std::size_t j = 0; j < pts->size(); ++j) {
        const json& p = (*pts)[j];
        const std::string pp = fmt::format("{}/points/{}", ptr, j);
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          ck.add(pp, "point must be an [x, y] number pair");
          continue;
        }
        const Point2d q(p[0].get<double>(), p[1].get<double>());
        if (!is_finite(q) || q.x() < 0 || q.x() > 1 || q.y() < 0 || q.y() > 1)
          ck.add(pp, fmt::format("{} point ({}, {}) outside [0,1]^2", who, q.x(), q.y()));
        layout.points.push_back(q);
      }
    }
    if (rec.contains("cluster_id")) layout.cluster_id = ck.cluster_id(rec["cluster_id"], ptr + "/cluster_id");
    layout.source = ck.string_at(rec, ptr, "source", false).value_or("");
    m.layouts.push_back(std::move(layout));
  }
}

void parse_templates(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "vg_templates", true);
  if (!arr) return;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/vg_templates/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    const auto id = ck.string_at(rec, ptr, "id", true);
    if (id && !seen.insert(*id).second) ck.add(ptr + "/id", fmt::format("duplicate VG template id '{}'", *id));
    const auto source = ck.string_at(rec, ptr, "source", false).value_or("");
    const auto svg = ck.svg_file(rec, ptr);
    if (!id || !svg) continue;
    try {
      m.vg_templates.push_back(validate_vg_template(*svg, *id, source));
    } catch (const Error& e) {
      ck.add(ptr + "/file", fmt::format("VG template '{}': {}", *id, e.what()));
    }
  }
}

void parse_connections(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "connection_shapes", true);
  if (!arr) return;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/connection_shapes/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    const auto id = ck.string_at(rec, ptr, "id", true);
    if (id && !seen.insert(*id).second) ck.add(ptr + "/id", fmt::format("duplicate connection shape id '{}'", *id));
    std::vector<ConnectionStyle> styles;
    if (const json* st = ck.array_at(rec, ptr, "styles", false))
      for (std::size_t j = 0; j < st->size(); ++j)
        if (auto s = ck.style((*st)[j], fmt::format("{}/styles/{}", ptr, j))) styles.push_back(*s);
    const auto svg = ck.svg_file(rec, ptr);
    if (!id || !svg) continue;
    try {
      m.connection_shapes.push_back(parse_connection_shape(*svg, *id, styles));
    } catch (const Error& e) {
      ck.add(ptr + "/file", fmt::format("connection shape '{}': {}", *id, e.what()));
    }
  }
}

void parse_pivots(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "pivot_graphics", false);
  if (!arr) return;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/pivot_graphics/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    const auto id = ck.string_at(rec, ptr, "id", true);
    if (id && !seen.insert(*id).second) ck.add(ptr + "/id", fmt::format("duplicate pivot graphic id '{}'", *id));
    const auto svg = ck.svg_file(rec, ptr);
    if (!id || !svg) continue;
    try {
      const auto root = xml::parse(*svg);
      if (!xml::fragment_extent(root)) ck.add(ptr + "/file", fmt::format("pivot graphic '{}' has no extent", *id));
      m.pivot_graphics.push_back({*id, *svg});
    } catch (const Error& e) {
      ck.add(ptr + "/file", fmt::format("pivot graphic '{}': {}", *id, e.what()));
    }
  }
}

void parse_palettes(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "palettes", true);
  if (!arr) return;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/palettes/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    Palette p;
    if (auto name = ck.string_at(rec, ptr, "name", true)) {
      if (!seen.insert(*name).second) ck.add(ptr + "/name", fmt::format("duplicate palette '{}'", *name));
      p.name = *name;
    }
    if (const json* colors = ck.array_at(rec, ptr, "colors", true)) {
      if (colors->size() > 4) ck.add(ptr + "/colors", "a palette maps at most 4 theme colors");
      for (std::size_t j = 0; j < colors->size(); ++j) {
        if (!(*colors)[j].is_string()) ck.add(fmt::format("{}/colors/{}", ptr, j), "expected a color string");
        else p.colors.push_back((*colors)[j].get<std::string>());
      }
    }
    p.background = ck.string_at(rec, ptr, "background", false).value_or("#ffffff");
    m.palettes.push_back(std::move(p));
  }
}

void parse_usages(const json& doc, Checker& ck, DatasetManifest& m) {
  const json* arr = ck.array_at(doc, "", "usages", false);
  if (!arr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string ptr = fmt::format("/usages/{}", i);
    const json& rec = (*arr)[i];
    if (!rec.is_object()) {
      ck.add(ptr, "expected an object");
      continue;
    }
    Usage u;
    u.infographic = ck.string_at(rec, ptr, "infographic", true).value_or("");
    u.layout_id = ck.string_at(rec, ptr, "layout_id", true).value_or("");
    u.vg_id = ck.string_at(rec, ptr, "vg_id", true).value_or("");
    if (!u.layout_id.empty() && !m.find_layout(u.layout_id))
      ck.add(ptr + "/layout_id", fmt::format("unknown layout id '{}'", u.layout_id));
    if (!u.vg_id.empty() && !m.find_vg(u.vg_id)) ck.add(ptr + "/vg_id", fmt::format("unknown vg id '{}'", u.vg_id));
    if (rec.contains("connection_style")) u.connection_style = ck.style(rec["connection_style"], ptr + "/connection_style");
    m.usages.push_back(std::move(u));
  }
}

void parse_vg_vif(const json& doc, Checker& ck, DatasetManifest& m) {
  if (!doc.contains("vg_vif_index")) return;
  const json& idx = doc["vg_vif_index"];
  const std::string ptr = "/vg_vif_index";
  if (!idx.is_object() || !idx.contains("postings") || !idx["postings"].is_object()) {
    ck.add(ptr, "expected an object with a 'postings' map");
    return;
  }
  std::vector<std::pair<std::string, int>> assoc;
  bool ok = true;
  for (const auto& [vg, terms] : idx["postings"].items()) {
    const std::string vp = ptr + "/postings/" + vg;
    if (!m.find_vg(vg)) {
      ck.add(vp, fmt::format("index references unknown vg id '{}'", vg));
      ok = false;
    }
    if (!terms.is_object() || terms.empty()) {
      ck.add(vp, "postings must be a non-empty map of cluster id to term count");
      ok = false;
      continue;
    }
    for (const auto& [key, count] : terms.items()) {
      const auto c = ck.cluster_key(key, vp + "/" + key);
      if (!count.is_number_integer() || count.get<int>() < 1) {
        ck.add(vp + "/" + key, "term count must be a positive integer");
        ok = false;
        continue;
      }
      if (!c) {
        ok = false;
        continue;
      }
      for (int r = 0; r < count.get<int>(); ++r) assoc.emplace_back(vg, *c);
    }
  }
  if (!ok || assoc.empty()) {
    if (ok) ck.add(ptr + "/postings", "index has no postings");
    return;
  }
  m.vg_vif_index = build_vg_vif_index(assoc);
  if (idx.contains("n_docs") && idx["n_docs"] != m.vg_vif_index->n_docs)
    ck.add(ptr + "/n_docs", "n_docs inconsistent with postings");
  if (idx.contains("df")) {
    json expect = json::object();
    for (const auto& [c, d] : m.vg_vif_index->df) expect[std::to_string(c)] = d;
    if (idx["df"] != expect) ck.add(ptr + "/df", "document frequencies inconsistent with postings");
  }
}

void parse_c_vif(const json& doc, Checker& ck, DatasetManifest& m) {
  if (!doc.contains("c_vif_index")) return;
  const json& idx = doc["c_vif_index"];
  const std::string ptr = "/c_vif_index";
  if (!idx.is_object() || !idx.contains("counts") || !idx["counts"].is_object()) {
    ck.add(ptr, "expected an object with a 'counts' map");
    return;
  }
  CVifIndex out;
  for (const auto& [key, styles] : idx["counts"].items()) {
    const std::string cp = ptr + "/counts/" + key;
    const auto c = ck.cluster_key(key, cp);
    if (!styles.is_object()) {
      ck.add(cp, "expected a map of style to count");
      continue;
    }
    int total = 0;
    std::map<ConnectionStyle, int> row;
    for (const auto& [name, count] : styles.items()) {
      const auto s = ck.style(json(name), cp + "/" + name);
      if (!count.is_number_integer() || count.get<int>() < 0) {
        ck.add(cp + "/" + name, "count must be a non-negative integer");
        continue;
      }
      if (s) row[*s] = count.get<int>();
      total += count.get<int>();
    }
    if (total == 0) ck.add(cp, "cluster has no nonzero style count");
    if (c) out.counts[*c] = std::move(row);
  }
  m.c_vif_index = std::move(out);
}

void parse_cluster_model(const json& doc, Checker& ck, DatasetManifest& m) {
  if (!doc.contains("cluster_model")) return;
  const json& cm = doc["cluster_model"];
  const std::string ptr = "/cluster_model";
  if (!cm.is_object()) {
    ck.add(ptr, "expected an object");
    return;
  }
  ClusterModel model;
  auto integer = [&](const char* key, int& dst) {
    if (!cm.contains(key) || !cm[key].is_number_integer()) {
      ck.add(ptr + "/" + key, "missing or non-integer field");
      return false;
    }
    dst = cm[key].get<int>();
    return true;
  };
  if (!(integer("k", model.k) & integer("raster_size", model.raster_size) &
        integer("pca_components", model.pca_components)))
    return;
  if (model.k != kClusterCount) ck.add(ptr + "/k", fmt::format("cluster model must have k = {}", kClusterCount));
  if (model.raster_size < 1 || model.pca_components < 1) {
    ck.add(ptr, "raster_size and pca_components must be positive");
    return;
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(model.raster_size) * model.raster_size;
  const auto mean = cm.contains("mean") ? vector_from(cm["mean"]) : std::nullopt;
  const auto basis = cm.contains("basis") ? matrix_from(cm["basis"], dim) : std::nullopt;
  const auto centers = cm.contains("centers") ? matrix_from(cm["centers"], model.pca_components) : std::nullopt;
  if (!mean || mean->size() != dim) ck.add(ptr + "/mean", "mean must hold raster_size^2 numbers");
  if (!basis || basis->rows() != model.pca_components)
    ck.add(ptr + "/basis", "basis must be pca_components rows of raster_size^2 numbers");
  if (!centers || centers->rows() != model.k) ck.add(ptr + "/centers", "centers must be k rows of pca_components numbers");
  if (!mean || !basis || !centers) return;
  model.mean = *mean;
  model.basis = *basis;
  model.centers = *centers;

  if (const json* ids = ck.array_at(cm, ptr, "medoid_ids", true)) {
    for (std::size_t i = 0; i < ids->size(); ++i) {
      const auto& v = (*ids)[i];
      if (!v.is_string() || !m.find_layout(v.get<std::string>()))
        ck.add(fmt::format("{}/medoid_ids/{}", ptr, i), "medoid must name a dataset layout");
      else model.medoid_ids.push_back(v.get<std::string>());
    }
  }
  if (cm.contains("assignments") && cm["assignments"].is_object()) {
    for (const auto& [id, c] : cm["assignments"].items()) {
      const std::string ap = ptr + "/assignments/" + id;
      if (!m.find_layout(id)) ck.add(ap, fmt::format("assignment for unknown layout '{}'", id));
      if (auto cid = ck.cluster_id(c, ap)) model.assignments[id] = *cid;
    }
  } else {
    ck.add(ptr + "/assignments", "missing assignments map");
  }
  m.cluster_model = std::move(model);
}

}  // namespace

DatasetError::DatasetError(std::vector<Diagnostic> diagnostics)
    : Error(Stage::Dataset, "invalid_dataset", summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

const VifLayout* DatasetManifest::find_layout(std::string_view id) const { return find_by(layouts, id, &VifLayout::id); }
const VgTemplate* DatasetManifest::find_vg(std::string_view id) const { return find_by(vg_templates, id, &VgTemplate::id); }
const ConnectionShape* DatasetManifest::find_connection(std::string_view id) const {
  return find_by(connection_shapes, id, &ConnectionShape::id);
}
const PivotAsset* DatasetManifest::find_pivot(std::string_view id) const {
  return find_by(pivot_graphics, id, &PivotAsset::id);
}
const Palette* DatasetManifest::find_palette(std::string_view name) const { return find_by(palettes, name, &Palette::name); }

VgTemplate validate_vg_template(const std::string& svg, const std::string& id, const std::string& source) {
  const auto root = xml::parse(svg);
  VgTemplate t;
  t.id = id;
  t.svg = svg;
  t.source = source;
  std::optional<Point2d> anchor;
  std::vector<std::string> problems;

  xml::for_each_element(root, [&](const xml::Node& e) {
    if (const auto slot = e.attr("data-slot")) {
      const auto kind = parse_slot_kind(*slot);
      if (!kind) {
        problems.push_back(fmt::format("unknown slot kind '{}'", *slot));
      } else if (t.placeholders.contains(*kind)) {
        problems.push_back(fmt::format("duplicate slot '{}'", *slot));
      } else if (e.attr("transform")) {
        problems.push_back(fmt::format("slot '{}' placeholder must not carry a transform", *slot));
      } else if (const auto box = xml::element_bbox(e)) {
        t.placeholders[*kind] = *box;
      } else {
        problems.push_back(fmt::format("slot '{}' placeholder has no measurable extent", *slot));
      }
    }
    if (e.attr("data-anchor") && !anchor) {
      if (const auto box = xml::element_bbox(e)) anchor = box->center();
      else problems.push_back("data-anchor element has no measurable extent");
    }
    if (const auto token = e.attr("data-theme-color")) {
      const auto v = xml::parse_number(*token);
      if (!v || *v < 1 || *v > 4 || std::floor(*v) != *v)
        problems.push_back(fmt::format("data-theme-color '{}' must be 1..4", *token));
      else t.theme_colors = std::max(t.theme_colors, static_cast<int>(*v));
    }
  });

  const auto extent = xml::fragment_extent(root);
  if (!extent || !(extent->max_extent() > 0)) problems.push_back("template has no measurable extent");
  else t.extent = *extent;
  if (t.placeholders.empty() && problems.empty()) problems.push_back("no slots (no data-slot placeholders)");
  for (const auto& [kind, box] : t.placeholders) {
    if (!extent) break;
    constexpr double tol = 1e-9;
    if (box.x < extent->x - tol || box.y < extent->y - tol || box.x + box.w > extent->x + extent->w + tol ||
        box.y + box.h > extent->y + extent->h + tol)
      problems.push_back(fmt::format("slot '{}' placeholder lies outside the template extent", slot_name(kind)));
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    const bool dup = msg.starts_with("duplicate slot");
    const bool none = msg.starts_with("no slots");
    throw Error(Stage::Dataset, dup ? "duplicate_slot" : none ? "no_slots" : "bad_template", msg);
  }
  t.anchor = anchor.value_or(t.extent.center());
  return t;
}

ConnectionShape parse_connection_shape(const std::string& svg, const std::string& id,
                                       std::vector<ConnectionStyle> styles) {
  const auto root = xml::parse(svg);
  const auto extent = xml::fragment_extent(root);
  if (!extent || !(extent->w > 0))
    throw Error(Stage::Dataset, "bad_shape", "connection shape needs a positive-width extent");
  return {id, svg, *extent, std::move(styles)};
}

DatasetManifest manifest_from_json(const json& doc, const fs::path& base_dir) {
  Checker ck(base_dir);
  DatasetManifest m;
  if (!doc.is_object()) throw DatasetError(std::vector<Diagnostic>{{"", "manifest root must be a JSON object"}});

  const auto version = ck.string_at(doc, "", "version", true);
  static const std::regex semver(R"(\d+\.\d+\.\d+([-+][0-9A-Za-z.\-+]*)?)");
  if (version && !std::regex_match(*version, semver))
    ck.add("/version", fmt::format("version '{}' is not a semver string", *version));
  m.version = version.value_or("");

  parse_layouts(doc, ck, m);
  parse_templates(doc, ck, m);
  parse_connections(doc, ck, m);
  parse_pivots(doc, ck, m);
  parse_palettes(doc, ck, m);
  parse_usages(doc, ck, m);
  parse_vg_vif(doc, ck, m);
  parse_c_vif(doc, ck, m);
  parse_cluster_model(doc, ck, m);

  if (!ck.diagnostics().empty()) throw DatasetError(std::move(ck.diagnostics()));
  return m;
}

namespace {

fs::path manifest_path(const fs::path& path) {
  std::error_code ec;
  return fs::is_directory(path, ec) ? path / kManifestFile : path;
}

}  // namespace

DatasetManifest load_manifest(const fs::path& path) {
  const fs::path file = manifest_path(path);
  std::error_code ec;
  if (!fs::is_regular_file(file, ec))
    throw Error(Stage::Dataset, "io", fmt::format("manifest '{}' not found", file.string()));
  const std::string text = read_file(file);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::vector<Diagnostic>{{file.string(), fmt::format("invalid JSON: {}", e.what())}});
  }
  return manifest_from_json(doc, file.parent_path());
}

std::vector<Diagnostic> validate_dataset(const fs::path& path) {
  try {
    load_manifest(path);
  } catch (const DatasetError& e) {
    return e.diagnostics();
  } catch (const Error& e) {
    return {{manifest_path(path).string(), e.what()}};
  }
  return {};
}

json manifest_to_json(const DatasetManifest& m) {
  json doc = json::object();
  doc["version"] = m.version;

  json layouts = json::array();
  for (const auto& l : m.layouts) {
    json rec = {{"id", l.id}, {"source", l.source}};
    json pts = json::array();
    for (const auto& p : l.points) pts.push_back({p.x(), p.y()});
    rec["points"] = std::move(pts);
    if (l.cluster_id) rec["cluster_id"] = *l.cluster_id;
    layouts.push_back(std::move(rec));
  }
  doc["layouts"] = std::move(layouts);

  json vgs = json::array();
  for (const auto& t : m.vg_templates) vgs.push_back({{"id", t.id}, {"file", "vgs/" + t.id + ".svg"}, {"source", t.source}});
  doc["vg_templates"] = std::move(vgs);

  json shapes = json::array();
  for (const auto& s : m.connection_shapes) {
    json styles = json::array();
    for (auto st : s.styles) styles.push_back(std::string(style_name(st)));
    shapes.push_back({{"id", s.id}, {"file", "connections/" + s.id + ".svg"}, {"styles", std::move(styles)}});
  }
  doc["connection_shapes"] = std::move(shapes);

  json pivots = json::array();
  for (const auto& p : m.pivot_graphics) pivots.push_back({{"id", p.id}, {"file", "pivots/" + p.id + ".svg"}});
  doc["pivot_graphics"] = std::move(pivots);

  json palettes = json::array();
  for (const auto& p : m.palettes)
    palettes.push_back({{"name", p.name}, {"colors", p.colors}, {"background", p.background}});
  doc["palettes"] = std::move(palettes);

  json usages = json::array();
  for (const auto& u : m.usages) {
    json rec = {{"infographic", u.infographic}, {"layout_id", u.layout_id}, {"vg_id", u.vg_id}};
    if (u.connection_style) rec["connection_style"] = std::string(style_name(*u.connection_style));
    usages.push_back(std::move(rec));
  }
  doc["usages"] = std::move(usages);

  if (m.vg_vif_index) {
    json postings = json::object(), df = json::object();
    for (const auto& [vg, terms] : m.vg_vif_index->postings) {
      json t = json::object();
      for (const auto& [c, n] : terms) t[std::to_string(c)] = n;
      postings[vg] = std::move(t);
    }
    for (const auto& [c, d] : m.vg_vif_index->df) df[std::to_string(c)] = d;
    doc["vg_vif_index"] = {{"postings", std::move(postings)}, {"df", std::move(df)}, {"n_docs", m.vg_vif_index->n_docs}};
  }
  if (m.c_vif_index) {
    json counts = json::object();
    for (const auto& [c, row] : m.c_vif_index->counts) {
      json r = json::object();
      for (const auto& [s, n] : row) r[std::string(style_name(s))] = n;
      counts[std::to_string(c)] = std::move(r);
    }
    doc["c_vif_index"] = {{"counts", std::move(counts)}};
  }
  if (m.cluster_model) {
    const auto& cm = *m.cluster_model;
    json assignments = json::object();
    for (const auto& [id, c] : cm.assignments) assignments[id] = c;
    doc["cluster_model"] = {{"k", cm.k},
                            {"raster_size", cm.raster_size},
                            {"pca_components", cm.pca_components},
                            {"mean", vector_json(cm.mean)},
                            {"basis", matrix_json(cm.basis)},
                            {"centers", matrix_json(cm.centers)},
                            {"medoid_ids", cm.medoid_ids},
                            {"assignments", std::move(assignments)}};
  }
  return doc;
}

void save_manifest(const DatasetManifest& m, const fs::path& dir) {
  std::error_code ec;
  for (const char* sub : {"vgs", "connections", "pivots"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) throw Error(Stage::Dataset, "io", fmt::format("cannot create '{}': {}", (dir / sub).string(), ec.message()));
  }
  for (const auto& t : m.vg_templates) write_file(dir / "vgs" / (t.id + ".svg"), t.svg);
  for (const auto& s : m.connection_shapes) write_file(dir / "connections" / (s.id + ".svg"), s.svg);
  for (const auto& p : m.pivot_graphics) write_file(dir / "pivots" / (p.id + ".svg"), p.svg);
  write_file(dir / kManifestFile, manifest_to_json(m).dump(2) + "\n");
}

void build_indices(DatasetManifest& m, std::uint64_t seed) {
  // Curated cluster ids (every layout labelled, no fitted model) are kept as is.
  const bool curated = !m.cluster_model && !m.layouts.empty() &&
                       std::all_of(m.layouts.begin(), m.layouts.end(), [](const VifLayout& l) { return l.cluster_id.has_value(); });
  if (!curated) {
    m.cluster_model = cluster_vifs(m.layouts, kClusterCount, seed);
    for (auto& l : m.layouts) l.cluster_id = m.cluster_model->assignments.at(l.id);
  }

  // One term per (VG design, source infographic) pair.
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, int>> assoc;
  CVifIndex cvif;
  for (const auto& u : m.usages) {
    const VifLayout* layout = m.find_layout(u.layout_id);
    if (!layout) throw Error(Stage::Dataset, "dangling_reference", fmt::format("unknown layout id '{}'", u.layout_id));
    const int cluster = *layout->cluster_id;
    if (seen.emplace(u.vg_id, u.infographic).second) assoc.emplace_back(u.vg_id, cluster);
    if (u.connection_style) ++cvif.counts[cluster][*u.connection_style];
  }
  if (!assoc.empty()) m.vg_vif_index = build_vg_vif_index(assoc);
  else m.vg_vif_index.reset();
  if (!cvif.counts.empty()) m.c_vif_index = std::move(cvif);
  else m.c_vif_index.reset();
}

int layout_cluster(const DatasetManifest& m, const VifLayout& layout) {
  if (layout.cluster_id) return *layout.cluster_id;
  if (m.cluster_model) {
    if (const auto it = m.cluster_model->assignments.find(layout.id); it != m.cluster_model->assignments.end())
      return it->second;
    return assign_cluster(layout, *m.cluster_model);
  }
  throw Error(Stage::Vg, "no_cluster",
              fmt::format("layout '{}' has no cluster id and the dataset has no cluster model (run build-index)",
                          layout.id));
}

}  // namespace infogen
