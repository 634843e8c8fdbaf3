#include "infogen/service.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <algorithm>

#include "infogen/svg_xml.hpp"

namespace infogen {
using nlohmann::json;

namespace {

// Malformed request bodies; mapped to 400 (or 413 for oversized sketches).
struct RequestError {
  int status;
  std::string code;
  std::string message;
};

[[noreturn]] void bad(std::string code, std::string message, int status = 400) {
  throw RequestError{status, std::move(code), std::move(message)};
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) bad("bad_request", fmt::format("'{}' must be a number", key));
  return obj[key].get<double>();
}

std::size_t count(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer() || obj[key].get<long long>() < 0)
    bad("bad_request", fmt::format("'{}' must be a non-negative integer", key));
  return obj[key].get<std::size_t>();
}

std::optional<std::string> text(const json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_string()) bad("bad_request", fmt::format("'{}' must be a string", key));
  return obj[key].get<std::string>();
}

Canvas parse_canvas(const json& req) {
  Canvas c;
  if (!req.contains("canvas")) return c;
  const json& v = req["canvas"];
  if (!v.is_object()) bad("bad_request", "'canvas' must be an object {width, height}");
  c.width = number(v, "width", c.width);
  c.height = number(v, "height", c.height);
  if (!(c.width > 0 && c.height > 0)) bad("bad_request", "canvas extents must be positive");
  return c;
}

std::optional<Polyline2d> parse_sketch(const json& req) {
  if (!req.contains("sketch") || req["sketch"].is_null()) return std::nullopt;
  const json& v = req["sketch"];
  if (!v.is_array()) bad("bad_request", "'sketch' must be an array of [x, y] pairs");
  if (v.size() > kMaxSketchPoints)
    bad("sketch_too_large", fmt::format("sketch has {} points (max {})", v.size(), kMaxSketchPoints), 413);
  Polyline2d out;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      bad("bad_request", "sketch points must be [x, y] number pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

SlotSet parse_slots(const json& v) {
  if (!v.is_array()) bad("bad_request", "'required_slots' must be an array of slot names");
  SlotSet s;
  for (const auto& name : v) {
    const auto kind = name.is_string() ? parse_slot_kind(name.get<std::string>()) : std::nullopt;
    if (!kind) bad("bad_request", fmt::format("unknown slot kind {}", name.dump()));
    s.insert(*kind);
  }
  return s;
}

json score_json(const LayoutScore& s) {
  return {{"e_o", s.e_o}, {"e_c", s.e_c}, {"u", s.u}, {"e_u_raw", s.e_u_raw}, {"alpha", s.alpha}, {"e_l", s.e_l}};
}

json design_json(const Recommendation& r, std::size_t rank) {
  const auto& d = r.design;
  json scores = score_json(d.scores.layout);
  scores["tfidf"] = d.scores.tfidf;
  scores["p_style"] = d.scores.p_style;
  scores["composite"] = d.scores.composite;
  json placements = json::array();
  for (const auto& p : d.placements)
    placements.push_back({{"position", {p.position.x(), p.position.y()}}, {"rotation", p.rotation}, {"scale", p.scale}});
  json out = {{"rank", rank},
              {"layout_id", d.layout.id},
              {"cluster_id", r.cluster_id},
              {"vg_id", d.vg.id},
              {"connection_style", std::string(style_name(d.connection_style))},
              {"connection_shape", d.connection_shape ? json(d.connection_shape->id) : json(nullptr)},
              {"connections", d.connections.size()},
              {"placements", std::move(placements)},
              {"scores", std::move(scores)},
              {"svg", render_svg(d)}};
  if (r.sketch_distance) out["sketch_distance"] = *r.sketch_distance;
  return out;
}

HttpResponse json_ok(const json& body) { return {200, "application/json", body.dump()}; }

}  // namespace

std::string UploadStore::put(std::string svg) {
  const std::string id = fnv1a_hex(svg);
  std::lock_guard lock(mu_);
  if (auto it = items_.find(id); it != items_.end()) {
    order_.splice(order_.begin(), order_, it->second.second);
    return id;
  }
  order_.push_front(id);
  items_.emplace(id, std::make_pair(std::move(svg), order_.begin()));
  while (items_.size() > capacity_) {
    items_.erase(order_.back());
    order_.pop_back();
  }
  return id;
}

std::optional<std::string> UploadStore::get(const std::string& id) {
  std::lock_guard lock(mu_);
  const auto it = items_.find(id);
  if (it == items_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second.second);
  return it->second.first;
}

std::size_t UploadStore::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

HttpResponse error_response(int status, std::string_view stage, std::string_view code, std::string_view message) {
  const json body = {{"stage", stage}, {"code", code}, {"message", message}};
  return {status, "application/json", body.dump()};
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (method == "GET") {
      if (path == "/v1/dataset/summary") return summary();
      for (std::string_view kind : {"vg", "connection", "pivot"}) {
        const std::string prefix = fmt::format("/v1/dataset/{}/", kind);
        if (path.starts_with(prefix) && path.ends_with(".svg"))
          return asset(kind, path.substr(prefix.size(), path.size() - prefix.size() - 4));
      }
      return error_response(404, "service", "not_found", fmt::format("no route GET {}", path));
    }
    if (method != "POST") return error_response(405, "service", "method_not_allowed", "method not allowed");

    if (path == "/v1/uploads/pivot") {
      try {
        xml::parse(body);
      } catch (const Error& e) {
        return error_response(400, stage_name(e.stage()), e.code(), e.what());
      }
      return json_ok({{"id", uploads_.put(std::string(body))}});
    }

    static const std::vector<std::string_view> routes{"/v1/recommend", "/v1/compose", "/v1/rank/layouts",
                                                      "/v1/rank/vgs", "/v1/rank/connections"};
    if (std::find(routes.begin(), routes.end(), path) == routes.end())
      return error_response(404, "service", "not_found", fmt::format("no route POST {}", path));

    json req;
    try {
      req = json::parse(body);
    } catch (const json::parse_error& e) {
      return error_response(400, "service", "bad_json", e.what());
    }
    if (!req.is_object()) return error_response(400, "service", "bad_request", "request body must be a JSON object");

    if (path == "/v1/recommend") return recommend(req);
    if (path == "/v1/compose") return compose(req);
    if (path == "/v1/rank/layouts") return rank_layouts(req);
    if (path == "/v1/rank/vgs") return rank_vgs(req);
    return rank_connections(req);
  } catch (const RequestError& e) {
    return error_response(e.status, "service", e.code, e.message);
  } catch (const Error& e) {
    return error_response(400, stage_name(e.stage()), e.code(), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "service", "bad_request", e.what());
  }
}

namespace {

struct ParsedRequest {
  RecommendInput input;
  RecommendOptions options;
};

}  // namespace

static ParsedRequest parse_recommend(const json& req, const DatasetManifest& m, UploadStore& uploads) {
  ParsedRequest pr;
  const auto markdown = text(req, "markdown");
  if (!markdown) bad("bad_request", "'markdown' is required");
  pr.input.content = parse_markdown(*markdown);
  pr.input.canvas = parse_canvas(req);
  pr.input.sketch = parse_sketch(req);

  if (req.contains("pivot") && !req["pivot"].is_null()) {
    const json& p = req["pivot"];
    if (!p.is_object()) bad("bad_request", "'pivot' must be an object {x, y, w, h}");
    PivotGraphic pivot;
    pivot.bbox = {number(p, "x", 0), number(p, "y", 0), number(p, "w", 0), number(p, "h", 0)};
    const auto& b = pivot.bbox;
    if (b.w < 0 || b.h < 0 || b.x < 0 || b.y < 0 || b.x + b.w > pr.input.canvas.width ||
        b.y + b.h > pr.input.canvas.height)
      bad("bad_pivot", "pivot bbox must have non-negative extents and lie within the canvas");
    if (const auto gid = text(p, "graphic_id")) {
      if (auto up = uploads.get(*gid)) pivot.graphic = std::move(*up);
      else if (const auto* asset = m.find_pivot(*gid)) pivot.graphic = asset->svg;
      else bad("unknown_graphic", fmt::format("unknown pivot graphic id '{}'", *gid));
    }
    pr.input.pivot = std::move(pivot);
  }

  auto& o = pr.options;
  o.alpha = number(req, "alpha", o.alpha);
  o.n = count(req, "n", o.n);
  o.relax_count = req.value("relax_count", false);
  o.palette = text(req, "palette");
  if (req.contains("top_k")) {
    const json& k = req["top_k"];
    if (!k.is_object()) bad("bad_request", "'top_k' must be an object {layouts, vgs, connections}");
    o.top_k_layouts = count(k, "layouts", o.top_k_layouts);
    o.top_k_vgs = count(k, "vgs", o.top_k_vgs);
    o.top_k_styles = count(k, "connections", o.top_k_styles);
  }
  if (req.contains("overrides") && !req["overrides"].is_null()) {
    const json& ov = req["overrides"];
    if (!ov.is_object()) bad("bad_request", "'overrides' must be an object");
    o.overrides.layout_id = text(ov, "layout_id");
    o.overrides.vg_id = text(ov, "vg_id");
    if (const auto s = text(ov, "connection_style")) {
      o.overrides.connection_style = parse_style(*s);
      if (!o.overrides.connection_style) bad("bad_request", fmt::format("unknown connection style '{}'", *s));
    }
  }
  return pr;
}

HttpResponse Service::recommend(const json& req) {
  const auto pr = parse_recommend(req, dataset_, uploads_);
  const auto recs = infogen::recommend(dataset_, pr.input, pr.options);
  json designs = json::array();
  for (std::size_t i = 0; i < recs.size(); ++i) designs.push_back(design_json(recs[i], i + 1));
  return json_ok({{"designs", std::move(designs)}});
}

HttpResponse Service::compose(const json& req) {
  auto pr = parse_recommend(req, dataset_, uploads_);
  const auto& ov = pr.options.overrides;
  if (!ov.layout_id || !ov.vg_id || !ov.connection_style)
    bad("bad_request", "compose needs overrides.layout_id, overrides.vg_id and overrides.connection_style");
  pr.options.n = 1;
  const auto recs = infogen::recommend(dataset_, pr.input, pr.options);
  return {200, "image/svg+xml", render_svg(recs.front().design)};
}

HttpResponse Service::rank_layouts(const json& req) {
  std::size_t n_vgs = 0;
  if (const auto markdown = text(req, "markdown")) n_vgs = parse_markdown(*markdown).items.size();
  n_vgs = count(req, "n_vgs", n_vgs);
  if (n_vgs == 0) bad("bad_request", "'n_vgs' or 'markdown' is required");
  json pseudo = req;
  pseudo["markdown"] = "- x";
  const auto pr = parse_recommend(pseudo, dataset_, uploads_);
  const std::size_t top_k = count(req, "top_k", 8);
  const bool relax = req.value("relax_count", false);

  json rows = json::array();
  auto row = [&](const ScoredLayout& s) {
    json r = score_json(s.score);
    r["id"] = s.layout.id;
    r["cluster_id"] = layout_cluster(dataset_, *dataset_.find_layout(s.layout.id));
    return r;
  };
  if (pr.input.sketch) {
    for (const auto& match : match_sketch(*pr.input.sketch, dataset_.layouts, n_vgs, top_k, relax)) {
      const auto scored = infogen::rank_layouts({match.layout}, n_vgs, pr.input.canvas, pr.input.pivot,
                                                {pr.options.alpha, 1, false, false});
      if (scored.front().score.e_o == 0) continue;
      json r = row(scored.front());
      r["distance"] = match.distance;
      rows.push_back(std::move(r));
    }
  } else {
    RankOptions ro{pr.options.alpha, top_k, relax, true};
    for (const auto& s : infogen::rank_layouts(dataset_.layouts, n_vgs, pr.input.canvas, pr.input.pivot, ro))
      rows.push_back(row(s));
  }
  return json_ok({{"layouts", std::move(rows)}});
}

static int request_cluster(const json& req, const DatasetManifest& m) {
  if (req.contains("cluster_id")) {
    if (!req["cluster_id"].is_number_integer()) bad("bad_request", "'cluster_id' must be an integer");
    return req["cluster_id"].get<int>();
  }
  if (const auto id = text(req, "layout_id")) {
    const auto* l = m.find_layout(*id);
    if (!l) throw Error(Stage::Layout, "unknown_layout", fmt::format("unknown layout id '{}'", *id));
    return layout_cluster(m, *l);
  }
  bad("bad_request", "'cluster_id' or 'layout_id' is required");
}

HttpResponse Service::rank_vgs(const json& req) {
  const int cluster = request_cluster(req, dataset_);
  SlotSet required;
  if (req.contains("required_slots")) required = parse_slots(req["required_slots"]);
  else if (const auto markdown = text(req, "markdown")) required = required_slots(parse_markdown(*markdown));
  static const VgVifIndex kEmpty;
  const auto ranked = infogen::rank_vgs(dataset_.vg_vif_index ? *dataset_.vg_vif_index : kEmpty,
                                        dataset_.vg_templates, cluster, required, count(req, "top_k", 8));
  json rows = json::array();
  for (const auto& r : ranked) {
    json slots = json::array();
    for (auto k : r.vg.slots().kinds()) slots.push_back(std::string(slot_name(k)));
    rows.push_back({{"id", r.vg.id}, {"score", r.score}, {"slots", std::move(slots)}});
  }
  return json_ok({{"cluster_id", cluster}, {"vgs", std::move(rows)}});
}

HttpResponse Service::rank_connections(const json& req) {
  const int cluster = request_cluster(req, dataset_);
  static const CVifIndex kEmpty;
  const auto ranking = rank_connection_styles(dataset_.c_vif_index ? *dataset_.c_vif_index : kEmpty, cluster);
  json rows = json::array();
  for (const auto& [style, p] : ranking.styles)
    rows.push_back({{"style", std::string(style_name(style))}, {"probability", p}});
  return json_ok({{"cluster_id", cluster}, {"styles", std::move(rows)}, {"fallback", ranking.fallback}});
}

HttpResponse Service::summary() const {
  const auto& m = dataset_;
  std::map<std::size_t, std::size_t> by_count;
  for (const auto& l : m.layouts) ++by_count[l.points.size()];
  json counts = json::object();
  for (const auto& [n, c] : by_count) counts[std::to_string(n)] = c;
  json palettes = json::array();
  for (const auto& p : m.palettes) palettes.push_back(p.name);
  return json_ok({{"version", m.version},
                  {"layouts", m.layouts.size()},
                  {"layouts_by_points", std::move(counts)},
                  {"vg_templates", m.vg_templates.size()},
                  {"connection_shapes", m.connection_shapes.size()},
                  {"pivot_graphics", m.pivot_graphics.size()},
                  {"palettes", std::move(palettes)},
                  {"usages", m.usages.size()},
                  {"has_vg_vif_index", m.vg_vif_index.has_value()},
                  {"has_c_vif_index", m.c_vif_index.has_value()},
                  {"has_cluster_model", m.cluster_model.has_value()}});
}

HttpResponse Service::asset(std::string_view kind, std::string_view id) const {
  const std::string* svg = nullptr;
  if (kind == "vg") {
    if (const auto* t = dataset_.find_vg(id)) svg = &t->svg;
  } else if (kind == "connection") {
    if (const auto* s = dataset_.find_connection(id)) svg = &s->svg;
  } else if (const auto* p = dataset_.find_pivot(id)) {
    svg = &p->svg;
  }
  if (!svg) return error_response(404, "dataset", "not_found", fmt::format("unknown {} id '{}'", kind, id));
  return {200, "image/svg+xml", *svg};
}

void Service::listen(const std::string& host, int port) {
  auto holder = std::make_shared<httplib::Server>();
  {
    std::lock_guard lock(server_mu_);
    server_ = holder;
  }
  auto& server = *holder;
  server.set_payload_max_length(64 * 1024 * 1024);
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    const auto out = handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/.*)", bridge);
  server.Post(R"(/.*)", bridge);
  if (!server.listen(host, port))
    throw Error(Stage::Service, "listen_failed", fmt::format("cannot listen on {}:{}", host, port));
}

void Service::stop() {
  std::lock_guard lock(server_mu_);
  if (server_) server_->stop();
}

}  // namespace infogen
