// infogen: batch generation, stage ranking, index building, dataset
// validation and the HTTP service.
//
// Exit codes: 0 ok, 1 I/O failure, 2 validation or pipeline error.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "infogen/dataset.hpp"
#include "infogen/recommend.hpp"
#include "infogen/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace infogen;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Stage::Service, "io", fmt::format("cannot read '{}'", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Canvas parse_canvas(const std::string& spec) {
  Canvas c;
  double w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(spec.c_str(), "%lf%c%lf%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') || w <= 0 || h <= 0)
    throw Error(Stage::Layout, "bad_canvas", fmt::format("--canvas expects WxH with positive extents, got '{}'", spec));
  c.width = w;
  c.height = h;
  return c;
}

std::optional<PivotGraphic> parse_pivot(const std::string& spec, const Canvas& canvas) {
  if (spec.empty()) return std::nullopt;
  PivotGraphic p;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf%c", &p.bbox.x, &p.bbox.y, &p.bbox.w, &p.bbox.h, &extra) != 4)
    throw Error(Stage::Layout, "bad_pivot", fmt::format("--pivot expects x,y,w,h, got '{}'", spec));
  const auto& b = p.bbox;
  if (b.w < 0 || b.h < 0 || b.x < 0 || b.y < 0 || b.x + b.w > canvas.width || b.y + b.h > canvas.height)
    throw Error(Stage::Layout, "bad_pivot", "pivot bbox must have non-negative extents and lie within the canvas");
  return p;
}

Polyline2d read_sketch(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(Stage::Layout, "bad_sketch", fmt::format("sketch '{}': {}", path.string(), e.what()));
  }
  if (!doc.is_array()) throw Error(Stage::Layout, "bad_sketch", "sketch file must hold an array of [x, y] pairs");
  Polyline2d out;
  for (const auto& p : doc) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw Error(Stage::Layout, "bad_sketch", "sketch points must be [x, y] number pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

void write_text(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << data)) throw Error(Stage::Service, "io", fmt::format("cannot write '{}'", p.string()));
}

json score_row(const std::string& id, const LayoutScore& s) {
  return {{"id", id}, {"e_o", s.e_o}, {"e_c", s.e_c}, {"u", s.u}, {"e_u_raw", s.e_u_raw}, {"e_l", s.e_l}};
}

struct Common {
  std::string dataset;
  std::string canvas = "800x600";
  std::string pivot;
  std::string pivot_graphic;
  double alpha = kDefaultAlpha;
  bool relax = false;
  bool json_out = false;
};

int run_generate(const Common& c, const std::string& content_path, const std::string& sketch_path, std::size_t n,
                 const std::string& palette, const std::string& out_dir) {
  const auto manifest = load_manifest(c.dataset);
  RecommendInput in;
  in.content = parse_markdown(read_text(content_path));
  in.canvas = parse_canvas(c.canvas);
  in.pivot = parse_pivot(c.pivot, in.canvas);
  if (in.pivot && !c.pivot_graphic.empty()) {
    const auto* asset = manifest.find_pivot(c.pivot_graphic);
    if (!asset) throw Error(Stage::Dataset, "unknown_graphic", fmt::format("unknown pivot graphic '{}'", c.pivot_graphic));
    in.pivot->graphic = asset->svg;
  }
  if (!sketch_path.empty()) in.sketch = read_sketch(sketch_path);

  RecommendOptions opt;
  opt.alpha = c.alpha;
  opt.n = n;
  opt.relax_count = c.relax;
  if (!palette.empty()) opt.palette = palette;
  const auto recs = recommend(manifest, in, opt);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Stage::Service, "io", fmt::format("cannot create '{}': {}", out_dir, ec.message()));

  json report = json::array();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& d = recs[i].design;
    const std::string file = fmt::format("design_{:03}.svg", i + 1);
    write_text(fs::path(out_dir) / file, render_svg(d));
    json row = score_row(d.layout.id, d.scores.layout);
    row.erase("id");
    row["tfidf"] = d.scores.tfidf;
    row["p_style"] = d.scores.p_style;
    row["composite"] = d.scores.composite;
    json entry = {{"file", file},
                  {"rank", i + 1},
                  {"layout_id", d.layout.id},
                  {"cluster_id", recs[i].cluster_id},
                  {"vg_id", d.vg.id},
                  {"connection_style", std::string(style_name(d.connection_style))},
                  {"scores", std::move(row)}};
    if (recs[i].sketch_distance) entry["sketch_distance"] = *recs[i].sketch_distance;
    report.push_back(std::move(entry));
  }
  write_text(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
  if (c.json_out) std::cout << report.dump(2) << "\n";
  else std::cout << fmt::format("wrote {} design(s) to {}\n", recs.size(), out_dir);
  return 0;
}

int run_rank_layouts(const Common& c, std::size_t n_vgs, const std::string& content_path, std::size_t top_k) {
  const auto manifest = load_manifest(c.dataset);
  if (!content_path.empty()) n_vgs = parse_markdown(read_text(content_path)).items.size();
  if (n_vgs == 0) throw Error(Stage::Layout, "bad_count", "rank-layouts needs --n-vgs or --content");
  const Canvas canvas = parse_canvas(c.canvas);
  RankOptions ro;
  ro.alpha = c.alpha;
  ro.top_k = top_k;
  ro.relax_count = c.relax;
  const auto ranked = rank_layouts(manifest.layouts, n_vgs, canvas, parse_pivot(c.pivot, canvas), ro);
  if (c.json_out) {
    json rows = json::array();
    for (const auto& r : ranked) rows.push_back(score_row(r.layout.id, r.score));
    std::cout << rows.dump(2) << "\n";
    return 0;
  }
  std::cout << fmt::format("{:<24} {:>3} {:>8} {:>8} {:>8}\n", "id", "e_o", "e_c", "u", "e_l");
  for (const auto& r : ranked)
    std::cout << fmt::format("{:<24} {:>3} {:>8.4f} {:>8.4f} {:>8.4f}\n", r.layout.id, r.score.e_o, r.score.e_c,
                             r.score.u, r.score.e_l);
  return 0;
}

int run_validate(const Common& c) {
  const auto diags = validate_dataset(c.dataset);
  if (c.json_out) {
    json rows = json::array();
    for (const auto& d : diags) rows.push_back({{"pointer", d.pointer}, {"message", d.message}});
    std::cout << json({{"valid", diags.empty()}, {"violations", rows}}).dump(2) << "\n";
  } else if (diags.empty()) {
    std::cout << fmt::format("{}: ok\n", c.dataset);
  } else {
    for (const auto& d : diags) std::cerr << fmt::format("{}: {}\n", d.pointer, d.message);
    std::cerr << fmt::format("{} violation(s)\n", diags.size());
  }
  return diags.empty() ? 0 : kExitInvalid;
}

int run_build_index(const Common& c, std::uint64_t seed) {
  auto manifest = load_manifest(c.dataset);
  build_indices(manifest, seed);
  save_manifest(manifest, c.dataset);
  std::cout << fmt::format("clustered {} layouts into {} groups; indexed {} VG designs\n", manifest.layouts.size(),
                           manifest.cluster_model->k, manifest.vg_vif_index ? manifest.vg_vif_index->n_docs : 0);
  return 0;
}

int run_serve(const Common& c, const std::string& host, int port) {
  Service service(load_manifest(c.dataset));
  std::cout << fmt::format("serving {} on http://{}:{}\n", c.dataset, host, port) << std::flush;
  service.listen(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infogen: infographic generation from markdown content"};
  app.require_subcommand(1);

  Common common;
  auto add_dataset = [&](CLI::App* sub) {
    sub->add_option("--dataset", common.dataset, "Dataset directory")->envname("INFOGEN_DATASET")->required();
  };
  auto add_scene = [&](CLI::App* sub) {
    sub->add_option("--canvas", common.canvas, "Canvas size WxH")->capture_default_str();
    sub->add_option("--pivot", common.pivot, "Pivot bounding box x,y,w,h in canvas units");
    sub->add_option("--alpha", common.alpha, "Coverage vs uniformity balance in [0,1]")->capture_default_str();
    sub->add_flag("--relax", common.relax, "Accept layouts with extra points, truncated");
    sub->add_flag("--json", common.json_out, "Machine-readable output");
  };

  std::string content, sketch, palette, out_dir;
  std::size_t n = 5;
  auto* gen = app.add_subcommand("generate", "Generate ranked SVG infographics");
  add_dataset(gen);
  add_scene(gen);
  gen->add_option("--content", content, "Markdown content file")->required();
  gen->add_option("--sketch", sketch, "Freehand VIF sketch (JSON array of [x,y])");
  gen->add_option("--pivot-graphic", common.pivot_graphic, "Dataset pivot graphic id drawn in the pivot box");
  gen->add_option("--n", n, "Number of designs")->capture_default_str();
  gen->add_option("--palette", palette, "Palette name (default: first in dataset)");
  gen->add_option("--out", out_dir, "Output directory")->required();

  std::size_t n_vgs = 0, top_k = 10;
  auto* rank = app.add_subcommand("rank-layouts", "Print the layout energy table");
  add_dataset(rank);
  add_scene(rank);
  rank->add_option("--n-vgs", n_vgs, "Number of visual groups");
  rank->add_option("--content", content, "Markdown file; its item count sets --n-vgs");
  rank->add_option("--top-k", top_k, "Rows to print")->capture_default_str();

  std::uint64_t seed = 0;
  auto* build = app.add_subcommand("build-index", "Cluster layouts and rebuild the VG-VIF and C-VIF indices");
  add_dataset(build);
  build->add_option("--seed", seed, "Clustering seed")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Validate a dataset, listing every violation");
  add_dataset(validate);
  validate->add_flag("--json", common.json_out, "Machine-readable output");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  add_dataset(serve);
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) return run_generate(common, content, sketch, n, palette, out_dir);
    if (*rank) return run_rank_layouts(common, n_vgs, content, top_k);
    if (*build) return run_build_index(common, seed);
    if (*validate) return run_validate(common);
    if (*serve) return run_serve(common, host, port);
  } catch (const DatasetError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << fmt::format("error [dataset]: {}: {}\n", d.pointer, d.message);
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << fmt::format("error [{}]: {}\n", stage_name(e.stage()), e.what());
    return e.code() == "io" ? kExitIo : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("error: {}\n", e.what());
    return kExitIo;
  }
  return 0;
}
