#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infogen/composer.hpp"
#include "infogen/error.hpp"
#include "infogen/layout.hpp"
#include "infogen/vg_index.hpp"

namespace infogen {

struct PivotAsset {
  std::string id;
  std::string svg;

  bool operator==(const PivotAsset&) const = default;
};

/// One VG design seen in one source infographic, with that infographic's
/// layout and connection style. Drives both index builds.
struct Usage {
  std::string infographic;
  std::string layout_id;
  std::string vg_id;
  std::optional<ConnectionStyle> connection_style;

  bool operator==(const Usage&) const = default;
};

struct DatasetManifest {
  std::string version = "1.0.0";
  std::vector<VifLayout> layouts;
  std::vector<VgTemplate> vg_templates;
  std::vector<ConnectionShape> connection_shapes;
  std::vector<PivotAsset> pivot_graphics;
  std::vector<Palette> palettes;
  std::vector<Usage> usages;
  std::optional<VgVifIndex> vg_vif_index;
  std::optional<CVifIndex> c_vif_index;
  std::optional<ClusterModel> cluster_model;

  const VifLayout* find_layout(std::string_view id) const;
  const VgTemplate* find_vg(std::string_view id) const;
  const ConnectionShape* find_connection(std::string_view id) const;
  const PivotAsset* find_pivot(std::string_view id) const;
  const Palette* find_palette(std::string_view name) const;

  bool operator==(const DatasetManifest& o) const {
    return version == o.version && layouts == o.layouts && vg_templates == o.vg_templates &&
           connection_shapes == o.connection_shapes && pivot_graphics == o.pivot_graphics && palettes == o.palettes &&
           usages == o.usages && vg_vif_index == o.vg_vif_index && c_vif_index == o.c_vif_index &&
           cluster_model == o.cluster_model;
  }
};

struct Diagnostic {
  std::string pointer;  // JSON pointer (or file path) of the offending value
  std::string message;
};

/// Validation failure carrying every violation found, not only the first.
class DatasetError : public Error {
 public:
  explicit DatasetError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

inline constexpr const char* kManifestFile = "manifest.json";

/// Discovers placeholders by the `data-slot`, `data-anchor` and
/// `data-theme-color` attribute conventions.
VgTemplate validate_vg_template(const std::string& svg, const std::string& id = {}, const std::string& source = {});

ConnectionShape parse_connection_shape(const std::string& svg, const std::string& id,
                                       std::vector<ConnectionStyle> styles = {});

/// `path` is a dataset directory or a manifest file inside one.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// All violations in a dataset; empty when valid.
std::vector<Diagnostic> validate_dataset(const std::filesystem::path& path);

/// Canonical manifest.json plus one SVG file per asset under `dir`.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& dir);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);

/// Parses and validates a manifest document; SVG files resolve against
/// `base_dir`. Throws DatasetError listing all violations.
DatasetManifest manifest_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Clusters the layouts, stamps their cluster ids, and rebuilds the VG-VIF
/// and C-VIF indices from the usage records.
void build_indices(DatasetManifest& manifest, std::uint64_t seed = 0);

/// Cluster of a dataset layout: stamped id, model assignment, or nearest
/// medoid, in that order.
int layout_cluster(const DatasetManifest& manifest, const VifLayout& layout);

}  // namespace infogen
