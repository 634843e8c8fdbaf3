#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "infogen/content.hpp"
#include "infogen/geometry.hpp"
#include "infogen/layout.hpp"

namespace infogen {

/// A reusable VG design: SVG fragment plus typed content placeholders, all
/// in template coordinates. The template faces +x.
struct VgTemplate {
  std::string id;
  std::string svg;
  std::map<SlotKind, BBox2d> placeholders;
  Point2d anchor = Point2d::Zero();
  BBox2d extent;
  int theme_colors = 0;  // highest data-theme-color token used
  std::string source;

  SlotSet slots() const {
    SlotSet s;
    for (const auto& [k, _] : placeholders) s.insert(k);
    return s;
  }
  bool operator==(const VgTemplate&) const = default;
};

inline constexpr int kClusterCount = 12;
inline constexpr int kRasterSize = 32;
inline constexpr int kMaxPcaComponents = 50;

struct ClusterModel {
  int k = kClusterCount;
  int raster_size = kRasterSize;
  int pca_components = 0;
  Eigen::VectorXd mean;     // raster feature mean
  Eigen::MatrixXd basis;    // pca_components x raster_size^2
  Eigen::MatrixXd centers;  // k x pca_components, medoids in PCA space
  std::vector<std::string> medoid_ids;
  std::map<std::string, int> assignments;

  bool operator==(const ClusterModel& o) const {
    return k == o.k && raster_size == o.raster_size && pca_components == o.pca_components && mean == o.mean &&
           basis == o.basis && centers == o.centers && medoid_ids == o.medoid_ids && assignments == o.assignments;
  }
};

/// Binary raster of the layout polyline (unit square onto a size x size
/// grid, one-cell stroke), flattened row-major.
Eigen::VectorXd rasterize(const VifLayout& layout, int raster_size = kRasterSize);

Eigen::VectorXd project(const ClusterModel& model, const Eigen::VectorXd& features);

/// Raster features -> PCA (up to 50 components) -> k-medoids with
/// farthest-first seeding. Deterministic for a given seed.
ClusterModel cluster_vifs(const std::vector<VifLayout>& layouts, int k = kClusterCount, std::uint64_t seed = 0,
                          int raster_size = kRasterSize);

/// Nearest medoid; ties go to the smaller cluster id.
int assign_cluster(const VifLayout& layout, const ClusterModel& model);

/// VGs are documents, VIF cluster ids their words.
struct VgVifIndex {
  std::map<std::string, std::map<int, int>> postings;  // vg id -> cluster -> term count
  std::map<int, int> df;
  int n_docs = 0;

  bool operator==(const VgVifIndex&) const = default;
};

VgVifIndex build_vg_vif_index(const std::vector<std::pair<std::string, int>>& associations);

/// tf = count / document length, idf = ln(n_docs / df).
double tfidf_score(const VgVifIndex& index, const std::string& vg_id, int cluster_id);

struct ScoredTemplate {
  VgTemplate vg;
  double score = 0;
};

/// Templates whose slots cover `required`, by TF-IDF descending then id.
std::vector<ScoredTemplate> rank_vgs(const VgVifIndex& index, const std::vector<VgTemplate>& templates, int cluster_id,
                                     const SlotSet& required, std::size_t top_k);

}  // namespace infogen
