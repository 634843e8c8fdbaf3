#include "infogen/vg_index.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace infogen {
namespace {

double squared_distance(const Eigen::MatrixXd& rows, Eigen::Index a, Eigen::Index b) {
  return (rows.row(a) - rows.row(b)).squaredNorm();
}

}  // namespace

Eigen::VectorXd rasterize(const VifLayout& layout, int raster_size) {
  const int r = raster_size;
  Eigen::VectorXd grid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r) * r);
  auto mark = [&](const Point2d& p) {
    const int col = std::clamp(static_cast<int>(std::floor(p.x() * r)), 0, r - 1);
    const int row = std::clamp(static_cast<int>(std::floor(p.y() * r)), 0, r - 1);
    grid(static_cast<Eigen::Index>(row) * r + col) = 1.0;
  };
  const auto& pts = layout.points;
  if (pts.size() == 1) mark(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Point2d a = pts[i - 1], b = pts[i];
    // quarter-cell steps
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a).norm() * r * 4)));
    for (int s = 0; s <= steps; ++s) mark(a + (b - a) * (static_cast<double>(s) / steps));
  }
  return grid;
}

Eigen::VectorXd project(const ClusterModel& model, const Eigen::VectorXd& features) {
  return model.basis * (features - model.mean);
}

ClusterModel cluster_vifs(const std::vector<VifLayout>& layouts, int k, std::uint64_t seed, int raster_size) {
  const auto n = static_cast<Eigen::Index>(layouts.size());
  if (k < 1) throw Error(Stage::Vg, "bad_k", "cluster count must be positive");
  if (n < k)
    throw Error(Stage::Vg, "too_few_layouts",
                fmt::format("clustering into {} groups needs at least {} layouts, got {}", k, k, n));

  ClusterModel model;
  model.k = k;
  model.raster_size = raster_size;

  const Eigen::Index dim = static_cast<Eigen::Index>(raster_size) * raster_size;
  Eigen::MatrixXd features(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) features.row(i) = rasterize(layouts[i], raster_size).transpose();

  model.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0)
    while (rank < sv.size() && sv(rank) > 1e-9 * sv(0)) ++rank;
  const Eigen::Index comps = std::max<Eigen::Index>(1, std::min<Eigen::Index>(kMaxPcaComponents, rank));
  model.pca_components = static_cast<int>(comps);
  model.basis = svd.matrixV().leftCols(comps).transpose();
  for (Eigen::Index c = 0; c < comps; ++c) {
    Eigen::Index arg;
    model.basis.row(c).cwiseAbs().maxCoeff(&arg);
    if (model.basis(c, arg) < 0) model.basis.row(c) *= -1.0;
  }
  const Eigen::MatrixXd reduced = centered * model.basis.transpose();  // n x comps

  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) dist(i, j) = dist(j, i) = std::sqrt(squared_distance(reduced, i, j));

  // Farthest-first seeding.
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> medoids{static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n))};
  Eigen::VectorXd nearest = dist.col(medoids.front());
  while (static_cast<int>(medoids.size()) < k) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);  // first maximum wins
    medoids.push_back(far);
    nearest = nearest.cwiseMin(dist.col(far));
  }

  std::vector<int> label(static_cast<std::size_t>(n), 0);
  auto assign = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      for (int c = 1; c < k; ++c)
        if (dist(i, medoids[c]) < dist(i, medoids[best])) best = c;
      label[static_cast<std::size_t>(i)] = best;
    }
  };

  for (int iter = 0; iter < 100; ++iter) {
    assign();
    bool changed = false;
    for (int c = 0; c < k; ++c) {
      Eigen::Index best = medoids[c];
      double best_cost = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (label[static_cast<std::size_t>(j)] != c) continue;
        double cost = 0;
        for (Eigen::Index i = 0; i < n; ++i)
          if (label[static_cast<std::size_t>(i)] == c) cost += dist(i, j);
        // keep the incumbent on ties so the iteration settles
        if (cost < best_cost || (cost == best_cost && j == medoids[c])) {
          best_cost = cost;
          best = j;
        }
      }
      if (best != medoids[c]) {
        medoids[c] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  assign();

  model.centers.resize(k, comps);
  for (int c = 0; c < k; ++c) {
    model.centers.row(c) = reduced.row(medoids[c]);
    model.medoid_ids.push_back(layouts[static_cast<std::size_t>(medoids[c])].id);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    model.assignments[layouts[static_cast<std::size_t>(i)].id] = label[static_cast<std::size_t>(i)];
  return model;
}

int assign_cluster(const VifLayout& layout, const ClusterModel& model) {
  if (model.centers.rows() == 0) throw Error(Stage::Vg, "empty_model", "cluster model has no centers");
  const Eigen::VectorXd z = project(model, rasterize(layout, model.raster_size));
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < model.centers.rows(); ++c) {
    const double d = (model.centers.row(c).transpose() - z).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

VgVifIndex build_vg_vif_index(const std::vector<std::pair<std::string, int>>& associations) {
  if (associations.empty()) throw Error(Stage::Vg, "empty_index", "VG-VIF index needs at least one association");
  VgVifIndex index;
  for (const auto& [vg, cluster] : associations) {
    if (vg.empty()) throw Error(Stage::Vg, "bad_association", "empty VG id in association");
    if (cluster < 0 || cluster >= kClusterCount)
      throw Error(Stage::Vg, "bad_association", fmt::format("cluster id {} out of range for VG '{}'", cluster, vg));
    ++index.postings[vg][cluster];
  }
  for (const auto& [vg, terms] : index.postings)
    for (const auto& [cluster, _] : terms) ++index.df[cluster];
  index.n_docs = static_cast<int>(index.postings.size());
  return index;
}

double tfidf_score(const VgVifIndex& index, const std::string& vg_id, int cluster_id) {
  const auto doc = index.postings.find(vg_id);
  if (doc == index.postings.end())
    throw Error(Stage::Vg, "unknown_vg", fmt::format("VG '{}' is not in the VG-VIF index", vg_id));
  const auto term = doc->second.find(cluster_id);
  if (term == doc->second.end()) return 0.0;
  int length = 0;
  for (const auto& [_, count] : doc->second) length += count;
  const double tf = static_cast<double>(term->second) / length;
  const double idf = std::log(static_cast<double>(index.n_docs) / index.df.at(cluster_id));
  return tf * idf;
}

std::vector<ScoredTemplate> rank_vgs(const VgVifIndex& index, const std::vector<VgTemplate>& templates, int cluster_id,
                                     const SlotSet& required, std::size_t top_k) {
  std::vector<ScoredTemplate> ranked;
  for (const auto& t : templates) {
    if (!t.slots().includes(required)) continue;
    const double score = index.postings.contains(t.id) ? tfidf_score(index, t.id, cluster_id) : 0.0;
    ranked.push_back({t, score});
  }
  if (ranked.empty()) throw Error(Stage::Vg, "no_compatible_vg", "no VG design matches content shape");
  std::stable_sort(ranked.begin(), ranked.end(), [](const ScoredTemplate& a, const ScoredTemplate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.vg.id < b.vg.id;
  });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

}  // namespace infogen
