#include <doctest.h>

#include <map>
#include <set>

#include "infogen/error.hpp"
#include "infogen/vg_index.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace infogen;

namespace {

// VG-VIF table: VG-1 {1,3,4,7}, VG-2 {1,2}, VG-3 {4,5,6}, VG-4 {1..6}.
const std::map<std::string, std::vector<int>> kPaperDocs{
    {"VG-1", {1, 3, 4, 7}}, {"VG-2", {1, 2}}, {"VG-3", {4, 5, 6}}, {"VG-4", {1, 2, 3, 4, 5, 6}}};

VgVifIndex paper_index() {
  std::vector<std::pair<std::string, int>> assoc;
  for (const auto& [vg, words] : kPaperDocs)
    for (int w : words) assoc.emplace_back(vg, w);
  return build_vg_vif_index(assoc);
}

VgTemplate tmpl(std::string id, SlotSet slots) {
  VgTemplate t;
  t.id = std::move(id);
  for (auto k : slots.kinds()) t.placeholders[k] = BBox2d{0, 0, 10, 10};
  t.extent = BBox2d{0, 0, 10, 10};
  return t;
}

}  // namespace

TEST_SUITE("vg_index") {
  TEST_CASE("paper table document frequencies") {
    const auto idx = paper_index();
    CHECK(idx.n_docs == 4);
    CHECK(idx.df.at(1) == 3);
    CHECK(idx.df.at(7) == 1);
    CHECK(idx.df.at(4) == 3);
  }

  TEST_CASE("single association and empty input") {
    const auto idx = build_vg_vif_index({{"vg", 3}});
    CHECK(idx.df.at(3) == 1);
    CHECK(idx.n_docs == 1);
    CHECK_THROWS_AS(build_vg_vif_index({}), Error);
  }

  TEST_CASE("paper table TF-IDF for CL-1") {
    const auto idx = paper_index();
    const double l = std::log(4.0 / 3.0);
    CHECK(std::abs(tfidf_score(idx, "VG-2", 1) - l / 2) < 1e-12);
    CHECK(std::abs(tfidf_score(idx, "VG-1", 1) - l / 4) < 1e-12);
    CHECK(std::abs(tfidf_score(idx, "VG-4", 1) - l / 6) < 1e-12);
    CHECK(tfidf_score(idx, "VG-3", 1) == 0.0);
    CHECK(tfidf_score(idx, "VG-2", 1) == doctest::Approx(0.14384).epsilon(1e-4));
  }

  TEST_CASE("CL-7 is exclusive to VG-1") {
    const auto idx = paper_index();
    for (const auto& [vg, _] : kPaperDocs) CHECK((tfidf_score(idx, vg, 7) > 0) == (vg == "VG-1"));
  }

  TEST_CASE("brute-force oracle reproduces all 4x7 scores") {
    const auto idx = paper_index();
    for (const auto& [vg, _] : kPaperDocs)
      for (int c = 1; c <= 7; ++c) CHECK(std::abs(tfidf_score(idx, vg, c) - oracle::tfidf(kPaperDocs, vg, c)) < 1e-12);
  }

  TEST_CASE("unknown vg id") { CHECK_THROWS_AS(tfidf_score(paper_index(), "VG-9", 1), Error); }

  TEST_CASE("rank_vgs keeps slot supersets") {
    const auto idx = build_vg_vif_index({{"a", 0}, {"b", 0}, {"c", 0}});
    const std::vector<VgTemplate> ts{tmpl("a", {SlotKind::Title, SlotKind::Text}),
                                     tmpl("b", {SlotKind::Title, SlotKind::Text, SlotKind::Label}),
                                     tmpl("c", {SlotKind::Label})};
    const auto r = rank_vgs(idx, ts, 0, {SlotKind::Title, SlotKind::Text}, 10);
    REQUIRE(r.size() == 2);
    CHECK(r[0].vg.id == "a");  // equal scores: id order
    CHECK(r[1].vg.id == "b");
    CHECK_THROWS_WITH(rank_vgs(idx, ts, 0, {SlotKind::Image}, 10), "no VG design matches content shape");
  }

  TEST_CASE("rank_vgs on the paper table") {
    const auto idx = paper_index();
    std::vector<VgTemplate> ts;
    for (const auto& [vg, _] : kPaperDocs) ts.push_back(tmpl(vg, {SlotKind::Text}));
    const auto r = rank_vgs(idx, ts, 1, {SlotKind::Text}, 3);
    REQUIRE(r.size() == 3);
    CHECK(r[0].vg.id == "VG-2");
    CHECK(r[1].vg.id == "VG-1");
    CHECK(r[2].vg.id == "VG-4");
  }

  TEST_CASE("twelve distinct shapes become singletons") {
    const auto shapes = fixtures::twelve_shapes();
    const auto m = cluster_vifs(shapes, 12, 0);
    std::set<int> ids;
    for (const auto& l : shapes) ids.insert(m.assignments.at(l.id));
    CHECK(ids.size() == 12);
  }

  TEST_CASE("jittered duplicates cluster with their originals") {
    const auto data = fixtures::jittered_pairs(0.01, 4);
    // Precondition checked by brute force: every within-pair raster distance
    // is below every cross-pair distance.
    std::vector<Eigen::VectorXd> f;
    for (const auto& l : data) f.push_back(rasterize(l));
    double worst_within = 0, best_across = 1e300;
    for (std::size_t i = 0; i < 12; ++i) {
      worst_within = std::max(worst_within, (f[i] - f[i + 12]).norm());
      for (std::size_t j = 0; j < data.size(); ++j)
        if (j != i && j != i + 12) best_across = std::min(best_across, (f[i] - f[j]).norm());
    }
    REQUIRE(worst_within < best_across);

    const auto m = cluster_vifs(data, 12, 0);
    std::map<int, int> sizes;
    for (const auto& [_, c] : m.assignments) ++sizes[c];
    CHECK(sizes.size() == 12);
    for (const auto& [_, n] : sizes) CHECK(n == 2);
    for (std::size_t i = 0; i < 12; ++i)
      CHECK(m.assignments.at(data[i].id) == m.assignments.at(data[i + 12].id));
    CHECK(cluster_vifs(data, 12, 0) == m);
  }

  TEST_CASE("assign_cluster agrees with training") {
    const auto data = fixtures::jittered_pairs(0.01, 8);
    const auto m = cluster_vifs(data, 12, 0);
    for (std::size_t c = 0; c < m.medoid_ids.size(); ++c) {
      const auto it = std::find_if(data.begin(), data.end(), [&](const VifLayout& l) { return l.id == m.medoid_ids[c]; });
      CHECK(assign_cluster(*it, m) == static_cast<int>(c));
    }
    auto copy = data[3];
    copy.points.front() += Point2d(0.004, -0.004);
    CHECK(assign_cluster(copy, m) == m.assignments.at(data[3].id));
  }

  TEST_CASE("equidistant medoids resolve to the smaller id") {
    ClusterModel m;
    m.raster_size = 2;
    m.pca_components = 4;
    m.mean = Eigen::VectorXd::Zero(4);
    m.basis = Eigen::MatrixXd::Identity(4, 4);
    const VifLayout l{"x", {Point2d(0.1, 0.1), Point2d(0.9, 0.1)}, {}, ""};
    const Eigen::VectorXd f = rasterize(l, 2);
    m.centers = Eigen::MatrixXd::Constant(12, 4, 100.0);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
    e(2) = 0.5;
    m.centers.row(3) = (f + e).transpose();
    m.centers.row(7) = (f - e).transpose();
    CHECK(assign_cluster(l, m) == 3);
  }

  TEST_CASE("too few layouts") { CHECK_THROWS_AS(cluster_vifs(fixtures::twelve_shapes(), 13, 0), Error); }
}
