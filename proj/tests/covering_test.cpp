#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mmlab/covering.hpp"
#include "mmlab/growth.hpp"
#include "mmlab/models.hpp"
#include "mmlab/report_json.hpp"

using namespace mmlab;

namespace {

const DiscreteSpace& plane_grid() {
  static DiscreteSpace space = build_space(euclidean_grid(2, 16.0, 0.25, 2.0));
  return space;
}

// A long ray with a short dead-end branch near the base point: the branch
// fills annuli without ever reaching their outer radius, which forces
// gluing events.
DiscreteSpace dumbbell_space() {
  DiscreteSpace::Builder b;
  const int ray = 64;
  for (int i = 0; i <= ray; ++i) b.add_vertex({static_cast<double>(i), 0.0}, 1.0);
  for (int i = 0; i < ray; ++i) b.add_edge(i, i + 1, 1.0);
  int prev = 0;
  for (int i = 1; i <= 5; ++i) {
    int v = b.add_vertex({0.0, static_cast<double>(i)}, 1.0);
    b.add_edge(prev, v, 1.0);
    prev = v;
  }
  b.set_base_point(0);
  b.set_dimension_bound(2.0);
  return std::move(b).build();
}

DiscreteSpace line_graph(int n) {
  DiscreteSpace::Builder b;
  for (int i = 0; i < n; ++i) b.add_vertex({static_cast<double>(i - n / 2)}, 1.0);
  for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, 1.0);
  b.set_base_point(n / 2);
  b.set_dimension_bound(2.0);
  return std::move(b).build();
}

}  // namespace

TEST_CASE("kappa search accepts the smallest candidate on the plane") {
  auto scans = kappa_scan(plane_grid(), 4);
  REQUIRE(!scans.empty());
  CHECK(scans.front().ok);
  double kappa = kappa_search(plane_grid(), 4);
  CHECK(kappa == doctest::Approx(scans.front().kappa));
  // annuli are connected, so the merge condition never has a pair to test
  for (const auto& row : scans.front().rows) {
    CHECK(row.narrow_components >= 1);
    CHECK(row.split_pairs + row.merged_pairs ==
          row.narrow_components * (row.narrow_components - 1) / 2);
  }
}

TEST_CASE("kappa search on the line: every candidate admissible, pairs split") {
  auto space = line_graph(129);
  auto scans = kappa_scan(space, 4);
  bool saw_split = false;
  for (const auto& scan : scans) {
    CHECK(scan.ok);
    for (const auto& row : scan.rows) {
      if (row.narrow_components == 2) {
        CHECK(row.merged_pairs == 0);
        if (row.split_pairs == 1) saw_split = true;
      }
    }
  }
  CHECK(saw_split);
}

TEST_CASE("kappa search rejects too few levels") {
  CHECK_THROWS_AS(kappa_search(plane_grid(), 1), Error);
}

TEST_CASE("plane covering: one piece per level, no gluing") {
  auto w = uniform_weight(plane_grid());
  auto cov = build_good_covering(plane_grid(), 2.0, w);
  CHECK(cov.gluing_log.empty());
  std::set<int> levels;
  for (const auto& piece : cov.pieces) {
    CHECK(levels.insert(piece.level).second);  // exactly one piece per level
  }
  CHECK(static_cast<int>(levels.size()) == cov.max_level - cov.min_level + 1);
  for (int c : cov.components_per_level) CHECK(c == 1);
}

TEST_CASE("dumbbell covering glues the dead-end branch") {
  auto space = dumbbell_space();
  auto w = uniform_weight(space);
  auto cov = build_good_covering(space, 2.0, w);
  CHECK(!cov.gluing_log.empty());
  // audit: every event merges one level down
  for (const auto& ev : cov.gluing_log) CHECK(ev.from_level == ev.into_level + 1);
}

TEST_CASE("kappa at or below 1 is rejected") {
  auto w = uniform_weight(plane_grid());
  CHECK_THROWS_AS(build_good_covering(plane_grid(), 1.0, w), Error);
}

TEST_CASE("covering nesting and coverage") {
  auto w = uniform_weight(plane_grid());
  auto cov = build_good_covering(plane_grid(), 2.0, w);
  for (const auto& piece : cov.pieces) {
    CHECK(piece.U.is_subset_of(piece.U_star));
    CHECK(piece.U_star.is_subset_of(piece.U_sharp));
    CHECK(!piece.U.empty());
  }
  CHECK(cov.exceptional_measure_m1 == 0.0);
  CHECK(cov.exceptional_measure_m2 == 0.0);
  CHECK(cov.covered_region.size() == static_cast<std::size_t>(plane_grid().vertex_count()));
}

TEST_CASE("components per annulus below the combinatorial bound") {
  auto space = dumbbell_space();
  auto w = uniform_weight(space);
  auto cov = build_good_covering(space, 2.0, w);
  double bound = components_per_annulus_bound(cov.kappa, space.dimension_bound());
  int worst = 0;
  for (int c : cov.components_per_level) worst = std::max(worst, c);
  CHECK(worst <= bound);
}

TEST_CASE("validator passes the plane covering and reports finite constants") {
  auto w = uniform_weight(plane_grid());
  auto cov = build_good_covering(plane_grid(), 2.0, w);
  auto val = validate_good_covering(plane_grid(), cov, w.mu, plane_grid().measures());
  CHECK(val.all_ok());
  CHECK(val.q1 >= 1);
  CHECK(val.q2 >= 1.0);
  CHECK(std::isfinite(val.q2));
  CHECK(cov.q1 == val.q1);
}

TEST_CASE("shrinking a star set produces an embracing violation") {
  auto w = uniform_weight(plane_grid());
  auto cov = build_good_covering(plane_grid(), 2.0, w);
  for (auto& piece : cov.pieces) piece.U_star = piece.U;
  auto val = validate_good_covering(plane_grid(), cov, w.mu, plane_grid().measures());
  CHECK(!val.embracing_ok);
  CHECK(!val.embracing_violations.empty());
}

TEST_CASE("two-piece toy covering gives Q2 = 4") {
  // masses 1 and 4, best embracing star has mass 4
  DiscreteSpace::Builder b;
  b.add_vertex({0.0}, 1.0);
  b.add_vertex({1.0}, 3.0);
  b.add_edge(0, 1, 1.0);
  b.set_base_point(0);
  auto space = std::move(b).build();

  GoodCovering cov;
  cov.kappa = 2.0;
  cov.base_radius = 1.0;
  cov.min_level = 0;
  cov.max_level = 0;
  CoveringPiece p1, p2;
  p1.level = 0;
  p1.index = 0;
  p1.U = VertexSubset::from_unsorted({0});
  p1.U_star = VertexSubset::from_unsorted({0, 1});
  p1.U_sharp = p1.U_star;
  p2.level = 0;
  p2.index = 1;
  p2.U = VertexSubset::from_unsorted({0, 1});
  p2.U_star = VertexSubset::from_unsorted({0, 1});
  p2.U_sharp = p2.U_star;
  cov.pieces = {p1, p2};
  cov.covered_region = VertexSubset::from_unsorted({0, 1});

  auto val = validate_good_covering(space, cov, space.measures(), space.measures());
  CHECK(val.all_ok());
  CHECK(val.q2 == doctest::Approx(4.0));
}

TEST_CASE("lattice covering of a single ball is one piece with Q1 = 1") {
  auto space = line_graph(21);
  auto b = ball(space, space.base_point(), 3.0);
  auto cov = lattice_covering(space, b.members, 0.9, 10.0);
  CHECK(cov.pieces.size() == 1);
  CHECK(cov.q1 == 1);
}

TEST_CASE("lattice covering of a plane annulus validates") {
  const auto& space = plane_grid();
  const auto& dist = space.base_distances();
  std::vector<int> ring;
  for (int v = 0; v < space.vertex_count(); ++v)
    if (dist[static_cast<std::size_t>(v)] >= 4.0 && dist[static_cast<std::size_t>(v)] < 8.0)
      ring.push_back(v);
  auto subset = VertexSubset::from_unsorted(ring);
  auto cov = lattice_covering(space, subset, 0.25, 4.0);
  auto val = validate_good_covering(space, cov, space.measures(), space.measures());
  CHECK(val.all_ok());
  CHECK(cov.exceptional_measure_m2 == 0.0);
}

TEST_CASE("lattice covering rejects delta outside (0,1)") {
  auto space = line_graph(21);
  auto b = ball(space, space.base_point(), 3.0);
  CHECK_THROWS_AS(lattice_covering(space, b.members, 1.5, 4.0), Error);
}

TEST_CASE("gluing rule audit on the dumbbell") {
  auto space = dumbbell_space();
  auto w = uniform_weight(space);
  auto cov = build_good_covering(space, 2.0, w);
  const auto& dist = space.base_distances();
  for (const auto& ev : cov.gluing_log) {
    CHECK(ev.from_level == ev.into_level + 1);
    CHECK(ev.candidate_count >= 1);
  }
  // glued pieces carry vertices from both annulus bands
  for (const auto& piece : cov.pieces) {
    if (!piece.glued_from) continue;
    double r_lo = cov.level_radius(piece.level - 1);
    double r_hi = cov.level_radius(piece.level + 1);
    for (int v : piece.U) {
      CHECK(dist[static_cast<std::size_t>(v)] >= (piece.level == 0 ? 0.0 : r_lo));
      CHECK(dist[static_cast<std::size_t>(v)] < r_hi);
    }
  }
}

TEST_CASE("covering JSON round trip restores the piece structure") {
  auto space = dumbbell_space();
  auto w = uniform_weight(space);
  auto cov = build_good_covering(space, 2.0, w);
  auto j = mmlab::to_json(cov);
  auto back = mmlab::covering_from_json(j);
  REQUIRE(back.pieces.size() == cov.pieces.size());
  for (std::size_t i = 0; i < cov.pieces.size(); ++i) {
    CHECK(back.pieces[i].U == cov.pieces[i].U);
    CHECK(back.pieces[i].U_star == cov.pieces[i].U_star);
    CHECK(back.pieces[i].U_sharp == cov.pieces[i].U_sharp);
    CHECK(back.pieces[i].level == cov.pieces[i].level);
    CHECK(back.pieces[i].glued_from == cov.pieces[i].glued_from);
  }
  CHECK(back.gluing_log.size() == cov.gluing_log.size());
  CHECK(back.q1 == cov.q1);
  // the restored covering validates identically
  auto val = validate_good_covering(space, back, w.mu, space.measures());
  CHECK(val.all_ok());
  CHECK(val.q1 == cov.q1);
}
