#include "mmlab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace mmlab {

double components_per_annulus_bound(double kappa, double dimension_bound) {
  return std::pow(8.0 * kappa / (kappa - 1.0), dimension_bound);
}

double GoodCovering::level_radius(int level) const {
  return base_radius * std::pow(kappa, level);
}

std::vector<int> GoodCovering::interior_pieces() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].level > min_level && pieces[i].level < max_level)
      out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> GoodCovering::non_outer_pieces() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].level < max_level) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

double subset_mass(const VertexSubset& s, const std::vector<double>& m) {
  double total = 0.0;
  for (int v : s) total += m[static_cast<std::size_t>(v)];
  return total;
}

// Annulus {lo <= d < hi} around the base point.
VertexSubset annulus(const DiscreteSpace& space, double lo, double hi) {
  const auto& dist = space.base_distances();
  std::vector<int> ids;
  for (int v = 0; v < space.vertex_count(); ++v) {
    double d = dist[static_cast<std::size_t>(v)];
    if (d >= lo && d < hi) ids.push_back(v);
  }
  return VertexSubset(std::move(ids));
}

// True if some edge leaves `piece` toward a vertex at distance >= r.
bool touches_outer_region(const DiscreteSpace& space, const VertexSubset& piece, double r) {
  const auto& dist = space.base_distances();
  for (int v : piece)
    for (const auto& nb : space.neighbors(v))
      if (dist[static_cast<std::size_t>(nb.to)] >= r) return true;
  return false;
}

bool region_nonempty_at_or_beyond(const DiscreteSpace& space, double r) {
  const auto& dist = space.base_distances();
  for (int v = 0; v < space.vertex_count(); ++v)
    if (dist[static_cast<std::size_t>(v)] >= r) return true;
  return false;
}

}  // namespace

std::vector<KappaScan> kappa_scan(const DiscreteSpace& space, int levels, double cap) {
  if (levels < 3) throw Error(ErrorCode::Precondition, "kappa scan needs at least 3 levels");
  std::vector<double> candidates;
  for (int k = 1; k <= 48; ++k) {
    double c = std::pow(2.0, k / 4.0);
    if (c > cap) break;
    candidates.push_back(c);
  }
  if (candidates.empty()) throw Error(ErrorCode::NoValidKappa, "candidate grid empty under cap");

  const double h_max = space.max_edge_length();
  const double d_max = space.diameter_estimate();
  const auto& dist = space.base_distances();

  std::vector<KappaScan> scans;
  for (double kappa : candidates) {
    KappaScan scan;
    scan.kappa = kappa;
    scan.kappa0 = kappa * kappa;
    scan.ok = true;

    double r = std::max(2.0 * h_max, 4.0 * space.min_edge_length());
    for (int lev = 0; lev < levels && kappa * r <= d_max; ++lev, r *= kappa) {
      KappaPairStats st;
      st.radius = r;
      VertexSubset narrow = annulus(space, r, kappa * r);
      if (narrow.empty()) continue;
      VertexSubset wide = annulus(space, r / kappa, kappa * r);
      auto narrow_comps = connected_components(space, narrow);
      auto wide_comps = connected_components(space, wide);
      st.narrow_components = static_cast<int>(narrow_comps.size());

      // locate each narrow component inside its wide component
      std::vector<int> wide_of(narrow_comps.size(), -1);
      for (std::size_t a = 0; a < narrow_comps.size(); ++a) {
        int rep = narrow_comps[a].ids().front();
        for (std::size_t w = 0; w < wide_comps.size(); ++w)
          if (wide_comps[w].contains(rep)) {
            wide_of[a] = static_cast<int>(w);
            break;
          }
      }
      for (std::size_t a = 0; a < narrow_comps.size(); ++a)
        for (std::size_t b = a + 1; b < narrow_comps.size(); ++b)
          (wide_of[a] == wide_of[b] ? st.merged_pairs : st.split_pairs)++;

      // a component that misses the outer region must attach to the inside
      bool outer_exists = region_nonempty_at_or_beyond(space, kappa * r);
      for (const auto& comp : narrow_comps) {
        if (outer_exists && !touches_outer_region(space, comp, kappa * r)) {
          ++st.pockets;
          bool attached = false;
          for (int v : comp) {
            for (const auto& nb : space.neighbors(v))
              if (dist[static_cast<std::size_t>(nb.to)] < r) {
                attached = true;
                break;
              }
            if (attached) break;
          }
          if (attached)
            ++st.pockets_attached;
          else
            scan.ok = false;
        }
      }
      scan.rows.push_back(st);
    }
    scans.push_back(std::move(scan));
  }
  return scans;
}

double kappa_search(const DiscreteSpace& space, int levels, double cap) {
  auto scans = kappa_scan(space, levels, cap);
  for (const auto& scan : scans)
    if (scan.ok) return scan.kappa;
  throw Error(ErrorCode::NoValidKappa, "no admissible kappa under the cap");
}

GoodCovering build_good_covering(const DiscreteSpace& space, double kappa,
                                 const WeightedMeasure& weighted) {
  if (!(kappa > 1.0)) throw Error(ErrorCode::Precondition, "kappa must exceed 1");
  if (static_cast<int>(weighted.mu.size()) != space.vertex_count())
    throw Error(ErrorCode::Precondition, "weighted measure does not match the space");

  GoodCovering cov;
  cov.kappa = kappa;
  cov.kappa0 = kappa * kappa;
  cov.base_radius = 2.0 * space.max_edge_length();

  const auto& dist = space.base_distances();
  double d_max = 0.0;
  for (double d : dist) d_max = std::max(d_max, d);

  int top = 0;
  while (cov.base_radius * std::pow(kappa, top) <= d_max) ++top;
  cov.min_level = 0;
  cov.max_level = top;
  if (top + 1 < 4)
    throw Error(ErrorCode::TooFewLevels,
                "covering needs at least 4 levels, got " + std::to_string(top + 1), top + 1);

  // Level 0 is the core ball; levels i >= 1 are annulus components.
  struct WorkPiece {
    int level;
    std::vector<int> verts;
    std::optional<std::pair<int, int>> glued_from;
  };
  std::vector<WorkPiece> work;
  {
    VertexSubset core = annulus(space, 0.0, cov.base_radius);
    if (core.empty()) throw Error(ErrorCode::Precondition, "core ball is empty");
    work.push_back({0, core.ids(), std::nullopt});
  }
  cov.components_per_level.assign(static_cast<std::size_t>(top + 1), 0);
  cov.components_per_level[0] = 1;
  for (int lev = 1; lev <= top; ++lev) {
    VertexSubset ring = annulus(space, cov.level_radius(lev - 1), cov.level_radius(lev));
    auto comps = connected_components(space, ring);
    cov.components_per_level[static_cast<std::size_t>(lev)] = static_cast<int>(comps.size());
    for (auto& c : comps) work.push_back({lev, c.ids(), std::nullopt});
  }

  // Gluing pass, outermost level first. A piece that does not reach the
  // region at or beyond its outer radius is merged into the touching
  // lower-level piece of largest mass. The test is skipped when nothing
  // lies beyond the radius (truncation edge).
  std::vector<char> dead(work.size(), 0);
  for (int lev = top; lev >= 1; --lev) {
    double r_out = cov.level_radius(lev);
    if (!region_nonempty_at_or_beyond(space, r_out)) continue;
    for (std::size_t p = 0; p < work.size(); ++p) {
      if (dead[p] || work[p].level != lev) continue;
      VertexSubset piece = VertexSubset::from_unsorted(work[p].verts);
      if (touches_outer_region(space, piece, r_out)) continue;

      // candidates: live level-(lev-1) pieces joined to this one by an edge
      std::vector<std::size_t> candidates;
      for (std::size_t q = 0; q < work.size(); ++q) {
        if (dead[q] || work[q].level != lev - 1) continue;
        VertexSubset other = VertexSubset::from_unsorted(work[q].verts);
        bool touch = false;
        for (int v : piece.ids()) {
          for (const auto& nb : space.neighbors(v))
            if (other.contains(nb.to)) {
              touch = true;
              break;
            }
          if (touch) break;
        }
        if (touch) candidates.push_back(q);
      }
      if (candidates.empty())
        throw Error(ErrorCode::KappaTooSmall,
                    "piece at level " + std::to_string(lev) + " has no adjacent lower piece");
      std::size_t best = candidates.front();
      double best_mass = -1.0;
      for (std::size_t q : candidates) {
        double mq = 0.0;
        for (int v : work[q].verts) mq += space.measure(v);
        if (mq > best_mass) {
          best_mass = mq;
          best = q;
        }
      }
      GluingEvent ev;
      ev.from_level = lev;
      ev.from_index = static_cast<int>(p);
      ev.into_level = lev - 1;
      ev.into_index = static_cast<int>(best);
      ev.candidate_count = static_cast<int>(candidates.size());
      cov.gluing_log.push_back(ev);
      auto& target = work[best].verts;
      target.insert(target.end(), work[p].verts.begin(), work[p].verts.end());
      work[best].glued_from = std::make_pair(lev, static_cast<int>(p));
      dead[p] = 1;
    }
  }

  // Final pieces, then enlargements from the touch relation.
  std::vector<std::size_t> live;
  for (std::size_t p = 0; p < work.size(); ++p)
    if (!dead[p]) live.push_back(p);

  const int n_pieces = static_cast<int>(live.size());
  std::vector<int> piece_of(static_cast<std::size_t>(space.vertex_count()), -1);
  std::vector<int> level_index(static_cast<std::size_t>(top + 1), 0);
  cov.pieces.resize(static_cast<std::size_t>(n_pieces));
  for (int i = 0; i < n_pieces; ++i) {
    auto& wp = work[live[static_cast<std::size_t>(i)]];
    auto& piece = cov.pieces[static_cast<std::size_t>(i)];
    piece.level = wp.level;
    piece.index = level_index[static_cast<std::size_t>(wp.level)]++;
    piece.U = VertexSubset::from_unsorted(wp.verts);
    piece.glued_from = wp.glued_from;
    piece.boundary_level = (wp.level == cov.min_level || wp.level == cov.max_level);
    for (int v : piece.U) piece_of[static_cast<std::size_t>(v)] = i;
  }

  std::vector<std::set<int>> adj(static_cast<std::size_t>(n_pieces));
  for (const auto& e : space.edges()) {
    int a = piece_of[static_cast<std::size_t>(e.u)];
    int b = piece_of[static_cast<std::size_t>(e.v)];
    if (a < 0 || b < 0 || a == b) continue;
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  }

  std::vector<std::set<int>> star_sets(static_cast<std::size_t>(n_pieces));
  for (int i = 0; i < n_pieces; ++i) {
    star_sets[static_cast<std::size_t>(i)].insert(i);
    for (int j : adj[static_cast<std::size_t>(i)]) star_sets[static_cast<std::size_t>(i)].insert(j);
  }
  // star-level touching: shared piece or an edge between the two unions
  auto stars_touch = [&](int i, int j) {
    const auto& a = star_sets[static_cast<std::size_t>(i)];
    const auto& b = star_sets[static_cast<std::size_t>(j)];
    for (int p : a)
      if (b.count(p)) return true;
    for (int p : a)
      for (int q : adj[static_cast<std::size_t>(p)])
        if (b.count(q)) return true;
    return false;
  };

  for (int i = 0; i < n_pieces; ++i) {
    std::vector<int> star_verts;
    for (int j : star_sets[static_cast<std::size_t>(i)])
      star_verts.insert(star_verts.end(), cov.pieces[static_cast<std::size_t>(j)].U.ids().begin(),
                        cov.pieces[static_cast<std::size_t>(j)].U.ids().end());
    cov.pieces[static_cast<std::size_t>(i)].U_star = VertexSubset::from_unsorted(std::move(star_verts));
  }
  for (int i = 0; i < n_pieces; ++i) {
    std::set<int> sharp_pieces;
    for (int j = 0; j < n_pieces; ++j)
      if (stars_touch(i, j))
        sharp_pieces.insert(star_sets[static_cast<std::size_t>(j)].begin(),
                            star_sets[static_cast<std::size_t>(j)].end());
    std::vector<int> sharp_verts;
    for (int j : sharp_pieces)
      sharp_verts.insert(sharp_verts.end(), cov.pieces[static_cast<std::size_t>(j)].U.ids().begin(),
                         cov.pieces[static_cast<std::size_t>(j)].U.ids().end());
    cov.pieces[static_cast<std::size_t>(i)].U_sharp = VertexSubset::from_unsorted(std::move(sharp_verts));
  }

  {
    std::vector<int> covered;
    for (int v = 0; v < space.vertex_count(); ++v)
      if (piece_of[static_cast<std::size_t>(v)] >= 0) covered.push_back(v);
    cov.covered_region = VertexSubset(std::move(covered));
  }

  auto validation = validate_good_covering(space, cov, weighted.mu, space.measures());
  cov.q1 = validation.q1;
  cov.q2 = validation.q2;
  cov.exceptional_measure_m1 = validation.exceptional_m1;
  cov.exceptional_measure_m2 = validation.exceptional_m2;
  return cov;
}

CoveringValidation validate_good_covering(const DiscreteSpace& space, const GoodCovering& cov,
                                          const std::vector<double>& m1,
                                          const std::vector<double>& m2) {
  CoveringValidation out;
  const int n = static_cast<int>(cov.pieces.size());

  for (const auto& piece : cov.pieces) {
    if (!piece.U.is_subset_of(piece.U_star) || !piece.U_star.is_subset_of(piece.U_sharp))
      out.nesting_ok = false;
    if (piece.U.empty()) out.measures_ok = false;
    for (const auto* m : {&m1, &m2}) {
      double a = subset_mass(piece.U, *m);
      double b = subset_mass(piece.U_star, *m);
      double c = subset_mass(piece.U_sharp, *m);
      if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !std::isfinite(c)) out.measures_ok = false;
    }
  }

  // Coverage: the target region minus the union of pieces must be null.
  {
    std::vector<char> hit(static_cast<std::size_t>(space.vertex_count()), 0);
    for (const auto& piece : cov.pieces)
      for (int v : piece.U) hit[static_cast<std::size_t>(v)] = 1;
    for (int v : cov.covered_region) {
      if (!hit[static_cast<std::size_t>(v)]) {
        out.exceptional_m1 += m1[static_cast<std::size_t>(v)];
        out.exceptional_m2 += m2[static_cast<std::size_t>(v)];
      }
    }
    out.coverage_ok = out.exceptional_m1 == 0.0 && out.exceptional_m2 == 0.0;
  }

  // Touch relation over the U sets: shared vertex or connecting edge.
  std::vector<std::vector<int>> pieces_at_vertex(static_cast<std::size_t>(space.vertex_count()));
  for (int i = 0; i < n; ++i)
    for (int v : cov.pieces[static_cast<std::size_t>(i)].U)
      pieces_at_vertex[static_cast<std::size_t>(v)].push_back(i);

  std::set<std::pair<int, int>> touching;
  for (int i = 0; i < n; ++i) touching.insert({i, i});
  for (int v = 0; v < space.vertex_count(); ++v) {
    const auto& here = pieces_at_vertex[static_cast<std::size_t>(v)];
    for (std::size_t a = 0; a < here.size(); ++a)
      for (std::size_t b = a + 1; b < here.size(); ++b)
        touching.insert({std::min(here[a], here[b]), std::max(here[a], here[b])});
  }
  for (const auto& e : space.edges()) {
    const auto& pu = pieces_at_vertex[static_cast<std::size_t>(e.u)];
    const auto& pv = pieces_at_vertex[static_cast<std::size_t>(e.v)];
    for (int a : pu)
      for (int b : pv)
        if (a != b) touching.insert({std::min(a, b), std::max(a, b)});
  }
  out.touching_pairs = static_cast<int>(touching.size());

  // Overlap count Q1 from pairwise intersections of the U# sets, found
  // through shared vertices rather than pairwise set scans.
  {
    std::vector<std::vector<int>> sharp_at_vertex(static_cast<std::size_t>(space.vertex_count()));
    for (int i = 0; i < n; ++i)
      for (int v : cov.pieces[static_cast<std::size_t>(i)].U_sharp)
        sharp_at_vertex[static_cast<std::size_t>(v)].push_back(i);
    std::vector<char> meet(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (int v = 0; v < space.vertex_count(); ++v) {
      const auto& here = sharp_at_vertex[static_cast<std::size_t>(v)];
      for (std::size_t a = 0; a < here.size(); ++a)
        for (std::size_t b = a; b < here.size(); ++b) {
          meet[static_cast<std::size_t>(here[a]) * n + here[b]] = 1;
          meet[static_cast<std::size_t>(here[b]) * n + here[a]] = 1;
        }
    }
    out.q1 = 0;
    for (int i = 0; i < n; ++i) {
      int count = 0;
      for (int j = 0; j < n; ++j) count += meet[static_cast<std::size_t>(i) * n + j];
      out.q1 = std::max(out.q1, count);
    }
  }

  // Embracing piece and measure control for every touching pair.
  std::vector<double> star_mass2(static_cast<std::size_t>(n));
  std::vector<double> mass2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    star_mass2[static_cast<std::size_t>(i)] =
        subset_mass(cov.pieces[static_cast<std::size_t>(i)].U_star, m2);
    mass2[static_cast<std::size_t>(i)] = subset_mass(cov.pieces[static_cast<std::size_t>(i)].U, m2);
  }
  std::vector<std::vector<int>> star_at_vertex(static_cast<std::size_t>(space.vertex_count()));
  for (int i = 0; i < n; ++i)
    for (int v : cov.pieces[static_cast<std::size_t>(i)].U_star)
      star_at_vertex[static_cast<std::size_t>(v)].push_back(i);

  out.q2 = 0.0;
  for (const auto& [i, j] : touching) {
    VertexSubset pair_union =
        cov.pieces[static_cast<std::size_t>(i)].U.set_union(cov.pieces[static_cast<std::size_t>(j)].U);
    int best = -1;
    // only pieces whose star contains the first union vertex can embrace
    for (int k : star_at_vertex[static_cast<std::size_t>(pair_union.ids().front())]) {
      if (!pair_union.is_subset_of(cov.pieces[static_cast<std::size_t>(k)].U_star)) continue;
      if (best < 0 || star_mass2[static_cast<std::size_t>(k)] < star_mass2[static_cast<std::size_t>(best)])
        best = k;
    }
    if (best < 0) {
      out.embracing_ok = false;
      out.embracing_violations.emplace_back(i, j);
      continue;
    }
    out.k_map.push_back({i, j, best});
    double denom = std::min(mass2[static_cast<std::size_t>(i)], mass2[static_cast<std::size_t>(j)]);
    out.q2 = std::max(out.q2, star_mass2[static_cast<std::size_t>(best)] / denom);
  }
  return out;
}

GoodCovering lattice_covering(const DiscreteSpace& space, const VertexSubset& subset, double delta,
                              double big_r) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw Error(ErrorCode::Precondition, "delta must lie in (0, 1)");
  if (subset.empty()) throw Error(ErrorCode::Precondition, "subset is empty");
  if (connected_components(space, subset).size() != 1)
    throw Error(ErrorCode::Precondition, "subset must be connected");

  const double s = delta * big_r;
  VertexSubset lattice = s_lattice(space, subset, s);

  GoodCovering cov;
  cov.kappa = 0.0;
  cov.kappa0 = 0.0;
  cov.base_radius = s;
  cov.min_level = 0;
  cov.max_level = 0;
  cov.covered_region = subset;
  cov.components_per_level = {static_cast<int>(lattice.size())};

  int index = 0;
  for (int x : lattice) {
    CoveringPiece piece;
    piece.level = 0;
    piece.index = index++;
    piece.U = ball(space, x, s).members;
    piece.U_star = ball(space, x, 3.0 * s).members;
    piece.U_sharp = piece.U_star;
    cov.pieces.push_back(std::move(piece));
  }

  auto validation = validate_good_covering(space, cov, space.measures(), space.measures());
  cov.q1 = validation.q1;
  cov.q2 = validation.q2;
  cov.exceptional_measure_m1 = validation.exceptional_m1;
  cov.exceptional_measure_m2 = validation.exceptional_m2;
  return cov;
}

}  // namespace mmlab
