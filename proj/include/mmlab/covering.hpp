#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmlab/growth.hpp"
#include "mmlab/space.hpp"

namespace mmlab {

struct GluingEvent {
  int from_level = 0, from_index = 0;
  int into_level = 0, into_index = 0;
  int candidate_count = 0;  // touching lower pieces; >1 records the ambiguity
};

/// One covering piece with its two nested enlargements. The sets satisfy
/// U <= U* <= U# by construction.
struct CoveringPiece {
  int level = 0;
  int index = 0;
  VertexSubset U, U_star, U_sharp;
  std::optional<std::pair<int, int>> glued_from;
  bool boundary_level = false;
};

/// Leveled covering of a ball around the base point by a core ball and
/// annulus components, after small pieces were glued one level down.
struct GoodCovering {
  std::vector<CoveringPiece> pieces;
  double kappa = 0.0;
  double kappa0 = 0.0;
  double base_radius = 0.0;  // radii are base_radius * kappa^level
  int min_level = 0, max_level = 0;
  int q1 = 0;
  double q2 = 0.0;
  double exceptional_measure_m1 = 0.0;
  double exceptional_measure_m2 = 0.0;
  VertexSubset covered_region;
  std::vector<GluingEvent> gluing_log;
  std::vector<int> components_per_level;  // before gluing

  double level_radius(int level) const;
  /// Pieces outside the innermost and outermost levels; the usual targets
  /// of inequality verification.
  std::vector<int> interior_pieces() const;
  /// Pieces outside the outermost level(s); free vertices of the graph.
  std::vector<int> non_outer_pieces() const;
};

struct KappaPairStats {
  double radius = 0.0;
  int narrow_components = 0;
  int merged_pairs = 0;
  int split_pairs = 0;  // pairs sitting in distinct wide components (vacuous)
  int pockets = 0;      // narrow components missing the outer region
  int pockets_attached = 0;
};

struct KappaScan {
  double kappa = 0.0;
  double kappa0 = 0.0;
  bool ok = false;
  std::vector<KappaPairStats> rows;
};

/// Scans a geometric candidate grid and returns the smallest kappa whose
/// annulus-component structure is admissible at every tested radius: each
/// pair of components of B_{kR} \ B_R either lies in one component of the
/// wider annulus B_{kR} \ B_{R/k} (merged) or in two of them (in which
/// case no connection requirement applies), and every component that
/// misses the outer region attaches to the inside, so it can be glued.
double kappa_search(const DiscreteSpace& space, int levels, double cap = 8.0);
std::vector<KappaScan> kappa_scan(const DiscreteSpace& space, int levels, double cap = 8.0);

/// Builds the leveled covering: core ball plus annulus components with
/// radii base_radius * kappa^i, gluing any piece that misses its outer
/// shell into the adjacent lower-level piece of largest mass.
GoodCovering build_good_covering(const DiscreteSpace& space, double kappa,
                                 const WeightedMeasure& weighted);

struct CoveringValidation {
  bool nesting_ok = true;
  bool coverage_ok = true;
  bool measures_ok = true;
  bool embracing_ok = true;
  int q1 = 0;
  double q2 = 0.0;
  double exceptional_m1 = 0.0;
  double exceptional_m2 = 0.0;
  int touching_pairs = 0;
  std::vector<std::pair<int, int>> embracing_violations;
  std::vector<std::array<int, 3>> k_map;  // (i, j, k(i,j))

  bool all_ok() const {
    return nesting_ok && coverage_ok && measures_ok && embracing_ok;
  }
};

/// Checks the five covering conditions exactly: nesting, coverage up to a
/// null set, bounded overlap (Q1), an embracing piece for every touching
/// pair, and the measure control ratio (Q2).
CoveringValidation validate_good_covering(const DiscreteSpace& space, const GoodCovering& cov,
                                          const std::vector<double>& m1,
                                          const std::vector<double>& m2);

/// Ball covering of a connected subset from an s-lattice with s = delta R:
/// pieces are s-balls, both enlargements the concentric 3s-balls. Checked
/// against (m, m).
GoodCovering lattice_covering(const DiscreteSpace& space, const VertexSubset& subset, double delta,
                              double big_r);

/// Component bound (8 kappa / (kappa - 1))^N used by the covering and
/// graph structure checks.
double components_per_annulus_bound(double kappa, double dimension_bound);

}  // namespace mmlab
