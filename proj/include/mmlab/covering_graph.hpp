#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmlab/covering.hpp"
#include "mmlab/space.hpp"

namespace mmlab {

/// Weighted graph of a covering: one vertex per piece, edges between
/// touching pieces, vertex weight = piece mass, edge weight = the larger
/// endpoint weight. `boundary` marks pieces where test functions vanish
/// (the truncation surrogate for the missing non-compact end).
struct CoveringGraph {
  struct Edge {
    int a = 0, b = 0;
    double weight = 0.0;
  };

  std::vector<double> nu;     // vertex weights
  std::vector<Edge> edges;    // undirected, a < b
  std::vector<char> boundary; // 1 = Dirichlet vertex
  std::vector<int> level;     // covering level per vertex (-1 if unknown)

  int size() const { return static_cast<int>(nu.size()); }
  int free_count() const;
  bool connected() const;
};

CoveringGraph canonical_graph(const DiscreteSpace& space, const GoodCovering& cov,
                              const std::vector<double>& m2);

/// Restriction to the listed vertices; edges with an endpoint outside are
/// dropped, boundary flags cleared.
CoveringGraph induced_subgraph(const CoveringGraph& graph, const std::vector<int>& keep);

enum class PoincareMethod { eigen, ratio_maximization, brute_force };

struct PoincareResult {
  double s_d = 0.0;
  double q = 2.0;
  PoincareMethod method = PoincareMethod::eigen;
  std::vector<double> witness;  // full-length vertex function
  double lambda = 0.0;          // generalized eigenvalue when method == eigen
  bool lower_bound_only = false;

  /// Ratio achieved by the stored witness; reproduces s_d by construction.
  double witness_ratio(const CoveringGraph& graph, bool neumann) const;
};

/// Best constant in the q-norm bound of a function by its edge increments,
/// over functions vanishing on the boundary set. Exact (eigenvalue) for
/// q = 2, through a dense solve on small graphs and shift-inverted power
/// iteration past `dense_cap` vertices; a certified lower bound from ratio
/// maximization otherwise, with exhaustive pattern enumeration when at
/// most 12 free vertices remain.
PoincareResult poincare_constant(const CoveringGraph& graph, double q, int dense_cap = 2000);

/// Mean-subtracted variant on the whole graph (no boundary needed); for
/// q = 2 this is the inverse square root of the spectral gap.
PoincareResult poincare_neumann_gap(const CoveringGraph& graph, double q, int dense_cap = 2000);

struct SubsetFamilySpec {
  enum class Kind { level_prefixes, all_subsets, random_sample };
  Kind kind = Kind::level_prefixes;
  int count = 0;  // random_sample size
  std::uint64_t seed = 1;
};

struct IsoperimetricResult {
  double constant = 0.0;
  std::vector<int> witness;  // members of the extremal subset
  int evaluated = 0;
};

/// Max over the subset family of nu(S) / nu(cut edges of S); subsets range
/// over free (non-boundary) vertices.
IsoperimetricResult isoperimetric_constant(const CoveringGraph& graph,
                                           const SubsetFamilySpec& family);

/// q-norm of f (mean-subtracted when neumann) over the edge-increment
/// q-norm; 0 when the increments vanish. The quantity the constants above
/// bound from above.
double graph_ratio(const CoveringGraph& graph, const std::vector<double>& f, double q,
                   bool neumann);

struct StructureReport {
  double h_bound = 0.0;        // components-per-annulus bound
  double degree_bound = 0.0;   // 2h
  int max_degree = 0;
  bool degree_ok = false;
  double ratio_bound = 0.0;
  double ratio_max = 1.0;      // worst adjacent vertex-weight ratio
  bool ratio_ok = false;
};

/// Degree and adjacent-weight-ratio bounds for graphs of annular coverings.
StructureReport structure_checks(const CoveringGraph& graph, double kappa, double dimension_bound,
                                 double c_d);

}  // namespace mmlab
