#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmlab/errors.hpp"

namespace mmlab {

/// Per-vertex real field (function samples, gradients, heat states).
using ScalarField = std::vector<double>;

bool all_finite(const ScalarField& f);

/// Sorted set of distinct vertex indices. Used for balls, shells, annuli,
/// covering pieces and cut sets.
class VertexSubset {
 public:
  VertexSubset() = default;
  explicit VertexSubset(std::vector<int> sorted_unique);
  static VertexSubset from_unsorted(std::vector<int> ids);

  bool contains(int v) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<int>& ids() const { return ids_; }

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  VertexSubset set_union(const VertexSubset& other) const;
  VertexSubset set_difference(const VertexSubset& other) const;
  bool intersects(const VertexSubset& other) const;
  bool is_subset_of(const VertexSubset& other) const;

  bool operator==(const VertexSubset& other) const { return ids_ == other.ids_; }

 private:
  std::vector<int> ids_;
};

struct SpaceEdge {
  int u, v;
  double length;
};

/// Finite geodesic graph surrogate of a metric measure space: vertices
/// carry positive masses, edges positive lengths, the metric is the
/// shortest-path distance. Immutable after construction; all queries are
/// read-only and safe to run concurrently.
class DiscreteSpace {
 public:
  class Builder {
   public:
    int add_vertex(std::vector<double> coords, double measure);
    void add_edge(int u, int v, double length);
    void set_base_point(int v) { base_point_ = v; }
    void set_dimension_bound(double n) { dimension_bound_ = n; }
    DiscreteSpace build() &&;

   private:
    friend class DiscreteSpace;
    std::vector<std::vector<double>> coords_;
    std::vector<double> measures_;
    std::vector<SpaceEdge> edges_;
    int base_point_ = 0;
    double dimension_bound_ = 2.0;
  };

  int vertex_count() const { return static_cast<int>(measures_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  double measure(int v) const { return measures_[static_cast<std::size_t>(v)]; }
  const std::vector<double>& measures() const { return measures_; }
  double total_measure() const { return total_measure_; }
  std::span<const double> coords(int v) const;
  int coord_dim() const { return coord_dim_; }
  int base_point() const { return base_point_; }
  double dimension_bound() const { return dimension_bound_; }
  const std::vector<SpaceEdge>& edges() const { return edges_; }

  struct Neighbor {
    int to;
    double length;
    int edge_id;
  };
  std::span<const Neighbor> neighbors(int v) const;

  double min_edge_length() const { return min_edge_length_; }
  double max_edge_length() const { return max_edge_length_; }
  /// Longest edge incident to v (discrete shell thickness at v).
  double max_incident_edge(int v) const { return max_incident_[static_cast<std::size_t>(v)]; }

  /// Exact shortest-path distances from a source, optionally truncated:
  /// entries beyond `cutoff` are +inf.
  std::vector<double> distances_from(int source,
                                     double cutoff = std::numeric_limits<double>::infinity()) const;

  /// Cached distances from the base point.
  const std::vector<double>& base_distances() const;

  /// Lower bound on the diameter from a two-sweep search; exact on trees,
  /// close enough on grids to size radius windows.
  double diameter_estimate() const;

  void check_vertex(int v, const char* what) const;

 private:
  DiscreteSpace() = default;

  std::vector<std::vector<double>> coords_store_;
  int coord_dim_ = 0;
  std::vector<double> measures_;
  std::vector<SpaceEdge> edges_;
  std::vector<Neighbor> adjacency_;
  std::vector<int> adjacency_offsets_;
  std::vector<double> max_incident_;
  int base_point_ = 0;
  double dimension_bound_ = 2.0;
  double total_measure_ = 0.0;
  double min_edge_length_ = 0.0;
  double max_edge_length_ = 0.0;
  mutable std::vector<double> base_distances_;  // filled in build()
  mutable double diameter_estimate_ = -1.0;
};

/// Open metric ball {y : d(center, y) < r} together with its total measure.
struct Ball {
  VertexSubset members;
  double measure;
};

Ball ball(const DiscreteSpace& space, int center, double r);

/// Measure of the open ball only (no member list).
double ball_measure(const DiscreteSpace& space, int center, double r);

/// One-edge-thick discrete shell {y : r <= d(center,y) < r + h(y)} where
/// h(y) is the longest edge incident to y. Stands in for the sphere S_r,
/// which is generically empty on a graph.
VertexSubset sphere_shell(const DiscreteSpace& space, int center, double r);

/// Maximal edge-connected classes of the subgraph induced on `subset`.
std::vector<VertexSubset> connected_components(const DiscreteSpace& space,
                                               const VertexSubset& subset);

/// Discrete upper-gradient surrogate: g(x) = max over neighbors y of
/// |u(x) - u(y)| / len(x,y). Dominates increments along every edge path.
ScalarField local_slope(const DiscreteSpace& space, const ScalarField& u);

/// Greedy maximal s-separated subset of `subset`: pairwise distances >= s,
/// and every vertex of `subset` within s of some selected point.
VertexSubset s_lattice(const DiscreteSpace& space, const VertexSubset& subset, double s);

}  // namespace mmlab
