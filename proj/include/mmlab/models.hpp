#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mmlab/space.hpp"

namespace mmlab {

/// Recipe for a test space: a generator reference with parameters, an
/// explicit vertex/edge listing, or a file path.
struct SpaceSpec {
  enum class Generator { explicit_lists, euclidean_grid, radial_density, hattori, file };

  /// Neighbor stencil for grid generators. `axis` links nearest neighbors
  /// only; `euclidean` adds diagonal and knight-type steps so that the
  /// shortest-path metric tracks the Euclidean one within about 1%.
  enum class Stencil { axis, euclidean };

  Generator generator = Generator::explicit_lists;
  int dim = 2;
  double extent = 1.0;
  double spacing = 1.0;
  double density_exponent = 2.0;  // volume-growth exponent eta for grids
  double alpha = 2.0;             // conformal exponent, > 1
  double quad_tol = 1e-8;
  Stencil stencil = Stencil::euclidean;
  std::optional<double> dimension_bound;  // overrides the generator default

  std::string path;  // generator == file

  // generator == explicit_lists
  std::vector<std::vector<double>> vertex_coords;
  std::vector<double> vertex_measures;
  std::vector<SpaceEdge> edge_list;
  int base_point = 0;

  void validate() const;
};

DiscreteSpace build_space(const SpaceSpec& spec);

/// Grid on [-extent, extent]^n, spacing h, vertex mass h^n (1+|x|)^(eta-n).
/// With eta = n this is the unit-density grid.
SpaceSpec euclidean_grid(int n, double extent, double h, double density_exponent);

/// Same grid with a prescribed growth exponent; requires eta > 1.
SpaceSpec radial_density(int n, double extent, double h, double eta);

/// Nearest-neighbor unit-density grid (axis stencil).
SpaceSpec simple_grid(int n, double extent, double h);

/// Conformal factor f(x) of the singular metric f * g_e on R^3: the line
/// integral of 1/sqrt((x1 - t^alpha)^2 + x2^2 + x3^2) over t in (0, inf).
/// Throws SingularPoint at the origin and on the singular ray
/// {(t^alpha, 0, 0)} (within a relative detection tolerance of 1e-9).
double hattori_conformal_factor(const std::array<double, 3>& x, double alpha, double tol);

/// Grid approximation of the conformal space: a 3-d grid that excludes a
/// tube of radius 2h around the singular ray, with edge lengths
/// sqrt(f(midpoint)) |dx| and vertex masses f(x)^(3/2) h^3.
SpaceSpec hattori_space(double alpha, double extent, double h);

/// Euclidean distance from x to the singular ray {(s,0,0) : s >= 0}.
double distance_to_singular_ray(const std::array<double, 3>& x);

/// Signed step directions of the grid stencils, one representative per
/// +-pair, as integer lattice vectors.
std::vector<std::vector<int>> stencil_directions(int n, SpaceSpec::Stencil stencil);

}  // namespace mmlab
