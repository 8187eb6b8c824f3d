#include "mmlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlab/parallel.hpp"
#include "mmlab/quadrature.hpp"
#include "mmlab/space_io.hpp"

namespace mmlab {

namespace {

constexpr double kPoleDetectRel = 1e-9;

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

}  // namespace

void SpaceSpec::validate() const {
  switch (generator) {
    case Generator::euclidean_grid:
    case Generator::radial_density:
      if (dim < 1 || dim > 3)
        throw Error(ErrorCode::BadDimension, "grid dimension must be 1, 2 or 3", dim);
      if (!(spacing > 0.0)) throw Error(ErrorCode::Precondition, "spacing must be positive");
      if (!(extent > 0.0)) throw Error(ErrorCode::Precondition, "extent must be positive");
      if (!(spacing < extent))
        throw Error(ErrorCode::Precondition, "spacing must be smaller than extent");
      if (generator == Generator::radial_density && !(density_exponent > 1.0))
        throw Error(ErrorCode::Precondition, "radial density exponent must exceed 1");
      break;
    case Generator::hattori:
      if (!(alpha > 1.0)) throw Error(ErrorCode::Precondition, "alpha must exceed 1");
      if (!(spacing > 0.0) || !(extent > 0.0) || !(quad_tol > 0.0))
        throw Error(ErrorCode::Precondition, "bad hattori parameters");
      break;
    case Generator::file:
      if (path.empty()) throw Error(ErrorCode::Precondition, "file generator needs a path");
      break;
    case Generator::explicit_lists:
      if (vertex_measures.empty())
        throw Error(ErrorCode::Precondition, "explicit spec has no vertices");
      break;
  }
}

std::vector<std::vector<int>> stencil_directions(int n, SpaceSpec::Stencil stencil) {
  std::vector<std::vector<int>> dirs;
  if (n == 1) {
    dirs.push_back({1});
    return dirs;
  }
  if (stencil == SpaceSpec::Stencil::axis) {
    for (int k = 0; k < n; ++k) {
      std::vector<int> v(static_cast<std::size_t>(n), 0);
      v[static_cast<std::size_t>(k)] = 1;
      dirs.push_back(std::move(v));
    }
    return dirs;
  }
  if (n == 2) {
    // 16 directions up to sign; inscribed norm ball covers ~99% of the disc.
    const int raw[16][2] = {{1, 0},  {0, 1},  {1, 1},  {1, -1}, {2, 1},  {1, 2},
                            {2, -1}, {1, -2}, {3, 1},  {1, 3},  {3, -1}, {1, -3},
                            {3, 2},  {2, 3},  {3, -2}, {2, -3}};
    for (const auto& r : raw) dirs.push_back({r[0], r[1]});
    return dirs;
  }
  // n == 3: all of {-1,0,1}^3 up to sign (6 axis + 12 face + 8 body diagonals).
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        // keep one representative per +- pair: first nonzero positive
        if (a < 0 || (a == 0 && (b < 0 || (b == 0 && c < 0)))) continue;
        dirs.push_back({a, b, c});
      }
  return dirs;
}

namespace {

struct GridIndexer {
  int n;
  int k_max;
  int side;

  long long flat(const std::vector<int>& idx) const {
    long long f = 0;
    for (int d = 0; d < n; ++d) f = f * side + (idx[static_cast<std::size_t>(d)] + k_max);
    return f;
  }
  bool in_range(const std::vector<int>& idx) const {
    for (int d = 0; d < n; ++d)
      if (idx[static_cast<std::size_t>(d)] < -k_max || idx[static_cast<std::size_t>(d)] > k_max)
        return false;
    return true;
  }
};

DiscreteSpace build_grid(const SpaceSpec& spec) {
  const int n = spec.dim;
  const double h = spec.spacing;
  const int k_max = static_cast<int>(std::llround(spec.extent / h));
  const double eta = spec.density_exponent;
  GridIndexer ix{n, k_max, 2 * k_max + 1};

  long long count = 1;
  for (int d = 0; d < n; ++d) count *= ix.side;

  DiscreteSpace::Builder b;
  std::vector<int> idx(static_cast<std::size_t>(n), -k_max);
  const double cell = std::pow(h, n);
  for (long long v = 0; v < count; ++v) {
    std::vector<double> coords(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) coords[static_cast<std::size_t>(d)] = h * idx[static_cast<std::size_t>(d)];
    double r = norm2(coords);
    double mass = cell * std::pow(1.0 + r, eta - n);
    b.add_vertex(std::move(coords), mass);
    // odometer increment, last coordinate fastest
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] <= k_max) break;
      idx[static_cast<std::size_t>(d)] = -k_max;
    }
  }

  const auto dirs = stencil_directions(n, spec.stencil);
  std::vector<int> cur(static_cast<std::size_t>(n), -k_max);
  for (long long v = 0; v < count; ++v) {
    for (const auto& dir : dirs) {
      std::vector<int> other = cur;
      for (int d = 0; d < n; ++d) other[static_cast<std::size_t>(d)] += dir[static_cast<std::size_t>(d)];
      if (!ix.in_range(other)) continue;
      double len2 = 0.0;
      for (int c : dir) len2 += static_cast<double>(c) * c;
      b.add_edge(static_cast<int>(v), static_cast<int>(ix.flat(other)), h * std::sqrt(len2));
    }
    for (int d = n - 1; d >= 0; --d) {
      if (++cur[static_cast<std::size_t>(d)] <= k_max) break;
      cur[static_cast<std::size_t>(d)] = -k_max;
    }
  }

  std::vector<int> origin(static_cast<std::size_t>(n), 0);
  b.set_base_point(static_cast<int>(ix.flat(origin)));
  double n_default = std::max(static_cast<double>(n), eta);
  if (!(n_default > 1.0)) n_default = 2.0;  // any upper bound works for the line
  b.set_dimension_bound(spec.dimension_bound.value_or(n_default));
  return std::move(b).build();
}

}  // namespace

double distance_to_singular_ray(const std::array<double, 3>& x) {
  double rho = std::hypot(x[1], x[2]);
  if (x[0] >= 0.0) return rho;
  return std::sqrt(x[0] * x[0] + rho * rho);
}

double hattori_conformal_factor(const std::array<double, 3>& x, double alpha, double tol) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::Precondition, "alpha must exceed 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::Precondition, "tolerance must be positive");

  const double x1 = x[0];
  const double rho = std::hypot(x[1], x[2]);
  const double r = std::sqrt(x1 * x1 + rho * rho);
  if (r == 0.0)
    throw Error(ErrorCode::SingularPoint, "the integrand t^-alpha diverges at the origin");
  if (x1 > 0.0 && rho <= kPoleDetectRel * std::max(1.0, r))
    throw Error(ErrorCode::SingularPoint, "point lies on the singular ray");

  auto integrand = [&](double t) {
    double ta = std::pow(t, alpha);
    double dx = x1 - ta;
    return 1.0 / std::sqrt(dx * dx + rho * rho);
  };

  // The pole candidate sits where t^alpha = x1.
  double t_pole = x1 > 0.0 ? std::pow(x1, 1.0 / alpha) : 0.0;
  double split = std::max({1.0, 2.0 * t_pole, std::pow(4.0 * r, 1.0 / alpha)});

  std::vector<double> seeds;
  if (t_pole > 0.0) {
    double slope = alpha * std::pow(t_pole, alpha - 1.0);
    double width = slope > 0.0 ? rho / slope : 0.0;
    seeds = {t_pole, t_pole - width, t_pole + width, t_pole - 10 * width, t_pole + 10 * width,
             t_pole - 1000 * width, t_pole + 1000 * width, 0.5 * t_pole, 1.5 * t_pole};
  }

  auto head = integrate_adaptive(integrand, 0.0, split, 0.25 * tol, 0.0, seeds, 20000);

  // Tail: with u = t^(1-alpha) the integrand becomes smooth and tends to
  // 1/(alpha-1) at u = 0, so plain adaptive quadrature finishes the job.
  const double q = alpha / (alpha - 1.0);
  auto tail_integrand = [&](double u) {
    if (u <= 0.0) return 1.0;
    double w = std::pow(u, q);  // = t^-alpha
    double a = 1.0 - x1 * w;
    double b2 = rho * w;
    return 1.0 / std::sqrt(a * a + b2 * b2);
  };
  double u_hi = std::pow(split, 1.0 - alpha);
  auto tail = integrate_adaptive(tail_integrand, 0.0, u_hi, 0.25 * tol, 0.0, {}, 4000);

  double value = head.value + tail.value / (alpha - 1.0);
  double err = head.abs_error + tail.abs_error / (alpha - 1.0);
  if (!(err <= tol * value))
    throw Error(ErrorCode::NonConvergedSolve, "conformal factor quadrature did not converge");
  return value;
}

namespace {

DiscreteSpace build_hattori(const SpaceSpec& spec) {
  const double h = spec.spacing;
  const double alpha = spec.alpha;
  const double tol = spec.quad_tol;
  const int k_max = static_cast<int>(std::llround(spec.extent / h));
  const int side = 2 * k_max + 1;
  const double tube = 2.0 * h;

  // Pass 1: keep lattice points clear of the singular ray.
  std::vector<int> id_of(static_cast<std::size_t>(side) * side * side, -1);
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<int, 3>> lattice;
  auto flat = [&](int i, int j, int k) {
    return (static_cast<long long>(i + k_max) * side + (j + k_max)) * side + (k + k_max);
  };
  for (int i = -k_max; i <= k_max; ++i)
    for (int j = -k_max; j <= k_max; ++j)
      for (int k = -k_max; k <= k_max; ++k) {
        std::array<double, 3> p{h * i, h * j, h * k};
        if (distance_to_singular_ray(p) <= tube) continue;
        id_of[static_cast<std::size_t>(flat(i, j, k))] = static_cast<int>(points.size());
        points.push_back(p);
        lattice.push_back({i, j, k});
      }
  if (points.empty())
    throw Error(ErrorCode::Disconnected, "exclusion tube removed every grid point");

  // Pass 2: conformal factor at vertices (concurrent, written by index).
  std::vector<double> f_vertex(points.size());
  parallel_for(points.size(), [&](std::size_t v) {
    f_vertex[v] = hattori_conformal_factor(points[v], alpha, tol);
  });

  const auto dirs = stencil_directions(3, SpaceSpec::Stencil::euclidean);
  struct RawEdge {
    int u, v;
    std::array<double, 3> mid;
    double step;
  };
  std::vector<RawEdge> raw;
  for (std::size_t u = 0; u < points.size(); ++u) {
    const auto& l = lattice[u];
    for (const auto& dir : dirs) {
      int i = l[0] + dir[0], j = l[1] + dir[1], k = l[2] + dir[2];
      if (std::abs(i) > k_max || std::abs(j) > k_max || std::abs(k) > k_max) continue;
      int v = id_of[static_cast<std::size_t>(flat(i, j, k))];
      if (v < 0) continue;
      std::array<double, 3> mid{0.5 * (points[u][0] + h * i), 0.5 * (points[u][1] + h * j),
                                0.5 * (points[u][2] + h * k)};
      double step =
          h * std::sqrt(static_cast<double>(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]));
      raw.push_back({static_cast<int>(u), v, mid, step});
    }
  }
  std::vector<double> edge_len(raw.size());
  parallel_for(raw.size(), [&](std::size_t e) {
    double fm = hattori_conformal_factor(raw[e].mid, alpha, tol);
    edge_len[e] = std::sqrt(fm) * raw[e].step;
  });

  DiscreteSpace::Builder b;
  const double cell = h * h * h;
  int base = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < points.size(); ++v) {
    double r = std::sqrt(points[v][0] * points[v][0] + points[v][1] * points[v][1] +
                         points[v][2] * points[v][2]);
    if (r < best) {
      best = r;
      base = static_cast<int>(v);
    }
    b.add_vertex({points[v][0], points[v][1], points[v][2]},
                 std::pow(f_vertex[v], 1.5) * cell);
  }
  for (std::size_t e = 0; e < raw.size(); ++e) b.add_edge(raw[e].u, raw[e].v, edge_len[e]);
  b.set_base_point(base);
  b.set_dimension_bound(spec.dimension_bound.value_or(4.0));
  return std::move(b).build();
}

}  // namespace

DiscreteSpace build_space(const SpaceSpec& spec) {
  spec.validate();
  switch (spec.generator) {
    case SpaceSpec::Generator::euclidean_grid:
    case SpaceSpec::Generator::radial_density:
      return build_grid(spec);
    case SpaceSpec::Generator::hattori:
      return build_hattori(spec);
    case SpaceSpec::Generator::file:
      return load_space(spec.path);
    case SpaceSpec::Generator::explicit_lists: {
      DiscreteSpace::Builder b;
      for (std::size_t i = 0; i < spec.vertex_measures.size(); ++i)
        b.add_vertex(spec.vertex_coords.empty() ? std::vector<double>{}
                                                : spec.vertex_coords[i],
                     spec.vertex_measures[i]);
      for (const auto& e : spec.edge_list) b.add_edge(e.u, e.v, e.length);
      b.set_base_point(spec.base_point);
      b.set_dimension_bound(spec.dimension_bound.value_or(2.0));
      return std::move(b).build();
    }
  }
  throw Error(ErrorCode::Precondition, "unknown generator");
}

SpaceSpec euclidean_grid(int n, double extent, double h, double density_exponent) {
  SpaceSpec s;
  s.generator = SpaceSpec::Generator::euclidean_grid;
  s.dim = n;
  s.extent = extent;
  s.spacing = h;
  s.density_exponent = density_exponent;
  s.stencil = SpaceSpec::Stencil::euclidean;
  s.validate();
  return s;
}

SpaceSpec radial_density(int n, double extent, double h, double eta) {
  SpaceSpec s = euclidean_grid(n, extent, h, eta);
  s.generator = SpaceSpec::Generator::radial_density;
  s.validate();
  return s;
}

SpaceSpec simple_grid(int n, double extent, double h) {
  SpaceSpec s;
  s.generator = SpaceSpec::Generator::euclidean_grid;
  s.dim = n;
  s.extent = extent;
  s.spacing = h;
  s.density_exponent = n;
  s.stencil = SpaceSpec::Stencil::axis;
  s.validate();
  return s;
}

SpaceSpec hattori_space(double alpha, double extent, double h) {
  SpaceSpec s;
  s.generator = SpaceSpec::Generator::hattori;
  s.dim = 3;
  s.extent = extent;
  s.spacing = h;
  s.alpha = alpha;
  s.validate();
  return s;
}

}  // namespace mmlab
