#include "mmlab/covering_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace mmlab {

int CoveringGraph::free_count() const {
  int c = 0;
  for (char b : boundary)
    if (!b) ++c;
  return c;
}

bool CoveringGraph::connected() const {
  if (nu.empty()) return true;
  std::vector<int> parent(nu.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& e : edges) {
    int ra = find(e.a), rb = find(e.b);
    if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
  }
  int root = find(0);
  for (int i = 1; i < size(); ++i)
    if (find(i) != root) return false;
  return true;
}

CoveringGraph canonical_graph(const DiscreteSpace& space, const GoodCovering& cov,
                              const std::vector<double>& m2) {
  const int n = static_cast<int>(cov.pieces.size());
  CoveringGraph g;
  g.nu.resize(static_cast<std::size_t>(n));
  g.level.resize(static_cast<std::size_t>(n));
  g.boundary.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int v : cov.pieces[static_cast<std::size_t>(i)].U) mass += m2[static_cast<std::size_t>(v)];
    g.nu[static_cast<std::size_t>(i)] = mass;
    g.level[static_cast<std::size_t>(i)] = cov.pieces[static_cast<std::size_t>(i)].level;
    if (cov.pieces[static_cast<std::size_t>(i)].level == cov.max_level)
      g.boundary[static_cast<std::size_t>(i)] = 1;
  }

  // touching pieces: shared vertex or a connecting edge
  std::vector<std::vector<int>> at_vertex(static_cast<std::size_t>(space.vertex_count()));
  for (int i = 0; i < n; ++i)
    for (int v : cov.pieces[static_cast<std::size_t>(i)].U)
      at_vertex[static_cast<std::size_t>(v)].push_back(i);
  std::set<std::pair<int, int>> pairs;
  for (int v = 0; v < space.vertex_count(); ++v) {
    const auto& here = at_vertex[static_cast<std::size_t>(v)];
    for (std::size_t a = 0; a < here.size(); ++a)
      for (std::size_t b = a + 1; b < here.size(); ++b)
        pairs.insert({std::min(here[a], here[b]), std::max(here[a], here[b])});
  }
  for (const auto& e : space.edges()) {
    for (int a : at_vertex[static_cast<std::size_t>(e.u)])
      for (int b : at_vertex[static_cast<std::size_t>(e.v)])
        if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  }
  for (const auto& [a, b] : pairs)
    g.edges.push_back({a, b, std::max(g.nu[static_cast<std::size_t>(a)],
                                      g.nu[static_cast<std::size_t>(b)])});
  return g;
}

CoveringGraph induced_subgraph(const CoveringGraph& graph, const std::vector<int>& keep) {
  CoveringGraph out;
  std::vector<int> map(graph.nu.size(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    map[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
    out.nu.push_back(graph.nu[static_cast<std::size_t>(keep[i])]);
    out.level.push_back(graph.level[static_cast<std::size_t>(keep[i])]);
    out.boundary.push_back(0);
  }
  for (const auto& e : graph.edges) {
    int a = map[static_cast<std::size_t>(e.a)];
    int b = map[static_cast<std::size_t>(e.b)];
    if (a >= 0 && b >= 0) out.edges.push_back({std::min(a, b), std::max(a, b), e.weight});
  }
  return out;
}

namespace {

// q-norm ratio of f: ||f||_q,nu over the edge-increment q-norm. Boundary
// values are taken as stored in f (callers zero them for Dirichlet).
double ratio_q(const CoveringGraph& g, const std::vector<double>& f, double q, bool neumann) {
  std::vector<double> values = f;
  double f_scale = 0.0;
  for (double x : f) f_scale = std::max(f_scale, std::abs(x));
  if (neumann) {
    double mass = 0.0, mean = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      mass += g.nu[static_cast<std::size_t>(i)];
      mean += f[static_cast<std::size_t>(i)] * g.nu[static_cast<std::size_t>(i)];
    }
    mean /= mass;
    for (auto& x : values) x -= mean;
  }
  double num = 0.0;
  for (int i = 0; i < g.size(); ++i)
    num += std::pow(std::abs(values[static_cast<std::size_t>(i)]), q) *
           g.nu[static_cast<std::size_t>(i)];
  double den = 0.0;
  double max_increment = 0.0;
  for (const auto& e : g.edges) {
    double d = std::abs(f[static_cast<std::size_t>(e.a)] - f[static_cast<std::size_t>(e.b)]);
    max_increment = std::max(max_increment, d);
    den += std::pow(d, q) * e.weight;
  }
  if (den <= 0.0) return 0.0;
  // numerically constant functions leave rounding noise on both sides of
  // the mean-subtracted ratio; call that zero rather than noise/noise
  if (neumann && max_increment <= 1e-12 * f_scale) return 0.0;
  return std::pow(num / den, 1.0 / q);
}

struct EigenSetup {
  Eigen::MatrixXd energy;
  Eigen::VectorXd mass;
  std::vector<int> free_ids;
};

EigenSetup dirichlet_setup(const CoveringGraph& g) {
  EigenSetup s;
  std::vector<int> map(g.nu.size(), -1);
  for (int i = 0; i < g.size(); ++i)
    if (!g.boundary[static_cast<std::size_t>(i)]) {
      map[static_cast<std::size_t>(i)] = static_cast<int>(s.free_ids.size());
      s.free_ids.push_back(i);
    }
  const int m = static_cast<int>(s.free_ids.size());
  s.energy = Eigen::MatrixXd::Zero(m, m);
  s.mass = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k)
    s.mass(k) = g.nu[static_cast<std::size_t>(s.free_ids[static_cast<std::size_t>(k)])];
  for (const auto& e : g.edges) {
    int a = map[static_cast<std::size_t>(e.a)];
    int b = map[static_cast<std::size_t>(e.b)];
    if (a >= 0 && b >= 0) {
      s.energy(a, a) += e.weight;
      s.energy(b, b) += e.weight;
      s.energy(a, b) -= e.weight;
      s.energy(b, a) -= e.weight;
    } else if (a >= 0) {
      s.energy(a, a) += e.weight;  // fixed zero across the boundary edge
    } else if (b >= 0) {
      s.energy(b, b) += e.weight;
    }
  }
  return s;
}

// Shift-inverted power iteration for the smallest generalized eigenvalue
// of (L, D); rows/cols follow `free_ids`, with `deflate_constants` pinning
// the iterate D-orthogonal to the all-ones vector (spectral-gap mode).
// Deterministic all-ones start per the reproducibility convention.
std::pair<double, Eigen::VectorXd> smallest_pair_iterative(
    const std::vector<Eigen::Triplet<double>>& energy_trips, const Eigen::VectorXd& mass,
    bool deflate_constants) {
  const int m = static_cast<int>(mass.size());
  Eigen::SparseMatrix<double> energy(m, m);
  energy.setFromTriplets(energy_trips.begin(), energy_trips.end());

  double diag_scale = 0.0;
  for (int i = 0; i < m; ++i) diag_scale = std::max(diag_scale, energy.coeff(i, i));
  const double shift = deflate_constants ? 1e-10 * diag_scale : 0.0;
  Eigen::SparseMatrix<double> shifted = energy;
  if (shift > 0.0) {
    Eigen::SparseMatrix<double> d(m, m);
    std::vector<Eigen::Triplet<double>> dt;
    for (int i = 0; i < m; ++i) dt.emplace_back(i, i, shift * mass(i));
    d.setFromTriplets(dt.begin(), dt.end());
    shifted = energy + d;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergedSolve, "factorization of the energy form failed");

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  const double ones_mass = ones.dot(mass.asDiagonal() * ones);
  auto deflate = [&](Eigen::VectorXd& x) {
    if (!deflate_constants) return;
    double c = x.dot(mass.asDiagonal() * ones) / ones_mass;
    x -= c * ones;
  };

  Eigen::VectorXd x = ones;
  if (deflate_constants) {
    // all-ones is the deflated direction itself; tilt deterministically
    for (int i = 0; i < m; ++i) x(i) = 1.0 + static_cast<double>(i % 7) / 7.0;
  }
  deflate(x);
  x /= std::sqrt(x.dot(mass.asDiagonal() * x));

  double lambda_prev = -1.0;
  for (int iter = 0; iter < 500; ++iter) {
    Eigen::VectorXd y = solver.solve(mass.asDiagonal() * x);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::NonConvergedSolve, "inverse iteration solve failed");
    deflate(y);
    double norm = std::sqrt(y.dot(mass.asDiagonal() * y));
    if (!(norm > 0.0)) throw Error(ErrorCode::NonConvergedSolve, "iterate collapsed");
    x = y / norm;
    double num = x.dot(energy.selfadjointView<Eigen::Lower>() * x);
    double lambda = num / x.dot(mass.asDiagonal() * x);
    if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= 1e-14 * lambda) {
      return {lambda, x};
    }
    lambda_prev = lambda;
  }
  throw Error(ErrorCode::NonConvergedSolve, "inverse iteration did not settle");
}

std::vector<double> ascend_ratio(const CoveringGraph& g, std::vector<double> f, double q,
                                 bool neumann, const std::vector<char>& frozen) {
  // maximize log ||f||_q^q - log E_q(f) by gradient ascent with backtracking
  auto objective = [&](const std::vector<double>& x) {
    double r = ratio_q(g, x, q, neumann);
    return r > 0.0 ? std::log(r) : -1e308;
  };
  double best = objective(f);
  std::vector<double> grad(f.size());
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<double> centered = f;
    if (neumann) {
      double mass = 0.0, mean = 0.0;
      for (int i = 0; i < g.size(); ++i) {
        mass += g.nu[static_cast<std::size_t>(i)];
        mean += f[static_cast<std::size_t>(i)] * g.nu[static_cast<std::size_t>(i)];
      }
      mean /= mass;
      for (auto& x : centered) x -= mean;
    }
    double num_q = 0.0, den_q = 0.0;
    for (int i = 0; i < g.size(); ++i)
      num_q += std::pow(std::abs(centered[static_cast<std::size_t>(i)]), q) *
               g.nu[static_cast<std::size_t>(i)];
    for (const auto& e : g.edges)
      den_q += std::pow(std::abs(f[static_cast<std::size_t>(e.a)] - f[static_cast<std::size_t>(e.b)]),
                        q) *
               e.weight;
    if (num_q <= 0.0 || den_q <= 0.0) break;

    auto dpow = [&](double x) {
      if (x == 0.0) return 0.0;
      return (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), q - 1.0);
    };
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i = 0; i < g.size(); ++i)
      grad[static_cast<std::size_t>(i)] += dpow(centered[static_cast<std::size_t>(i)]) *
                                           g.nu[static_cast<std::size_t>(i)] / num_q;
    for (const auto& e : g.edges) {
      double d = dpow(f[static_cast<std::size_t>(e.a)] - f[static_cast<std::size_t>(e.b)]) *
                 e.weight / den_q;
      grad[static_cast<std::size_t>(e.a)] -= d;
      grad[static_cast<std::size_t>(e.b)] += d;
    }
    for (int i = 0; i < g.size(); ++i)
      if (frozen[static_cast<std::size_t>(i)]) grad[static_cast<std::size_t>(i)] = 0.0;

    double scale = 0.0;
    for (double x : f) scale = std::max(scale, std::abs(x));
    double step = 0.5 * scale;
    bool improved = false;
    for (int back = 0; back < 30; ++back, step *= 0.5) {
      std::vector<double> trial = f;
      for (std::size_t i = 0; i < f.size(); ++i) trial[i] += step * grad[i];
      double val = objective(trial);
      if (val > best + 1e-14) {
        f = std::move(trial);
        best = val;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return f;
}

PoincareResult maximize_ratio(const CoveringGraph& g, double q, bool neumann) {
  const int n = g.size();
  std::vector<char> frozen(static_cast<std::size_t>(n), 0);
  std::vector<int> free_ids;
  for (int i = 0; i < n; ++i) {
    if (!neumann && g.boundary[static_cast<std::size_t>(i)])
      frozen[static_cast<std::size_t>(i)] = 1;
    else
      free_ids.push_back(i);
  }

  PoincareResult out;
  out.q = q;
  out.lower_bound_only = true;
  out.method = PoincareMethod::ratio_maximization;
  double best = 0.0;
  std::vector<double> best_f;

  auto consider = [&](const std::vector<double>& f) {
    double r = ratio_q(g, f, q, neumann);
    if (r > best) {
      best = r;
      best_f = f;
    }
  };

  const int m = static_cast<int>(free_ids.size());
  if (m <= 12) {
    // exhaustive three-valued sign patterns over the free vertices
    out.method = PoincareMethod::brute_force;
    long total = 1;
    for (int k = 0; k < m; ++k) total *= 3;
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    for (long code = 1; code < total; ++code) {
      long c = code;
      for (int k = 0; k < m; ++k) {
        f[static_cast<std::size_t>(free_ids[static_cast<std::size_t>(k)])] =
            static_cast<double>(c % 3 - 1);
        c /= 3;
      }
      consider(f);
    }
    if (!best_f.empty()) consider(ascend_ratio(g, best_f, q, neumann, frozen));
  }

  // level prefixes as indicator starts
  int max_level = *std::max_element(g.level.begin(), g.level.end());
  for (int lev = *std::min_element(g.level.begin(), g.level.end()); lev <= max_level; ++lev) {
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    bool any = false;
    for (int i : free_ids)
      if (g.level[static_cast<std::size_t>(i)] <= lev) {
        f[static_cast<std::size_t>(i)] = 1.0;
        any = true;
      }
    if (any) {
      consider(f);
      consider(ascend_ratio(g, f, q, neumann, frozen));
    }
  }

  // seeded random restarts refined by ascent
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int restart = 0; restart < 12; ++restart) {
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);
    for (int i : free_ids) f[static_cast<std::size_t>(i)] = gauss(rng);
    consider(ascend_ratio(g, f, q, neumann, frozen));
  }

  out.s_d = best;
  out.witness = best_f;
  return out;
}

}  // namespace

double PoincareResult::witness_ratio(const CoveringGraph& graph, bool neumann) const {
  return ratio_q(graph, witness, q, neumann);
}

double graph_ratio(const CoveringGraph& graph, const std::vector<double>& f, double q,
                   bool neumann) {
  return ratio_q(graph, f, q, neumann);
}

PoincareResult poincare_constant(const CoveringGraph& graph, double q, int dense_cap) {
  if (!(q >= 1.0)) throw Error(ErrorCode::Precondition, "q must be at least 1");
  bool has_boundary = false;
  for (char b : graph.boundary) has_boundary |= (b != 0);
  if (!has_boundary)
    throw Error(ErrorCode::NoBoundary, "constants make the ratio unbounded without a boundary");

  if (q == 2.0) {
    auto setup = dirichlet_setup(graph);
    if (setup.free_ids.empty())
      throw Error(ErrorCode::Precondition, "no free vertices left");
    const int m = static_cast<int>(setup.free_ids.size());

    PoincareResult out;
    out.q = 2.0;
    out.method = PoincareMethod::eigen;
    out.witness.assign(graph.nu.size(), 0.0);
    if (m <= dense_cap) {
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
          setup.energy, setup.mass.asDiagonal().toDenseMatrix());
      if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NonConvergedSolve, "generalized eigensolve failed");
      out.lambda = solver.eigenvalues()(0);
      for (std::size_t k = 0; k < setup.free_ids.size(); ++k)
        out.witness[static_cast<std::size_t>(setup.free_ids[k])] =
            solver.eigenvectors()(static_cast<int>(k), 0);
    } else {
      std::vector<Eigen::Triplet<double>> trips;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (setup.energy(i, j) != 0.0) trips.emplace_back(i, j, setup.energy(i, j));
      auto [lambda, vec] = smallest_pair_iterative(trips, setup.mass, false);
      out.lambda = lambda;
      for (std::size_t k = 0; k < setup.free_ids.size(); ++k)
        out.witness[static_cast<std::size_t>(setup.free_ids[k])] = vec(static_cast<int>(k));
    }
    if (!(out.lambda > 0.0))
      throw Error(ErrorCode::NonConvergedSolve, "non-positive smallest eigenvalue");
    out.s_d = 1.0 / std::sqrt(out.lambda);
    return out;
  }
  return maximize_ratio(graph, q, false);
}

PoincareResult poincare_neumann_gap(const CoveringGraph& graph, double q, int dense_cap) {
  if (!(q >= 1.0)) throw Error(ErrorCode::Precondition, "q must be at least 1");
  if (!graph.connected())
    throw Error(ErrorCode::Disconnected, "spectral gap vanishes on a disconnected graph");

  if (q == 2.0) {
    const int n = graph.size();
    Eigen::VectorXd mass(n);
    for (int i = 0; i < n; ++i) mass(i) = graph.nu[static_cast<std::size_t>(i)];

    PoincareResult out;
    out.q = 2.0;
    out.method = PoincareMethod::eigen;
    out.witness.assign(graph.nu.size(), 0.0);
    if (n <= dense_cap) {
      Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(n, n);
      for (const auto& e : graph.edges) {
        energy(e.a, e.a) += e.weight;
        energy(e.b, e.b) += e.weight;
        energy(e.a, e.b) -= e.weight;
        energy(e.b, e.a) -= e.weight;
      }
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
          energy, mass.asDiagonal().toDenseMatrix());
      if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NonConvergedSolve, "generalized eigensolve failed");
      out.lambda = n > 1 ? solver.eigenvalues()(1) : 0.0;
      for (int i = 0; i < n; ++i)
        out.witness[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, 1);
    } else {
      std::vector<Eigen::Triplet<double>> trips;
      for (const auto& e : graph.edges) {
        trips.emplace_back(e.a, e.a, e.weight);
        trips.emplace_back(e.b, e.b, e.weight);
        trips.emplace_back(e.a, e.b, -e.weight);
        trips.emplace_back(e.b, e.a, -e.weight);
      }
      auto [lambda, vec] = smallest_pair_iterative(trips, mass, true);
      out.lambda = lambda;
      for (int i = 0; i < n; ++i) out.witness[static_cast<std::size_t>(i)] = vec(i);
    }
    if (!(out.lambda > 0.0))
      throw Error(ErrorCode::NonConvergedSolve, "non-positive spectral gap");
    out.s_d = 1.0 / std::sqrt(out.lambda);
    return out;
  }
  return maximize_ratio(graph, q, true);
}

IsoperimetricResult isoperimetric_constant(const CoveringGraph& graph,
                                           const SubsetFamilySpec& family) {
  std::vector<int> free_ids;
  for (int i = 0; i < graph.size(); ++i)
    if (!graph.boundary[static_cast<std::size_t>(i)]) free_ids.push_back(i);

  const bool has_boundary = free_ids.size() < graph.nu.size();
  IsoperimetricResult out;

  auto evaluate = [&](const std::vector<char>& in) {
    // cut weight over nu-mass; full-graph subsets without boundary are
    // skipped since their cut is empty
    double mass = 0.0;
    int members = 0;
    for (int i = 0; i < graph.size(); ++i)
      if (in[static_cast<std::size_t>(i)]) {
        mass += graph.nu[static_cast<std::size_t>(i)];
        ++members;
      }
    if (members == 0) return;
    if (!has_boundary && members == graph.size()) return;
    double cut = 0.0;
    for (const auto& e : graph.edges)
      if (in[static_cast<std::size_t>(e.a)] != in[static_cast<std::size_t>(e.b)]) cut += e.weight;
    if (cut <= 0.0) return;
    ++out.evaluated;
    double ratio = mass / cut;
    if (ratio > out.constant) {
      out.constant = ratio;
      out.witness.clear();
      for (int i = 0; i < graph.size(); ++i)
        if (in[static_cast<std::size_t>(i)]) out.witness.push_back(i);
    }
  };

  std::vector<char> in(graph.nu.size(), 0);
  switch (family.kind) {
    case SubsetFamilySpec::Kind::level_prefixes: {
      int lo = *std::min_element(graph.level.begin(), graph.level.end());
      int hi = *std::max_element(graph.level.begin(), graph.level.end());
      for (int lev = lo; lev <= hi; ++lev) {
        std::fill(in.begin(), in.end(), 0);
        for (int i : free_ids)
          if (graph.level[static_cast<std::size_t>(i)] <= lev) in[static_cast<std::size_t>(i)] = 1;
        evaluate(in);
      }
      break;
    }
    case SubsetFamilySpec::Kind::all_subsets: {
      if (free_ids.size() > 20)
        throw Error(ErrorCode::Precondition, "exhaustive family capped at 20 vertices");
      long total = 1L << free_ids.size();
      for (long code = 1; code < total; ++code) {
        std::fill(in.begin(), in.end(), 0);
        for (std::size_t k = 0; k < free_ids.size(); ++k)
          if (code & (1L << k)) in[static_cast<std::size_t>(free_ids[k])] = 1;
        evaluate(in);
      }
      break;
    }
    case SubsetFamilySpec::Kind::random_sample: {
      if (family.count <= 0) throw Error(ErrorCode::EmptyFamily, "random family of size 0");
      std::mt19937_64 rng(family.seed);
      std::bernoulli_distribution coin(0.5);
      for (int k = 0; k < family.count; ++k) {
        std::fill(in.begin(), in.end(), 0);
        for (int i : free_ids)
          if (coin(rng)) in[static_cast<std::size_t>(i)] = 1;
        evaluate(in);
      }
      break;
    }
  }
  if (out.evaluated == 0) throw Error(ErrorCode::EmptyFamily, "no admissible subset in the family");
  return out;
}

StructureReport structure_checks(const CoveringGraph& graph, double kappa, double dimension_bound,
                                 double c_d) {
  StructureReport rep;
  rep.h_bound = components_per_annulus_bound(kappa, dimension_bound);
  rep.degree_bound = 2.0 * rep.h_bound;
  std::vector<int> degree(graph.nu.size(), 0);
  for (const auto& e : graph.edges) {
    ++degree[static_cast<std::size_t>(e.a)];
    ++degree[static_cast<std::size_t>(e.b)];
  }
  rep.max_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
  rep.degree_ok = rep.max_degree <= rep.degree_bound;

  rep.ratio_bound =
      c_d * std::pow(8.0 * kappa * kappa / (kappa - 1.0), std::log2(c_d));
  rep.ratio_max = 1.0;
  for (const auto& e : graph.edges) {
    double a = graph.nu[static_cast<std::size_t>(e.a)];
    double b = graph.nu[static_cast<std::size_t>(e.b)];
    rep.ratio_max = std::max(rep.ratio_max, std::max(a / b, b / a));
  }
  rep.ratio_ok = rep.ratio_max <= rep.ratio_bound;
  return rep;
}

}  // namespace mmlab
