#include "mmlab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace mmlab {

double DirichletFormAssembly::energy(const ScalarField& f) const {
  const auto& edges = space->edges();
  double q = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    double d = f[static_cast<std::size_t>(edges[k].u)] - f[static_cast<std::size_t>(edges[k].v)];
    q += conductance[k] * d * d;
  }
  return q;
}

double DirichletFormAssembly::lq_mu(const ScalarField& f, double q) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), q) * mu[i];
  return std::pow(s, 1.0 / q);
}

double dirichlet_energy(const DiscreteSpace& space, const ScalarField& f) {
  double q = 0.0;
  for (const auto& e : space.edges()) {
    double c = (space.measure(e.u) + space.measure(e.v)) / (2.0 * e.length * e.length);
    double d = f[static_cast<std::size_t>(e.u)] - f[static_cast<std::size_t>(e.v)];
    q += c * d * d;
  }
  return q;
}

DirichletFormAssembly assemble_form(const DiscreteSpace& space, const WeightedMeasure& weighted) {
  if (static_cast<int>(weighted.mu.size()) != space.vertex_count())
    throw Error(ErrorCode::Precondition, "weighted measure does not match the space");
  DirichletFormAssembly form;
  form.space = &space;
  form.mu = weighted.mu;
  form.sqrt_mu.resize(form.mu.size());
  form.total_mu = 0.0;
  for (std::size_t i = 0; i < form.mu.size(); ++i) {
    form.sqrt_mu[i] = std::sqrt(form.mu[i]);
    form.total_mu += form.mu[i];
  }
  const auto& edges = space.edges();
  form.conductance.resize(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k)
    form.conductance[k] =
        (space.measure(edges[k].u) + space.measure(edges[k].v)) / (2.0 * edges[k].length * edges[k].length);

  const int n = space.vertex_count();
  std::vector<Eigen::Triplet<double>> trips, strips;
  trips.reserve(edges.size() * 4);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    int u = edges[k].u, v = edges[k].v;
    double c = form.conductance[k];
    trips.emplace_back(u, u, c);
    trips.emplace_back(v, v, c);
    trips.emplace_back(u, v, -c);
    trips.emplace_back(v, u, -c);
    double s = c / (form.sqrt_mu[static_cast<std::size_t>(u)] * form.sqrt_mu[static_cast<std::size_t>(v)]);
    strips.emplace_back(u, v, -s);
    strips.emplace_back(v, u, -s);
    strips.emplace_back(u, u, c / form.mu[static_cast<std::size_t>(u)]);
    strips.emplace_back(v, v, c / form.mu[static_cast<std::size_t>(v)]);
  }
  form.laplacian.resize(n, n);
  form.laplacian.setFromTriplets(trips.begin(), trips.end());
  form.symmetrized.resize(n, n);
  form.symmetrized.setFromTriplets(strips.begin(), strips.end());
  return form;
}

namespace {

std::mutex g_event_mutex;
std::vector<HeatSolveEvent> g_events;

void record_event(double t, int dim, int splits) {
  std::lock_guard<std::mutex> lock(g_event_mutex);
  if (g_events.size() >= 4096) g_events.erase(g_events.begin(), g_events.begin() + 2048);
  g_events.push_back({t, dim, splits});
}

// Krylov approximation of exp(-t S) w for the symmetric positive
// semidefinite S, with full reorthogonalization. Returns false when the
// subspace cap is hit before the increment stabilizes below tol.
bool lanczos_expm(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& w, double t,
                  double tol, int m_max, Eigen::VectorXd& out, int* dim_used = nullptr) {
  const double beta0 = w.norm();
  if (beta0 == 0.0 || t == 0.0) {
    out = w;
    if (dim_used) *dim_used = 0;
    return true;
  }
  const int n = static_cast<int>(w.size());
  m_max = std::min(m_max, n);

  Eigen::MatrixXd V(n, m_max);
  Eigen::VectorXd alpha(m_max), beta(m_max);
  V.col(0) = w / beta0;
  Eigen::VectorXd prev_approx;

  for (int j = 0; j < m_max; ++j) {
    Eigen::VectorXd r = S * V.col(j);
    alpha(j) = V.col(j).dot(r);
    // two-pass reorthogonalization keeps the basis clean at these sizes
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) r -= (V.col(i).dot(r)) * V.col(i);
    const int m = j + 1;
    const double b = r.norm();
    beta(j) = b;
    const bool invariant = b < 1e-14 * beta0;  // exact on this subspace

    if (invariant || m == m_max || (m >= 8 && m % 6 == 0)) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha(i);
        if (i + 1 < m) {
          T(i, i + 1) = beta(i);
          T(i + 1, i) = beta(i);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
      Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m);
      e1(0) = 1.0;
      Eigen::VectorXd small = eig.eigenvectors() *
                              ((-t * eig.eigenvalues().array()).exp() *
                               (eig.eigenvectors().transpose() * e1).array())
                                  .matrix();
      Eigen::VectorXd approx = beta0 * (V.leftCols(m) * small);
      if (dim_used) *dim_used = m;
      if (invariant) {
        out = approx;
        return true;
      }
      if (prev_approx.size() == approx.size() &&
          (approx - prev_approx).lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, beta0)) {
        out = approx;
        return true;
      }
      prev_approx = std::move(approx);
    }
    if (m < m_max) V.col(m) = r / b;
  }
  return false;
}

}  // namespace

std::vector<HeatSolveEvent> heat_solve_events() {
  std::lock_guard<std::mutex> lock(g_event_mutex);
  return g_events;
}

void clear_heat_solve_events() {
  std::lock_guard<std::mutex> lock(g_event_mutex);
  g_events.clear();
}

ScalarField heat_evolve(const DirichletFormAssembly& form, const ScalarField& f0, double t,
                        const HeatOptions& opts) {
  if (t < 0.0) throw Error(ErrorCode::Precondition, "negative time");
  const int n = form.space->vertex_count();
  if (static_cast<int>(f0.size()) != n)
    throw Error(ErrorCode::Precondition, "field length mismatch");
  if (t == 0.0) return f0;

  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = f0[static_cast<std::size_t>(i)] * form.sqrt_mu[static_cast<std::size_t>(i)];

  // Halve the step until every Krylov solve converges within the cap.
  int pieces = 1;
  int dim_used = 0;
  Eigen::VectorXd cur;
  for (; pieces <= 64; pieces *= 2) {
    cur = w;
    double dt = t / pieces;
    bool ok = true;
    for (int k = 0; k < pieces && ok; ++k) {
      Eigen::VectorXd next;
      ok = lanczos_expm(form.symmetrized, cur, dt, opts.tol / pieces, opts.max_krylov, next,
                        &dim_used);
      if (ok) cur = next;
    }
    if (ok) break;
    if (pieces == 64)
      throw Error(ErrorCode::NonConvergedSolve, "Krylov exponential failed to converge");
  }
  record_event(t, dim_used, pieces);

  ScalarField out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = cur(i) / form.sqrt_mu[static_cast<std::size_t>(i)];
  return out;
}

ScalarField heat_evolve_stepping(const DirichletFormAssembly& form, const ScalarField& f0,
                                 double t, double tol, int max_halvings) {
  if (t < 0.0) throw Error(ErrorCode::Precondition, "negative time");
  const int n = form.space->vertex_count();
  if (t == 0.0) return f0;

  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu(i) = form.mu[static_cast<std::size_t>(i)];
  Eigen::SparseMatrix<double> M(n, n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, mu(i));
    M.setFromTriplets(trips.begin(), trips.end());
  }
  Eigen::VectorXd x0(n);
  for (int i = 0; i < n; ++i) x0(i) = f0[static_cast<std::size_t>(i)];

  auto run = [&](int steps) {
    double dt = t / steps;
    Eigen::SparseMatrix<double> A = M + (dt / 2.0) * form.laplacian;
    Eigen::SparseMatrix<double> B = M - (dt / 2.0) * form.laplacian;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::NonConvergedSolve, "factorization failed");
    Eigen::VectorXd x = x0;
    for (int k = 0; k < steps; ++k) x = solver.solve(B * x);
    return x;
  };

  int steps = 8;
  Eigen::VectorXd prev = run(steps);
  for (int halving = 0; halving < max_halvings; ++halving) {
    steps *= 2;
    Eigen::VectorXd next = run(steps);
    if ((next - prev).lpNorm<Eigen::Infinity>() < tol) {
      prev = next;
      break;
    }
    prev = next;
    if (halving == max_halvings - 1)
      throw Error(ErrorCode::NonConvergedSolve, "step halving did not stabilize");
  }
  ScalarField out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = prev(i);
  return out;
}

ScalarField heat_kernel_column(const DirichletFormAssembly& form, int x, double t,
                               const HeatOptions& opts) {
  if (!(t > 0.0)) throw Error(ErrorCode::Precondition, "kernel needs t > 0");
  form.space->check_vertex(x, "heat_kernel_column");
  ScalarField delta(static_cast<std::size_t>(form.space->vertex_count()), 0.0);
  delta[static_cast<std::size_t>(x)] = 1.0 / form.mu[static_cast<std::size_t>(x)];
  return heat_evolve(form, delta, t, opts);
}

double effective_spacing(const DirichletFormAssembly& form) {
  const DiscreteSpace& space = *form.space;
  const double dim = space.coord_dim() > 0 ? space.coord_dim() : space.dimension_bound();
  std::vector<double> incident(form.mu.size(), 0.0);
  const auto& edges = space.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    incident[static_cast<std::size_t>(edges[k].u)] += form.conductance[k];
    incident[static_cast<std::size_t>(edges[k].v)] += form.conductance[k];
  }
  // median over vertices: boundary corners with few edges would otherwise
  // dominate even though the scan centers sit in the interior
  std::vector<double> scale;
  scale.reserve(form.mu.size());
  for (std::size_t v = 0; v < form.mu.size(); ++v)
    if (incident[v] > 0.0) scale.push_back(std::sqrt(2.0 * dim * form.mu[v] / incident[v]));
  if (scale.empty()) return 0.0;
  std::nth_element(scale.begin(), scale.begin() + scale.size() / 2, scale.end());
  return scale[scale.size() / 2];
}

double diffusion_scale(const DirichletFormAssembly& form) {
  const DiscreteSpace& space = *form.space;
  const int dim = space.coord_dim();
  if (dim == 0) return 1.0;
  double total = 0.0;
  for (double m : form.mu) total += m;
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) {
    ScalarField ramp(static_cast<std::size_t>(space.vertex_count()));
    for (int v = 0; v < space.vertex_count(); ++v)
      ramp[static_cast<std::size_t>(v)] = space.coords(v)[static_cast<std::size_t>(k)];
    acc += form.energy(ramp);
  }
  return acc / (dim * total);
}

HeatDecayCurve verify_kernel_bound(const DirichletFormAssembly& form,
                                   const std::vector<double>& times,
                                   const std::vector<int>& centers,
                                   const ScalarField* psi_u0, double c_na_family,
                                   const HeatOptions& opts) {
  const DiscreteSpace& space = *form.space;
  if (times.size() < 2) throw Error(ErrorCode::WindowUnreliable, "need at least two times");
  if (centers.empty()) throw Error(ErrorCode::Precondition, "no centers given");
  const double h = effective_spacing(form);
  const double t_lo = 10.0 * h * h;
  const double diam = space.diameter_estimate();
  const double t_hi = (diam / 4.0) * (diam / 4.0);
  for (double t : times)
    if (t < t_lo || t > t_hi)
      throw Error(ErrorCode::WindowUnreliable,
                  "time " + std::to_string(t) + " outside [" + std::to_string(t_lo) + ", " +
                      std::to_string(t_hi) + "]");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::Precondition, "times must increase strictly");

  HeatDecayCurve curve;
  curve.times = times;
  curve.sup_diag.resize(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    double sup = 0.0;
    for (int x : centers) {
      auto col = heat_kernel_column(form, x, times[ti], opts);
      sup = std::max(sup, col[static_cast<std::size_t>(x)]);
    }
    curve.sup_diag[ti] = sup;
  }

  curve.monotone_ok = true;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (curve.sup_diag[i] > curve.sup_diag[i - 1] * (1.0 + 1e-12)) curve.monotone_ok = false;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double lx = std::log(times[i]), ly = std::log(curve.sup_diag[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(times.size());
  curve.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double half_dim = space.dimension_bound() / 2.0;
  curve.fitted_c = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    curve.fitted_c = std::max(curve.fitted_c, curve.sup_diag[i] * std::pow(times[i], half_dim));

  if (psi_u0) {
    const double n_dim = space.dimension_bound();
    // normalize to unit L1(mu) mass, as the differential argument assumes
    ScalarField u0 = *psi_u0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) l1 += std::abs(u0[i]) * form.mu[i];
    if (!(l1 > 0.0)) throw Error(ErrorCode::Precondition, "psi seed function vanishes");
    for (auto& x : u0) x /= l1;

    auto nash_ratio = [&](const ScalarField& v) {
      double l2 = form.lq_mu(v, 2.0);
      double l1v = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) l1v += std::abs(v[i]) * form.mu[i];
      double e = form.energy(v);
      if (!(e > 0.0) || !(l1v > 0.0)) return 0.0;
      return std::pow(l2, 2.0 + 4.0 / n_dim) / (std::pow(l1v, 4.0 / n_dim) * e);
    };

    double c_na = std::max(c_na_family, nash_ratio(u0));
    // fine trajectory sampling so the Nash constant covers the whole flow
    std::vector<double> sample_times;
    double s0 = times.front() / 20.0;
    for (int k = 0; k < 48; ++k) {
      double s = s0 * std::pow(times.back() / s0, k / 47.0);
      sample_times.push_back(s);
    }
    for (double t : times) sample_times.push_back(t);
    std::sort(sample_times.begin(), sample_times.end());
    sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());

    std::vector<std::pair<double, double>> phi_at;  // (t, phi)
    for (double s : sample_times) {
      auto v = heat_evolve(form, u0, s, opts);
      double r = nash_ratio(v);
      c_na = std::max(c_na, r);
      curve.nash_trajectory.emplace_back(s, r);
      phi_at.emplace_back(s, form.lq_mu(v, 2.0) * form.lq_mu(v, 2.0));
    }
    curve.c_na_used = c_na;

    double phi0 = form.lq_mu(u0, 2.0);
    phi0 *= phi0;
    double psi0 = 0.5 * n_dim * std::pow(phi0, -2.0 / n_dim);
    curve.psi_ok = true;
    for (double t : times) {
      auto it = std::lower_bound(phi_at.begin(), phi_at.end(), std::make_pair(t, 0.0));
      PsiRow row;
      row.t = t;
      row.phi = it->second;
      row.psi = 0.5 * n_dim * std::pow(row.phi, -2.0 / n_dim);
      row.bound = (2.0 / c_na) * t;
      row.ok = row.psi - psi0 >= row.bound;
      if (!row.ok) curve.psi_ok = false;
      curve.psi_rows.push_back(row);
    }
  }
  return curve;
}

}  // namespace mmlab
