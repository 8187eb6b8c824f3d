#pragma once

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "mmlab/growth.hpp"
#include "mmlab/space.hpp"

namespace mmlab {

/// Edge conductances (m_u + m_v) / (2 len^2) paired with the weighted
/// vertex masses: the quadratic form Q(f) = sum c_uv (f_u - f_v)^2
/// discretizes the gradient energy, while mu carries the inner product the
/// semigroup is symmetric in.
struct DirichletFormAssembly {
  const DiscreteSpace* space = nullptr;
  std::vector<double> conductance;  // aligned with space->edges()
  std::vector<double> mu;
  std::vector<double> sqrt_mu;
  double total_mu = 0.0;
  Eigen::SparseMatrix<double> laplacian;   // from conductances
  Eigen::SparseMatrix<double> symmetrized; // D^-1/2 L D^-1/2

  double energy(const ScalarField& f) const;
  double lq_mu(const ScalarField& f, double q) const;
};

DirichletFormAssembly assemble_form(const DiscreteSpace& space, const WeightedMeasure& weighted);

/// Gradient energy with the default conductances, no assembly needed.
double dirichlet_energy(const DiscreteSpace& space, const ScalarField& f);

struct HeatOptions {
  double tol = 1e-11;
  int max_krylov = 500;
};

/// One entry per semigroup application: requested time, Krylov dimension
/// of the last sub-step and how often the step had to be split.
struct HeatSolveEvent {
  double t = 0.0;
  int krylov_dim = 0;
  int splits = 1;
};

/// Structured event stream of recent solves (bounded buffer).
std::vector<HeatSolveEvent> heat_solve_events();
void clear_heat_solve_events();

/// Applies the heat semigroup of the weighted form to f0 at time t via a
/// Krylov approximation of the symmetrized operator exponential, splitting
/// the time step when the subspace would grow past the cap. Agrees with a
/// dense spectral oracle to solver tolerance.
ScalarField heat_evolve(const DirichletFormAssembly& form, const ScalarField& f0, double t,
                        const HeatOptions& opts = {});

/// Crank-Nicolson stepping with Richardson-style halving until successive
/// answers agree below tol. Kept as an independent integration route.
ScalarField heat_evolve_stepping(const DirichletFormAssembly& form, const ScalarField& f0,
                                 double t, double tol = 1e-9, int max_halvings = 18);

/// Kernel column p_t(x, .) with respect to mu.
ScalarField heat_kernel_column(const DirichletFormAssembly& form, int x, double t,
                               const HeatOptions& opts = {});

/// Effective lattice spacing of the form: the largest per-vertex
/// relaxation length sqrt(2 n mu_x / sum of incident conductances). Equals
/// the grid spacing on nearest-neighbor grids and scales with the metric
/// on conformal ones.
double effective_spacing(const DirichletFormAssembly& form);

/// Per-axis diffusion scale: mean gradient energy of the coordinate ramps
/// per unit mass (1.0 when no coordinates are stored).
double diffusion_scale(const DirichletFormAssembly& form);

struct PsiRow {
  double t = 0.0;
  double phi = 0.0;   // squared L2(mu) norm along the flow
  double psi = 0.0;   // (N/2) phi^(-2/N)
  double bound = 0.0; // (2 / C_Na) t
  bool ok = false;
};

struct HeatDecayCurve {
  std::vector<double> times;
  std::vector<double> sup_diag;
  double fitted_c = 0.0;
  double fitted_exponent = 0.0;
  bool monotone_ok = false;
  std::vector<PsiRow> psi_rows;
  double c_na_used = 0.0;
  bool psi_ok = true;
  std::vector<std::pair<double, double>> nash_trajectory;  // (s, ratio)
};

/// On-diagonal decay scan: sup over centers of p_t(x, x) per time, with a
/// log-log exponent fit, plus the differential diagnostic along the flow
/// of psi_u0: psi(t) = (N/2) phi(t)^(-2/N) must grow at least linearly
/// with slope 2/C_Na, where C_Na is the largest Nash ratio seen on the
/// family and on the trajectory itself.
HeatDecayCurve verify_kernel_bound(const DirichletFormAssembly& form,
                                   const std::vector<double>& times,
                                   const std::vector<int>& centers,
                                   const ScalarField* psi_u0 = nullptr,
                                   double c_na_family = 0.0,
                                   const HeatOptions& opts = {});

}  // namespace mmlab
