#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mmlab/heat.hpp"
#include "mmlab/models.hpp"

using namespace mmlab;

namespace {

const DiscreteSpace& small_grid() {
  static DiscreteSpace space = build_space(simple_grid(2, 4.0, 0.25));  // 33x33
  return space;
}

// Dense spectral oracle: full eigendecomposition of the symmetrized
// operator. Entirely separate from the Krylov production path.
struct DenseHeatOracle {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
  std::vector<double> sqrt_mu;

  explicit DenseHeatOracle(const DirichletFormAssembly& form) {
    const int n = form.space->vertex_count();
    Eigen::MatrixXd s = Eigen::MatrixXd(form.symmetrized);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    vectors = eig.eigenvectors();
    values = eig.eigenvalues();
    sqrt_mu = form.sqrt_mu;
    REQUIRE(n == vectors.rows());
  }

  ScalarField evolve(const ScalarField& f0, double t) const {
    const int n = static_cast<int>(f0.size());
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = f0[static_cast<std::size_t>(i)] * sqrt_mu[static_cast<std::size_t>(i)];
    Eigen::VectorXd y = vectors.transpose() * w;
    for (int i = 0; i < n; ++i) y(i) *= std::exp(-t * std::max(0.0, values(i)));
    Eigen::VectorXd z = vectors * y;
    ScalarField out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = z(i) / sqrt_mu[static_cast<std::size_t>(i)];
    return out;
  }
};

ScalarField bump_field(const DiscreteSpace& space, double radius) {
  const auto& dist = space.base_distances();
  ScalarField u(static_cast<std::size_t>(space.vertex_count()), 0.0);
  for (int v = 0; v < space.vertex_count(); ++v) {
    double d = dist[static_cast<std::size_t>(v)];
    if (d < radius) u[static_cast<std::size_t>(v)] = 1.0 - d / radius;
  }
  return u;
}

}  // namespace

TEST_CASE("conductance of the unit line is 1 per edge") {
  SpaceSpec spec = simple_grid(1, 3.0, 1.0);
  auto space = build_space(spec);
  auto form = assemble_form(space, uniform_weight(space));
  for (double c : form.conductance) CHECK(c == doctest::Approx(1.0));
}

TEST_CASE("energy of a constant vanishes") {
  const auto& space = small_grid();
  CHECK(dirichlet_energy(space, ScalarField(static_cast<std::size_t>(space.vertex_count()), 2.0)) ==
        0.0);
}

TEST_CASE("ramp energy approaches the continuum value under refinement") {
  double prev_err = 1e9;
  for (double h : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
    DiscreteSpace::Builder b;
    int n = static_cast<int>(std::lround(1.0 / h)) + 1;
    for (int i = 0; i < n; ++i) b.add_vertex({i * h}, h);
    for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, h);
    b.set_base_point(0);
    auto space = std::move(b).build();
    ScalarField f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = i * h;
    double q = dirichlet_energy(space, f);
    double err = std::abs(q - 1.0);
    CHECK(err <= 2.0 * h);
    CHECK(err <= prev_err + 1e-12);
    prev_err = err;
  }
}

TEST_CASE("zero time returns the input, constants are invariant") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  auto u = bump_field(space, 2.0);
  CHECK(heat_evolve(form, u, 0.0) == u);

  ScalarField c(static_cast<std::size_t>(space.vertex_count()), 0.75);
  auto ct = heat_evolve(form, c, 3.0);
  for (double x : ct) CHECK(x == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("mass conservation to 1e-10") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  auto u = bump_field(space, 2.0);
  double before = 0.0;
  for (int v = 0; v < space.vertex_count(); ++v)
    before += u[static_cast<std::size_t>(v)] * form.mu[static_cast<std::size_t>(v)];
  for (double t : {0.5, 2.0, 6.0}) {
    auto ut = heat_evolve(form, u, t);
    double after = 0.0;
    for (int v = 0; v < space.vertex_count(); ++v)
      after += ut[static_cast<std::size_t>(v)] * form.mu[static_cast<std::size_t>(v)];
    CHECK(std::abs(after - before) <= 1e-10 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("markov property: values stay inside [0, 1] up to 1e-10") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  auto u = bump_field(space, 3.0);
  for (double t : {0.3, 1.5, 5.0}) {
    auto ut = heat_evolve(form, u, t);
    for (double x : ut) {
      CHECK(x >= -1e-10);
      CHECK(x <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("krylov evolution matches the dense oracle to 1e-8") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  DenseHeatOracle oracle(form);
  auto u = bump_field(space, 2.5);
  for (double t : {0.2, 1.0, 4.0, 12.0}) {
    auto a = heat_evolve(form, u, t);
    auto b = oracle.evolve(u, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("stepping integrator agrees with the krylov path") {
  auto space = build_space(simple_grid(2, 2.0, 0.25));
  auto form = assemble_form(space, uniform_weight(space));
  auto u = bump_field(space, 1.0);
  auto a = heat_evolve(form, u, 1.5);
  auto b = heat_evolve_stepping(form, u, 1.5, 1e-10);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  CHECK(worst <= 1e-7);
}

TEST_CASE("kernel columns: stochastic completeness and symmetry") {
  auto space = build_space(simple_grid(2, 2.0, 0.25));  // 17x17
  auto form = assemble_form(space, uniform_weight(space));
  const double t = 0.8;

  std::mt19937_64 rng(42);
  std::vector<int> xs;
  for (int k = 0; k < 8; ++k)
    xs.push_back(static_cast<int>(rng() % static_cast<std::size_t>(space.vertex_count())));

  std::vector<ScalarField> columns;
  for (int x : xs) columns.push_back(heat_kernel_column(form, x, t));

  for (std::size_t a = 0; a < xs.size(); ++a) {
    double mass = 0.0;
    for (int y = 0; y < space.vertex_count(); ++y)
      mass += columns[a][static_cast<std::size_t>(y)] * form.mu[static_cast<std::size_t>(y)];
    CHECK(std::abs(mass - 1.0) <= 1e-8);
    for (std::size_t b = a + 1; b < xs.size(); ++b)
      CHECK(std::abs(columns[a][static_cast<std::size_t>(xs[b])] -
                     columns[b][static_cast<std::size_t>(xs[a])]) <= 1e-8);
  }
}

TEST_CASE("kernel diagonal approaches 1/mu at small times") {
  auto space = build_space(simple_grid(2, 2.0, 0.5));
  auto form = assemble_form(space, uniform_weight(space));
  int x = space.base_point();
  double limit = 1.0 / form.mu[static_cast<std::size_t>(x)];
  double prev_gap = 1e300;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    auto col = heat_kernel_column(form, x, t);
    double gap = std::abs(col[static_cast<std::size_t>(x)] - limit);
    CHECK(gap < prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-2 * limit);
}

TEST_CASE("semigroup law and self-adjointness to 1e-8") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  auto u = bump_field(space, 2.0);

  auto both = heat_evolve(form, u, 2.5);
  auto stepwise = heat_evolve(form, heat_evolve(form, u, 1.0), 1.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < both.size(); ++i)
    worst = std::max(worst, std::abs(both[i] - stepwise[i]));
  CHECK(worst <= 1e-8);

  auto v = bump_field(space, 3.5);
  auto ut = heat_evolve(form, u, 1.7);
  auto vt = heat_evolve(form, v, 1.7);
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < space.vertex_count(); ++i) {
    lhs += ut[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)] *
           form.mu[static_cast<std::size_t>(i)];
    rhs += u[static_cast<std::size_t>(i)] * vt[static_cast<std::size_t>(i)] *
           form.mu[static_cast<std::size_t>(i)];
  }
  CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("L1 contraction and energy dissipation") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  ScalarField u = bump_field(space, 2.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (i % 3 == 0) u[i] = -u[i];  // mixed signs

  double l1 = 0.0;
  for (int i = 0; i < space.vertex_count(); ++i)
    l1 += std::abs(u[static_cast<std::size_t>(i)]) * form.mu[static_cast<std::size_t>(i)];
  double phi_prev = 1e300;
  for (double t : {0.2, 0.7, 2.0, 5.0}) {
    auto ut = heat_evolve(form, u, t);
    double l1t = 0.0;
    for (int i = 0; i < space.vertex_count(); ++i)
      l1t += std::abs(ut[static_cast<std::size_t>(i)]) * form.mu[static_cast<std::size_t>(i)];
    CHECK(l1t <= l1 * (1.0 + 1e-10));
    double phi = form.lq_mu(ut, 2.0);
    phi *= phi;
    CHECK(phi <= phi_prev * (1.0 + 1e-12));
    phi_prev = phi;
  }
}

TEST_CASE("decay scan: exponent near -1 on the plane with psi diagnostic") {
  auto space = build_space(simple_grid(2, 8.0, 0.25));  // 65x65, area 256
  auto form = assemble_form(space, uniform_weight(space));

  std::vector<double> times;
  for (int k = 0; k < 8; ++k) times.push_back(0.7 * std::pow(4.0 / 0.7, k / 7.0));
  std::vector<int> centers{space.base_point()};

  auto u0 = bump_field(space, 1.5);
  auto curve = verify_kernel_bound(form, times, centers, &u0, 0.0);
  CHECK(curve.monotone_ok);
  CHECK(curve.fitted_exponent > -1.3);
  CHECK(curve.fitted_exponent < -0.7);
  CHECK(curve.psi_ok);
  for (const auto& row : curve.psi_rows) CHECK(row.psi >= row.bound);
}

TEST_CASE("times outside the reliable window are rejected") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  try {
    verify_kernel_bound(form, {1e-6, 1.0}, {space.base_point()});
    FAIL("expected WindowUnreliable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowUnreliable);
  }
}

TEST_CASE("kernel at non-positive time is rejected") {
  const auto& space = small_grid();
  auto form = assemble_form(space, uniform_weight(space));
  CHECK_THROWS_AS(heat_kernel_column(form, 0, 0.0), Error);
}
