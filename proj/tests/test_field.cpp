#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apdg/field.hpp"

using namespace apdg;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("prescribed field") {
  CHECK(prescribed_field_example2(0.25) == 0.0);
  for (double d : {0.01, 0.05, 0.2}) {
    CHECK(prescribed_field_example2(0.25 + d) ==
          doctest::Approx(-prescribed_field_example2(0.25 - d)).epsilon(1e-13));
  }
  const double c = 50.0 * std::exp(1.0);
  CHECK(prescribed_field_example2(0.0) ==
        doctest::Approx(-2.0 * c * 0.25 * std::exp(-c / 16.0)).epsilon(1e-14));
}

TEST_CASE("doping profile") {
  const double m = (1.0 - 0.001) / 2.0;
  CHECK(std::abs(doping_profile(0.5) - (1.0 - 2.0 * (1.0 - m) * std::tanh(10.0))) < 1e-12);
  // the printed profile dips to 2m - 1 = -0.001 in the channel
  CHECK(std::abs(doping_profile(0.5) + 0.001) < 1e-6);
  CHECK(std::abs(doping_profile(0.0) - 1.0) < 1e-6);
  for (double d : {0.05, 0.2, 0.31}) {
    CHECK(doping_profile(0.5 - d) == doctest::Approx(doping_profile(0.5 + d)).epsilon(1e-13));
  }
}

TEST_CASE("neutral density gives a linear potential") {
  Mesh1D mesh(0.0, 1.0, 40);
  DGBasis b(2);
  PoissonConfig cfg;
  const auto rho = project(mesh, b, doping_profile);
  // exact neutrality at the interface samples
  std::vector<double> src(mesh.n_cells + 1, 0.0);
  const auto st = solve_poisson_nodes(src, cfg, mesh, b);
  for (int i = 0; i <= mesh.n_cells; ++i) {
    CHECK(st.phi[i] == doctest::Approx(5.0 * mesh.interface(i)).epsilon(1e-12));
    CHECK(st.e_nodes[i] == doctest::Approx(-5.0).epsilon(1e-11));
  }
  for (double x : {0.0, 0.3, 0.77, 1.0}) CHECK(evaluate_at(b, mesh, st.e, x) == doctest::Approx(-5.0).epsilon(1e-11));
  CHECK(st.residual < 1e-12);

  // projected doping leaves only a projection-error source
  const auto near = solve_poisson(rho, cfg, mesh, b);
  CHECK(near.phi.front() == 0.0);
  CHECK(near.phi.back() == 5.0);
}

TEST_CASE("manufactured Poisson solution converges at second order") {
  PoissonConfig cfg;
  cfg.doping = [](double) { return 0.0; };
  cfg.phi_left = 0.0;
  cfg.phi_right = 0.0;
  DGBasis b(2);
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    Mesh1D mesh(0.0, 1.0, n);
    const auto rho = project(mesh, b, [&](double x) { return -cfg.beta * kPi * kPi * std::sin(kPi * x); });
    const auto st = solve_poisson(rho, cfg, mesh, b);
    double e = 0.0;
    for (int i = 0; i <= n; ++i) e = std::max(e, std::abs(st.phi[i] - std::sin(kPi * mesh.interface(i))));
    CHECK(st.residual < 1e-12);
    if (prev > 0.0) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("tridiagonal solvers") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 9;
  std::vector<double> sub(n), diag(n), sup(n), x(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    sub[i] = u(rng);
    sup[i] = u(rng);
    diag[i] = 4.0 + u(rng);
    x[i] = u(rng);
  }
  for (int i = 0; i < n; ++i) {
    rhs[i] = diag[i] * x[i] + (i > 0 ? sub[i] * x[i - 1] : 0.0) + (i + 1 < n ? sup[i] * x[i + 1] : 0.0);
  }
  const auto y = solve_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));

  for (int i = 0; i < n; ++i) {
    rhs[i] = diag[i] * x[i] + sub[i] * x[(i + n - 1) % n] + sup[i] * x[(i + 1) % n];
  }
  const auto z = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(x[i]).epsilon(1e-12));
}
