#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apdg/hermite.hpp"

using namespace apdg;

namespace {
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);
}

TEST_CASE("two-node grid") {
  VelocityGrid g(1);
  REQUIRE(g.size() == 2);
  CHECK(g.nodes()[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.nodes()[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.weights()[0] == doctest::Approx(kSqrt2Pi / 2).epsilon(1e-13));
  CHECK(g.weights()[1] == doctest::Approx(kSqrt2Pi / 2).epsilon(1e-13));
}

TEST_CASE("quadrature moments and symmetry") {
  for (int n : {1, 3, 7, 15, 31}) {
    VelocityGrid g(n);
    CHECK(g.size() == static_cast<std::size_t>(n + 1));
    double s0 = 0.0, s2 = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l) {
      s0 += g.weights()[l];
      s2 += g.weights()[l] * g.nodes()[l] * g.nodes()[l];
      CHECK(g.nodes()[g.mirror(l)] == doctest::Approx(-g.nodes()[l]).epsilon(1e-13));
    }
    CHECK(std::abs(s0 / kSqrt2Pi - 1.0) < 1e-12);
    CHECK(std::abs(s2 / kSqrt2Pi - 1.0) < 1e-12);
  }
}

TEST_CASE("hermite orthonormality and first polynomial") {
  VelocityGrid g(15);
  const auto &H = g.hermite_table();
  for (int i = 0; i <= 15; ++i) {
    for (int j = 0; j <= 15; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < g.size(); ++l) s += H(i, l) * H(j, l) * g.weights()[l];
      CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
  for (double v : {-2.5, 0.0, 0.7, 3.1}) {
    CHECK(normalized_hermite(1, v) == doctest::Approx(v * std::pow(2 * std::numbers::pi, -0.25)));
  }
}

TEST_CASE("hermite transform") {
  VelocityGrid g(15);
  std::vector<double> h3(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) h3[l] = normalized_hermite(3, g.nodes()[l]);
  const auto c = hermite_transform(g, h3);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - (i == 3 ? 1.0 : 0.0)) < 1e-10);

  const auto z = hermite_transform(g, std::vector<double>(g.size(), 0.0));
  for (double x : z) CHECK(x == 0.0);

  VelocityGrid g3(3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> coef(4);
  for (auto &x : coef) x = u(rng);
  const auto back = hermite_transform(g3, hermite_synthesize(g3, coef));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(back[i] - coef[i]) < 1e-10);
}

TEST_CASE("velocity derivative") {
  VelocityGrid g(15);
  std::vector<double> c(g.size(), 3.0), lin(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) lin[l] = g.nodes()[l];
  for (double d : velocity_derivative(g, c)) CHECK(std::abs(d) < 1e-10);
  for (double d : velocity_derivative(g, lin)) CHECK(std::abs(d - 1.0) < 1e-10);

  VelocityGrid g5(5);
  std::vector<double> cube(g5.size());
  for (std::size_t l = 0; l < g5.size(); ++l) cube[l] = std::pow(g5.nodes()[l], 3);
  const auto d = velocity_derivative(g5, cube);
  for (std::size_t l = 0; l < g5.size(); ++l) {
    CHECK(std::abs(d[l] - 3.0 * g5.nodes()[l] * g5.nodes()[l]) < 1e-9);
  }
}

TEST_CASE("constant kernel") {
  VelocityGrid g(15);
  auto k = CollisionKernel::constant(g, 1.0, 2.0);
  for (double lam : k.lambda()) CHECK(std::abs(lam - 1.0) < 1e-12);
  CHECK(k.max_lambda() <= k.mu());
  for (int i = 0; i < k.sigma().rows(); ++i) {
    for (int l = 0; l < k.sigma().cols(); ++l) {
      CHECK(k.sigma()(i, l) > 0.0);
      CHECK(k.sigma()(i, l) == k.sigma()(l, i));
    }
  }
}

TEST_CASE("general kernel is symmetric with lambda below mu") {
  VelocityGrid g(7);
  CollisionKernel k(g, [](double v, double w) { return 1.0 + 0.1 * v * v * w * w; }, 50.0);
  for (int i = 0; i < k.sigma().rows(); ++i) {
    for (int l = 0; l < k.sigma().cols(); ++l) CHECK(k.sigma()(i, l) == k.sigma()(l, i));
  }
  CHECK(k.max_lambda() <= 50.0);
  CHECK_THROWS(CollisionKernel(g, [](double, double) { return 10.0; }, 1.0));
}

TEST_CASE("collision operator") {
  VelocityGrid g(15);
  auto k = CollisionKernel::constant(g, 1.0, 2.0);
  std::vector<double> m(g.maxwellian().begin(), g.maxwellian().end());
  for (auto &x : m) x *= 1.7;
  for (double q : collision_apply(k, g, m)) CHECK(std::abs(q) < 1e-12);
  for (double q : collision_apply(k, g, std::vector<double>(g.size(), 0.0))) CHECK(q == 0.0);

  VelocityGrid g3(3);
  CollisionKernel ks(g3, [](double v, double w) { return 1.0 + 0.3 * std::cos(v - w) * std::cos(w - v); },
                     5.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(g3.size());
    for (auto &x : f) x = u(rng);
    const auto q = collision_apply(ks, g3, f);
    double s = 0.0;
    for (std::size_t i = 0; i < g3.size(); ++i) {
      s += g3.weights()[i] * std::exp(0.5 * g3.nodes()[i] * g3.nodes()[i]) * q[i];
    }
    CHECK(std::abs(s) < 1e-11);
  }
}

TEST_CASE("relaxed operator P") {
  VelocityGrid g(15);
  auto k = CollisionKernel::constant(g, 1.0, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> r(g.size());
  for (auto &x : r) x = u(rng);
  for (double p : relaxed_operator_P(k, g, r)) CHECK(p >= -1e-14);

  std::vector<double> m(g.maxwellian().begin(), g.maxwellian().end());
  const auto pm = relaxed_operator_P(k, g, m);
  for (std::size_t l = 0; l < g.size(); ++l) CHECK(std::abs(pm[l] - 2.0 * m[l]) < 1e-13);

  // dense assembly of Q + mu I at N_v = 3
  VelocityGrid g3(3);
  CollisionKernel k3(g3, [](double v, double w) { return 2.0 + std::tanh(v * w); }, 4.0);
  const std::size_t n = g3.size();
  const auto M = g3.maxwellian();
  const auto dw = g3.density_weights();
  std::vector<double> rr(n);
  for (auto &x : rr) x = u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double gain = 0.0, loss = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      gain += k3.sigma()(i, l) * M[i] * rr[l] * dw[l];
      loss += k3.sigma()(i, l) * M[l] * dw[l];
    }
    const double expect = gain - loss * rr[i] + 4.0 * rr[i];
    CHECK(relaxed_operator_P(k3, g3, rr)[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("density moments") {
  VelocityGrid g(15);
  std::vector<double> m(g.maxwellian().begin(), g.maxwellian().end()), v2m(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) v2m[l] = g.nodes()[l] * g.nodes()[l] * m[l];
  CHECK(std::abs(moment_density(g, m) - 1.0) < 1e-12);
  CHECK(std::abs(moment_density(g, v2m) - 1.0) < 1e-12);
  CHECK(moment_density(g, std::vector<double>(g.size(), 0.0)) == 0.0);
}

TEST_CASE("diffusion constant") {
  VelocityGrid g(15);
  CHECK(std::abs(diffusion_constant(g, CollisionKernel::constant(g, 1.0, 2.0)) - 1.0) < 1e-12);
  CHECK(std::abs(diffusion_constant(g, CollisionKernel::constant(g, 2.0, 2.0)) - 0.5) < 1e-12);

  VelocityGrid g3(3);
  CollisionKernel k(g3, [](double v, double w) { return 1.0 + 0.5 * v * v + 0.5 * w * w; }, 20.0);
  double expect = 0.0;
  for (std::size_t l = 0; l < g3.size(); ++l) {
    expect += g3.density_weights()[l] * g3.nodes()[l] * g3.nodes()[l] * g3.maxwellian()[l] /
              k.lambda()[l];
  }
  CHECK(diffusion_constant(g3, k) == doctest::Approx(expect).epsilon(1e-13));
}
