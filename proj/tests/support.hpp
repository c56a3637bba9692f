#ifndef APDG_TESTS_SUPPORT_HPP_
#define APDG_TESTS_SUPPORT_HPP_

#include <cmath>
#include <numbers>
#include <random>

#include "apdg/dg.hpp"
#include "apdg/hermite.hpp"
#include "apdg/scheme.hpp"

namespace apdg::test {

inline ApScheme periodic_scheme(int n_cells, int degree, double eps, double dt, int n_modes = 15,
                                TransportIntegrator integrator = TransportIntegrator::ssprk3,
                                bool limiter = false) {
  VelocityGrid grid(n_modes);
  auto kernel = CollisionKernel::constant(grid, 1.0, 2.0);
  SchemeParams p;
  p.epsilon = eps;
  p.mu = 2.0;
  p.dt = dt;
  p.limiter_on = limiter;
  p.transport = integrator;
  return ApScheme(Mesh1D(0.0, 1.0, n_cells), degree, std::move(grid), std::move(kernel), p);
}

inline ScalarDGField random_scalar(int n_cells, int n_modes, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarDGField f(n_cells, n_modes);
  for (auto &c : f.coef) c = u(rng);
  return f;
}

inline ParityField random_parity(int n_cells, int n_modes, int n_nodes, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ParityField f(n_cells, n_modes, n_nodes);
  for (auto &c : f.data) c = u(rng);
  return f;
}

/// Smooth positive state with mirrored parity structure: f = M (1 + a(x) + b(x) v).
inline ParityState smooth_state(const ApScheme &s, double a = 0.3, double b = 0.1) {
  return s.initial_state([a, b](double x, double v) {
    const double m = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
    return m * (1.0 + a * std::cos(2.0 * std::numbers::pi * x) +
                b * v * std::sin(2.0 * std::numbers::pi * x));
  });
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace apdg::test

#endif
