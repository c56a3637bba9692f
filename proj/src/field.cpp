#include "apdg/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apdg {

double prescribed_field_example2(double x) {
  const double c = 50.0 * std::numbers::e;
  const double d = 0.25 - x;
  return -2.0 * c * d * std::exp(-c * d * d);
}

double doping_profile(double x) {
  constexpr double s = 0.02;
  constexpr double m = (1.0 - 0.001) / 2.0;
  return 1.0 - (1.0 - m) * (std::tanh((x - 0.3) / s) - std::tanh((x - 0.7) / s));
}

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n), x(n);
  double denom = diag[0];
  if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = n > 1 ? sup[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - sub[i] * c[i - 1];
    if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[i] = i + 1 < n ? sup[i] / denom : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs) {
  // Sherman-Morrison on the corner entries.
  const std::size_t n = diag.size();
  if (n < 3) throw std::invalid_argument("solve_cyclic_tridiagonal: n >= 3 required");
  const double alpha = sup[n - 1];
  const double beta = sub[0];
  const double gamma = -diag[0];
  std::vector<double> b(diag.begin(), diag.end());
  b[0] -= gamma;
  b[n - 1] -= alpha * beta / gamma;
  const auto x = solve_tridiagonal(sub, b, sup, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  const auto z = solve_tridiagonal(sub, b, sup, u);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
  return out;
}

FieldState solve_poisson_nodes(std::span<const double> source, const PoissonConfig &config,
                               const Mesh1D &mesh, const DGBasis &basis) {
  if (!(config.beta > 0.0)) throw std::invalid_argument("solve_poisson: beta must be positive");
  const int np = mesh.n_cells + 1;
  const double h = mesh.h;
  for (double s : source) {
    if (!std::isfinite(s)) throw std::invalid_argument("solve_poisson: non-finite density");
  }

  FieldState out;
  out.phi.assign(np, 0.0);
  out.phi.front() = config.phi_left;
  out.phi.back() = config.phi_right;
  const int ni = np - 2;
  if (ni > 0) {
    std::vector<double> sub(ni, 1.0), diag(ni, -2.0), sup(ni, 1.0), rhs(ni);
    for (int p = 1; p <= ni; ++p) rhs[p - 1] = h * h * source[p] / config.beta;
    rhs.front() -= config.phi_left;
    rhs.back() -= config.phi_right;
    const auto inner = solve_tridiagonal(sub, diag, sup, rhs);
    for (int p = 1; p <= ni; ++p) out.phi[p] = inner[p - 1];
  }
  double res = 0.0;
  for (int p = 1; p + 1 < np; ++p) {
    const double lhs = config.beta * (out.phi[p - 1] - 2.0 * out.phi[p] + out.phi[p + 1]) / (h * h);
    res = std::max(res, std::abs(lhs - source[p]) / std::max(1.0, std::abs(source[p])));
  }
  out.residual = res;

  out.e_nodes.assign(np, 0.0);
  for (int p = 1; p + 1 < np; ++p) out.e_nodes[p] = -(out.phi[p + 1] - out.phi[p - 1]) / (2.0 * h);
  if (np >= 3) {
    out.e_nodes[0] = -(-3.0 * out.phi[0] + 4.0 * out.phi[1] - out.phi[2]) / (2.0 * h);
    out.e_nodes[np - 1] =
        -(3.0 * out.phi[np - 1] - 4.0 * out.phi[np - 2] + out.phi[np - 3]) / (2.0 * h);
  } else {
    out.e_nodes[0] = out.e_nodes[1] = -(out.phi[1] - out.phi[0]) / h;
  }

  const auto &nodes = out.e_nodes;
  out.e = project(mesh, basis, [&](double x) {
    double s = (x - mesh.x_left) / h;
    int c = std::clamp(static_cast<int>(std::floor(s)), 0, mesh.n_cells - 1);
    const double t = s - c;
    return (1.0 - t) * nodes[c] + t * nodes[c + 1];
  });
  return out;
}

FieldState solve_poisson(const ScalarDGField &rho, const PoissonConfig &config, const Mesh1D &mesh,
                         const DGBasis &basis) {
  const int n = mesh.n_cells;
  std::vector<double> source(n + 1);
  for (int p = 0; p <= n; ++p) {
    double value = 0.0;
    if (p == 0) {
      value = trace(basis, mesh, rho, 0, Side::right, false);
    } else if (p == n) {
      value = trace(basis, mesh, rho, n, Side::left, false);
    } else {
      value = average(trace(basis, mesh, rho, p, Side::left, false),
                      trace(basis, mesh, rho, p, Side::right, false));
    }
    source[p] = value - config.doping(mesh.interface(p));
  }
  return solve_poisson_nodes(source, config, mesh, basis);
}

}  // namespace apdg
