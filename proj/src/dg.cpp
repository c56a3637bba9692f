#include "apdg/dg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "apdg/hermite.hpp"

namespace apdg {

namespace {

// P_n(xi) and P_n'(xi) by the three-term recurrence.
void legendre_with_derivative(int n, double xi, double &p, double &dp) {
  double p0 = 1.0;
  double p1 = xi;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  if (std::abs(std::abs(xi) - 1.0) < 1e-15) {
    dp = 0.5 * n * (n + 1.0) * std::pow(xi, n + 1);
  } else {
    dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
  }
}

}  // namespace

Mesh1D::Mesh1D(double x_left, double x_right, int n_cells)
    : x_left(x_left), x_right(x_right), n_cells(n_cells), h((x_right - x_left) / n_cells) {
  if (n_cells < 1 || !(x_right > x_left)) {
    throw std::invalid_argument("Mesh1D: need n_cells >= 1 and x_right > x_left");
  }
}

double legendre(int n, double xi) {
  double p = 0.0;
  double dp = 0.0;
  legendre_with_derivative(n, xi, p, dp);
  return p;
}

void gauss_legendre(int n, std::vector<double> &points, std::vector<double> &weights) {
  points.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre_with_derivative(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_with_derivative(n, x, p, dp);
    points[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (points[n - 1 - i] - points[i]);
    points[i] = -x;
    points[n - 1 - i] = x;
  }
  if (n % 2 == 1) points[n / 2] = 0.0;
}

std::vector<double> gauss_lobatto_points(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_points: n >= 2 required");
  std::vector<double> pts(n);
  pts[0] = -1.0;
  pts[n - 1] = 1.0;
  const int m = n - 1;
  // Interior points are the roots of P_m'; Newton on P_m' with P_m'' from the
  // Legendre ODE (1 - x^2) P'' = 2x P' - m(m+1) P.
  for (int i = 1; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      double p = 0.0;
      double dp = 0.0;
      legendre_with_derivative(m, x, p, dp);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    pts[i] = x;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (pts[n - 1 - i] - pts[i]);
    pts[i] = -x;
    pts[n - 1 - i] = x;
  }
  if (n % 2 == 1) pts[n / 2] = 0.0;
  return pts;
}

DGBasis::DGBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("DGBasis: degree must be >= 0");
  const int nm = degree + 1;
  gauss_legendre(nm, gauss_points_, gauss_weights_);
  lobatto_points_ = gauss_lobatto_points(degree + 2);

  gauss_values_.resize(static_cast<std::size_t>(nm) * nm);
  for (int q = 0; q < nm; ++q) {
    for (int m = 0; m < nm; ++m) gauss_values_[q * nm + m] = value(m, gauss_points_[q]);
  }
  left_values_.resize(nm);
  right_values_.resize(nm);
  center_values_.resize(nm);
  for (int m = 0; m < nm; ++m) {
    left_values_[m] = value(m, -1.0);
    right_values_[m] = value(m, 1.0);
    center_values_[m] = value(m, 0.0);
  }
  // P_n P_m' has degree <= 2k - 1, exact under the (k+1)-point rule.
  stiffness_.assign(static_cast<std::size_t>(nm) * nm, 0.0);
  for (int m = 0; m < nm; ++m) {
    for (int n = 0; n < nm; ++n) {
      double s = 0.0;
      for (int q = 0; q < nm; ++q) {
        s += gauss_weights_[q] * value(n, gauss_points_[q]) * derivative(m, gauss_points_[q]);
      }
      stiffness_[m * nm + n] = s;
    }
  }
}

double DGBasis::value(int mode, double xi) const {
  return std::sqrt(mode + 0.5) * legendre(mode, xi);
}

double DGBasis::derivative(int mode, double xi) const {
  double p = 0.0;
  double dp = 0.0;
  legendre_with_derivative(mode, xi, p, dp);
  return std::sqrt(mode + 0.5) * dp;
}

ScalarDGField ParityField::slice(int node) const {
  ScalarDGField out(n_cells, n_modes);
  for (int c = 0; c < n_cells; ++c) {
    for (int m = 0; m < n_modes; ++m) out(c, m) = (*this)(c, m, node);
  }
  return out;
}

void ParityField::set_slice(int node, const ScalarDGField &field) {
  for (int c = 0; c < n_cells; ++c) {
    for (int m = 0; m < n_modes; ++m) (*this)(c, m, node) = field(c, m);
  }
}

double evaluate(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, int cell,
                double xi) {
  double s = 0.0;
  for (int m = 0; m < field.n_modes; ++m) s += field(cell, m) * basis.value(m, xi);
  return s * std::sqrt(2.0 / mesh.h);
}

double evaluate_at(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, double x) {
  int cell = static_cast<int>(std::floor((x - mesh.x_left) / mesh.h));
  cell = std::clamp(cell, 0, mesh.n_cells - 1);
  const double xi = 2.0 * (x - mesh.center(cell)) / mesh.h;
  return evaluate(basis, mesh, field, cell, xi);
}

ScalarDGField project(const Mesh1D &mesh, const DGBasis &basis,
                      const std::function<double(double)> &fn) {
  const int nm = basis.n_modes();
  const int nq = basis.n_quad();
  ScalarDGField out(mesh.n_cells, nm);
  const auto gp = basis.gauss_points();
  const auto gw = basis.gauss_weights();
  const auto gv = basis.gauss_values();
  const double scale = std::sqrt(0.5 * mesh.h);
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      const double val = fn(mesh.center(c) + 0.5 * mesh.h * gp[q]) * gw[q] * scale;
      for (int m = 0; m < nm; ++m) out(c, m) += val * gv[q * nm + m];
    }
  }
  return out;
}

double trace(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &field, int interface,
             Side side, bool periodic) {
  const int n = mesh.n_cells;
  if (interface < 0 || interface > n) {
    throw std::out_of_range("trace: interface index " + std::to_string(interface));
  }
  int cell = side == Side::left ? interface - 1 : interface;
  if (cell < 0 || cell >= n) {
    if (!periodic) {
      throw std::out_of_range("trace: interface " + std::to_string(interface) +
                              " has no neighbour on that side");
    }
    cell = (cell + n) % n;
  }
  const auto vals = side == Side::left ? basis.right_values() : basis.left_values();
  double s = 0.0;
  for (int m = 0; m < field.n_modes; ++m) s += field(cell, m) * vals[m];
  return s * std::sqrt(2.0 / mesh.h);
}

double jump(double minus, double plus) { return plus - minus; }
double average(double minus, double plus) { return 0.5 * (plus + minus); }

std::vector<double> interface_fluxes(const DGBasis &basis, const Mesh1D &mesh,
                                     const ScalarDGField &psi, LVariant variant) {
  const Side side = variant == LVariant::plus ? Side::right : Side::left;
  std::vector<double> out(mesh.n_cells + 1);
  for (int i = 0; i <= mesh.n_cells; ++i) out[i] = trace(basis, mesh, psi, i, side, true);
  return out;
}

ScalarDGField apply_L_with_fluxes(const DGBasis &basis, const Mesh1D &mesh,
                                  const ScalarDGField &psi, std::span<const double> psi_hat) {
  const int nm = basis.n_modes();
  const auto stiff = basis.stiffness();
  const auto lv = basis.left_values();
  const auto rv = basis.right_values();
  const double vol = 2.0 / mesh.h;
  const double face = std::sqrt(2.0 / mesh.h);
  ScalarDGField out(mesh.n_cells, nm);
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int m = 0; m < nm; ++m) {
      double s = 0.0;
      for (int n = 0; n < nm; ++n) s += stiff[m * nm + n] * psi(c, n);
      out(c, m) = -vol * s - face * (psi_hat[c] * lv[m] - psi_hat[c + 1] * rv[m]);
    }
  }
  return out;
}

ScalarDGField apply_L(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &psi,
                      LVariant variant) {
  const auto fluxes = interface_fluxes(basis, mesh, psi, variant);
  return apply_L_with_fluxes(basis, mesh, psi, fluxes);
}

double bilinear_L(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &psi,
                  const ScalarDGField &u, LVariant variant) {
  const auto tested = apply_L(basis, mesh, psi, variant);
  double s = 0.0;
  for (std::size_t i = 0; i < u.coef.size(); ++i) s += tested.coef[i] * u.coef[i];
  return s;
}

std::vector<double> interface_fluxes_parity(const DGBasis &basis, const Mesh1D &mesh,
                                            const ParityField &psi, LVariant variant) {
  const int n = mesh.n_cells;
  const int nn = psi.n_nodes;
  const int nm = psi.n_modes;
  const auto vals = variant == LVariant::plus ? basis.left_values() : basis.right_values();
  const double face = std::sqrt(2.0 / mesh.h);
  std::vector<double> out(static_cast<std::size_t>(n + 1) * nn, 0.0);
  for (int i = 0; i <= n; ++i) {
    int cell = variant == LVariant::plus ? i : i - 1;
    cell = (cell + n) % n;
    double *dst = &out[static_cast<std::size_t>(i) * nn];
    for (int m = 0; m < nm; ++m) {
      const double b = vals[m] * face;
      const double *src = &psi.data[psi.index(cell, m, 0)];
      for (int l = 0; l < nn; ++l) dst[l] += b * src[l];
    }
  }
  return out;
}

ParityField apply_L_parity(const DGBasis &basis, const Mesh1D &mesh, const ParityField &psi,
                           std::span<const double> psi_hat) {
  const int nm = psi.n_modes;
  const int nn = psi.n_nodes;
  const auto stiff = basis.stiffness();
  const auto lv = basis.left_values();
  const auto rv = basis.right_values();
  const double vol = 2.0 / mesh.h;
  const double face = std::sqrt(2.0 / mesh.h);
  ParityField out(psi.n_cells, nm, nn);
  for (int c = 0; c < psi.n_cells; ++c) {
    const double *left = &psi_hat[static_cast<std::size_t>(c) * nn];
    const double *right = &psi_hat[static_cast<std::size_t>(c + 1) * nn];
    for (int m = 0; m < nm; ++m) {
      double *dst = &out.data[out.index(c, m, 0)];
      for (int n = 0; n < nm; ++n) {
        const double s = -vol * stiff[m * nm + n];
        const double *src = &psi.data[psi.index(c, n, 0)];
        for (int l = 0; l < nn; ++l) dst[l] += s * src[l];
      }
      const double a = face * lv[m];
      const double b = face * rv[m];
      for (int l = 0; l < nn; ++l) dst[l] += b * right[l] - a * left[l];
    }
  }
  return out;
}

double integrate_x(const Mesh1D &mesh, const ScalarDGField &field) {
  double s = 0.0;
  for (int c = 0; c < field.n_cells; ++c) s += field(c, 0);
  return s * std::sqrt(mesh.h);
}

double integrate_product(const Mesh1D & /*mesh*/, const ScalarDGField &a, const ScalarDGField &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coef.size(); ++i) s += a.coef[i] * b.coef[i];
  return s;
}

double l2_norm_x(const ScalarDGField &field) {
  double s = 0.0;
  for (double c : field.coef) s += c * c;
  return std::sqrt(s);
}

std::vector<double> to_quadrature(const DGBasis &basis, const Mesh1D &mesh, const ParityField &f) {
  const int nm = f.n_modes;
  const int nq = basis.n_quad();
  const int nn = f.n_nodes;
  const auto gv = basis.gauss_values();
  const double scale = std::sqrt(2.0 / mesh.h);
  std::vector<double> out(static_cast<std::size_t>(f.n_cells) * nq * nn, 0.0);
  for (int c = 0; c < f.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      double *dst = &out[(static_cast<std::size_t>(c) * nq + q) * nn];
      for (int m = 0; m < nm; ++m) {
        const double b = gv[q * nm + m] * scale;
        const double *src = &f.data[f.index(c, m, 0)];
        for (int l = 0; l < nn; ++l) dst[l] += b * src[l];
      }
    }
  }
  return out;
}

ParityField from_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                            std::span<const double> samples, int n_nodes) {
  const int nm = basis.n_modes();
  const int nq = basis.n_quad();
  const auto gv = basis.gauss_values();
  const auto gw = basis.gauss_weights();
  const double scale = std::sqrt(0.5 * mesh.h);
  ParityField out(mesh.n_cells, nm, n_nodes);
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      const double *src = &samples[(static_cast<std::size_t>(c) * nq + q) * n_nodes];
      for (int m = 0; m < nm; ++m) {
        const double b = gv[q * nm + m] * gw[q] * scale;
        double *dst = &out.data[out.index(c, m, 0)];
        for (int l = 0; l < n_nodes; ++l) dst[l] += b * src[l];
      }
    }
  }
  return out;
}

std::vector<double> scalar_to_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                                         const ScalarDGField &f) {
  const int nm = f.n_modes;
  const int nq = basis.n_quad();
  const auto gv = basis.gauss_values();
  const double scale = std::sqrt(2.0 / mesh.h);
  std::vector<double> out(static_cast<std::size_t>(f.n_cells) * nq, 0.0);
  for (int c = 0; c < f.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      double s = 0.0;
      for (int m = 0; m < nm; ++m) s += gv[q * nm + m] * f(c, m);
      out[static_cast<std::size_t>(c) * nq + q] = s * scale;
    }
  }
  return out;
}

ScalarDGField scalar_from_quadrature(const DGBasis &basis, const Mesh1D &mesh,
                                     std::span<const double> samples) {
  const int nm = basis.n_modes();
  const int nq = basis.n_quad();
  const auto gv = basis.gauss_values();
  const auto gw = basis.gauss_weights();
  const double scale = std::sqrt(0.5 * mesh.h);
  ScalarDGField out(mesh.n_cells, nm);
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      const double v = samples[static_cast<std::size_t>(c) * nq + q] * gw[q] * scale;
      for (int m = 0; m < nm; ++m) out(c, m) += v * gv[q * nm + m];
    }
  }
  return out;
}

std::vector<double> quadrature_coordinates(const DGBasis &basis, const Mesh1D &mesh) {
  const int nq = basis.n_quad();
  const auto gp = basis.gauss_points();
  std::vector<double> out(static_cast<std::size_t>(mesh.n_cells) * nq);
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) out[c * nq + q] = mesh.center(c) + 0.5 * mesh.h * gp[q];
  }
  return out;
}

ScalarDGField density(const VelocityGrid &grid, const ParityField &g) {
  const auto dw = grid.density_weights();
  ScalarDGField out(g.n_cells, g.n_modes);
  for (int c = 0; c < g.n_cells; ++c) {
    for (int m = 0; m < g.n_modes; ++m) {
      const double *src = &g.data[g.index(c, m, 0)];
      double s = 0.0;
      for (int l = 0; l < g.n_nodes; ++l) s += dw[l] * src[l];
      out(c, m) = s;
    }
  }
  return out;
}

namespace {

std::vector<double> phase_weights(const VelocityGrid &grid, const CollisionKernel &kernel) {
  // lambda / M against the density weights.
  const auto dw = grid.density_weights();
  const auto mx = grid.maxwellian();
  const auto lambda = kernel.lambda();
  std::vector<double> out(grid.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = dw[l] * lambda[l] / mx[l];
  return out;
}

}  // namespace

double phase_norm(const ParityField &g, const VelocityGrid &grid, const CollisionKernel &kernel) {
  const auto pw = phase_weights(grid, kernel);
  double s = 0.0;
  for (int c = 0; c < g.n_cells; ++c) {
    for (int m = 0; m < g.n_modes; ++m) {
      const double *src = &g.data[g.index(c, m, 0)];
      for (int l = 0; l < g.n_nodes; ++l) s += pw[l] * src[l] * src[l];
    }
  }
  return std::sqrt(s);
}

double phase_norm_weighted(const DGBasis &basis, const Mesh1D &mesh, const ParityField &g,
                           const VelocityGrid &grid, const CollisionKernel &kernel,
                           std::span<const double> weight_at_quad) {
  const auto pw = phase_weights(grid, kernel);
  const auto vals = to_quadrature(basis, mesh, g);
  const auto gw = basis.gauss_weights();
  const int nq = basis.n_quad();
  const int nn = g.n_nodes;
  double s = 0.0;
  for (int c = 0; c < g.n_cells; ++c) {
    for (int q = 0; q < nq; ++q) {
      const std::size_t p = static_cast<std::size_t>(c) * nq + q;
      double inner = 0.0;
      for (int l = 0; l < nn; ++l) inner += pw[l] * vals[p * nn + l] * vals[p * nn + l];
      s += 0.5 * mesh.h * gw[q] * weight_at_quad[p] * inner;
    }
  }
  return std::sqrt(s);
}

void write_pointwise_csv(std::ostream &os, const DGBasis &basis, const Mesh1D &mesh,
                         const ScalarDGField &field, const char *value_name) {
  os << "x," << value_name << "\n";
  const auto xs = quadrature_coordinates(basis, mesh);
  const auto vals = scalar_to_quadrature(basis, mesh, field);
  for (std::size_t i = 0; i < xs.size(); ++i) os << xs[i] << "," << vals[i] << "\n";
}

void write_cell_average_csv(std::ostream &os, const Mesh1D &mesh, const ScalarDGField &field,
                            const char *value_name) {
  os << "x," << value_name << "\n";
  for (int c = 0; c < field.n_cells; ++c) {
    os << mesh.center(c) << "," << field(c, 0) / std::sqrt(mesh.h) << "\n";
  }
}

}  // namespace apdg
