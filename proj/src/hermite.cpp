#include "apdg/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace apdg {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void check_length(const VelocityGrid &grid, std::size_t n, const char *what) {
  if (n != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(grid.size()) +
                                " velocity samples, got " + std::to_string(n));
  }
}

}  // namespace

double normalized_hermite(int i, double v) {
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi));
  for (int l = 0; l < i; ++l) {
    const double next = v * cur / std::sqrt(l + 1.0) - prev * std::sqrt(l / (l + 1.0));
    prev = cur;
    cur = next;
  }
  return cur;
}

VelocityGrid::VelocityGrid(int n_modes) : n_modes_(n_modes) {
  if (n_modes < 1 || n_modes % 2 == 0) {
    throw std::invalid_argument("build_velocity_grid: n_modes must be odd and >= 1, got " +
                                std::to_string(n_modes));
  }
  const int n = n_modes + 1;

  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const Eigen::VectorXd &eig = solver.eigenvalues();

  nodes_.resize(n);
  for (int l = 0; l < n; ++l) {
    nodes_[l] = 0.5 * (eig(l) - eig(n - 1 - l));
  }

  hermite_.resize(n, n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) hermite_(i, l) = normalized_hermite(i, nodes_[l]);
  }

  // Christoffel numbers; relatively accurate even for the outermost nodes.
  weights_.resize(n);
  for (int l = 0; l < n; ++l) {
    weights_[l] = 1.0 / hermite_.col(l).squaredNorm();
  }
  for (int l = 0; l < n / 2; ++l) {
    const double w = 0.5 * (weights_[l] + weights_[n - 1 - l]);
    weights_[l] = weights_[n - 1 - l] = w;
  }

  maxwellian_.resize(n);
  density_weights_.resize(n);
  for (int l = 0; l < n; ++l) {
    maxwellian_[l] = std::exp(-0.5 * nodes_[l] * nodes_[l]) / kSqrt2Pi;
    density_weights_[l] = weights_[l] * std::exp(0.5 * nodes_[l] * nodes_[l]);
  }

  // The Hermite series through the n Gauss nodes is the interpolating polynomial,
  // so differentiate it in barycentric Lagrange form.
  std::vector<double> bary(n, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k != i) bary[i] /= nodes_[i] - nodes_[k];
    }
  }
  deriv_ = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == m) continue;
      deriv_(i, m) = bary[i] / bary[m] / (nodes_[m] - nodes_[i]);
      diag -= deriv_(i, m);
    }
    deriv_(m, m) = diag;
  }

  // f = psi M  =>  f' = M (psi' - v psi).
  nodal_deriv_.resize(n, n);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      nodal_deriv_(m, i) = maxwellian_[m] * deriv_(i, m) / maxwellian_[i];
    }
    nodal_deriv_(m, m) -= nodes_[m];
  }
}

VelocityGrid build_velocity_grid(int n_modes) { return VelocityGrid(n_modes); }

CollisionKernel::CollisionKernel(const VelocityGrid &grid,
                                 const std::function<double(double, double)> &sigma, double mu)
    : mu_(mu) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto v = grid.nodes();
  sigma_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < n; ++l) sigma_(i, l) = sigma(v[i], v[l]);
  }
  finish(grid);
}

CollisionKernel CollisionKernel::constant(const VelocityGrid &grid, double sigma, double mu) {
  CollisionKernel k;
  const auto n = static_cast<Eigen::Index>(grid.size());
  k.sigma_ = Eigen::MatrixXd::Constant(n, n, sigma);
  k.mu_ = mu;
  k.constant_ = true;
  k.finish(grid);
  return k;
}

void CollisionKernel::finish(const VelocityGrid &grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double asym = (sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * sigma_.cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("CollisionKernel: sigma must be symmetric");
  }
  sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();
  if (sigma_.minCoeff() <= 0.0) {
    throw std::invalid_argument("CollisionKernel: sigma must be strictly positive");
  }
  const auto w = grid.weights();
  const auto m = grid.maxwellian();
  const auto dw = grid.density_weights();
  lambda_.assign(n, 0.0);
  gain_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) s += sigma_(i, l) * w[l];
    lambda_[i] = s / kSqrt2Pi;
    // M_i sigma_il w_l psi_l / sqrt(2 pi), psi_l = f_l / M_l = sqrt(2 pi) exp(v_l^2/2) f_l.
    for (Eigen::Index l = 0; l < n; ++l) gain_(i, l) = m[i] * sigma_(i, l) * dw[l];
  }
  if (max_lambda() > mu_) {
    throw std::invalid_argument("CollisionKernel: mu must bound the collision frequency");
  }
}

double CollisionKernel::max_lambda() const {
  double mx = 0.0;
  for (double l : lambda_) mx = std::max(mx, l);
  return mx;
}

std::vector<double> hermite_transform(const VelocityGrid &grid,
                                      std::span<const double> psi_samples) {
  check_length(grid, psi_samples.size(), "hermite_transform");
  const auto n = grid.size();
  const auto w = grid.weights();
  const auto &h = grid.hermite_table();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) s += psi_samples[l] * h(i, l) * w[l];
    out[i] = s;
  }
  return out;
}

std::vector<double> hermite_synthesize(const VelocityGrid &grid,
                                       std::span<const double> coefficients) {
  check_length(grid, coefficients.size(), "hermite_synthesize");
  const auto n = grid.size();
  const auto &h = grid.hermite_table();
  std::vector<double> out(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += coefficients[i] * h(i, l);
    out[l] = s;
  }
  return out;
}

std::vector<double> velocity_derivative(const VelocityGrid &grid,
                                        std::span<const double> psi_samples) {
  check_length(grid, psi_samples.size(), "velocity_derivative");
  const auto n = grid.size();
  const auto &c = grid.deriv_matrix();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += psi_samples[i] * c(i, m);
    out[m] = s;
  }
  return out;
}

std::vector<double> collision_apply(const CollisionKernel &kernel, const VelocityGrid &grid,
                                    std::span<const double> f_samples) {
  check_length(grid, f_samples.size(), "collision_apply");
  const auto n = grid.size();
  const auto &g = kernel.gain_matrix();
  const auto lambda = kernel.lambda();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double gain = 0.0;
    for (std::size_t l = 0; l < n; ++l) gain += g(i, l) * f_samples[l];
    out[i] = gain - lambda[i] * f_samples[i];
  }
  return out;
}

std::vector<double> relaxed_operator_P(const CollisionKernel &kernel, const VelocityGrid &grid,
                                       std::span<const double> r_samples) {
  auto out = collision_apply(kernel, grid, r_samples);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += kernel.mu() * r_samples[i];
  return out;
}

double moment_density(const VelocityGrid &grid, std::span<const double> g_samples) {
  check_length(grid, g_samples.size(), "moment_density");
  const auto dw = grid.density_weights();
  double s = 0.0;
  for (std::size_t l = 0; l < g_samples.size(); ++l) s += dw[l] * g_samples[l];
  return s;
}

double diffusion_constant(const VelocityGrid &grid, const CollisionKernel &kernel) {
  const auto v = grid.nodes();
  const auto m = grid.maxwellian();
  const auto lambda = kernel.lambda();
  std::vector<double> g(grid.size());
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = v[l] * v[l] * m[l] / lambda[l];
  return moment_density(grid, g);
}

}  // namespace apdg
