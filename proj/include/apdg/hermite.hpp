#ifndef APDG_HERMITE_HPP_
#define APDG_HERMITE_HPP_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace apdg {

/// Gauss-Hermite velocity discretization on the full line with weight
/// exp(-v^2/2). Nodes are sorted ascending, so the mirror of node l is
/// size()-1-l.
class VelocityGrid {
 public:
  /// n_modes is the highest Hermite index; it must be odd and >= 1.
  explicit VelocityGrid(int n_modes);

  int n_modes() const { return n_modes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t mirror(std::size_t l) const { return size() - 1 - l; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> maxwellian() const { return maxwellian_; }
  /// w_l * exp(v_l^2 / 2): sum of these against nodal g gives the integral of g.
  std::span<const double> density_weights() const { return density_weights_; }
  double max_speed() const { return nodes_.back(); }

  /// hermite_table()(i, l) = normalized Hermite polynomial i at node l.
  const Eigen::MatrixXd &hermite_table() const { return hermite_; }
  /// deriv_matrix()(i, m): d/dv psi(v_m) = sum_i psi(v_i) C(i, m).
  const Eigen::MatrixXd &deriv_matrix() const { return deriv_; }
  /// Acts on nodal samples of f = psi*M and returns nodal samples of df/dv.
  const Eigen::MatrixXd &nodal_deriv_matrix() const { return nodal_deriv_; }

 private:
  int n_modes_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> maxwellian_;
  std::vector<double> density_weights_;
  Eigen::MatrixXd hermite_;
  Eigen::MatrixXd deriv_;
  Eigen::MatrixXd nodal_deriv_;
};

VelocityGrid build_velocity_grid(int n_modes);

/// Normalized Hermite polynomial of index i at v, by the three-term recurrence.
double normalized_hermite(int i, double v);

/// Discrete scattering cross section sigma(v_i, v_l) with the induced
/// collision frequency lambda(v_i) = (2 pi)^{-1/2} sum_l sigma(v_i, v_l) w_l.
class CollisionKernel {
 public:
  CollisionKernel(const VelocityGrid &grid,
                  const std::function<double(double, double)> &sigma, double mu);

  static CollisionKernel constant(const VelocityGrid &grid, double sigma, double mu);

  const Eigen::MatrixXd &sigma() const { return sigma_; }
  std::span<const double> lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double max_lambda() const;
  bool is_constant() const { return constant_; }
  /// Gain matrix acting on nodal f: gain_i = sum_l G(i, l) f_l.
  const Eigen::MatrixXd &gain_matrix() const { return gain_; }

 private:
  CollisionKernel() = default;
  void finish(const VelocityGrid &grid);

  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd gain_;
  std::vector<double> lambda_;
  double mu_ = 0.0;
  bool constant_ = false;
};

/// Hermite coefficients psi_i = sum_l psi(v_l) H_i(v_l) w_l.
std::vector<double> hermite_transform(const VelocityGrid &grid,
                                      std::span<const double> psi_samples);

/// Nodal values of the Hermite series with the given coefficients.
std::vector<double> hermite_synthesize(const VelocityGrid &grid,
                                       std::span<const double> coefficients);

/// d/dv of psi at the nodes, exact for polynomials of degree <= n_modes.
std::vector<double> velocity_derivative(const VelocityGrid &grid,
                                        std::span<const double> psi_samples);

/// Q(f) at the nodes for nodal samples of f.
std::vector<double> collision_apply(const CollisionKernel &kernel, const VelocityGrid &grid,
                                    std::span<const double> f_samples);

/// P(r) = Q(r) + mu r.
std::vector<double> relaxed_operator_P(const CollisionKernel &kernel, const VelocityGrid &grid,
                                       std::span<const double> r_samples);

/// Discrete integral over v of nodal samples g.
double moment_density(const VelocityGrid &grid, std::span<const double> g_samples);

/// D = integral of v^2 M / lambda dv.
double diffusion_constant(const VelocityGrid &grid, const CollisionKernel &kernel);

}  // namespace apdg

#endif  // APDG_HERMITE_HPP_
