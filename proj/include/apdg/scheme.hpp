#ifndef APDG_SCHEME_HPP_
#define APDG_SCHEME_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "apdg/dg.hpp"
#include "apdg/field.hpp"
#include "apdg/hermite.hpp"

namespace apdg {

/// Knudsen number: a constant or a positive function of x.
class Knudsen {
 public:
  Knudsen(double value = 1.0);  // NOLINT(google-explicit-constructor)
  explicit Knudsen(std::function<double(double)> profile);

  bool is_constant() const { return !profile_; }
  double value() const { return value_; }
  double at(double x) const { return profile_ ? profile_(x) : value_; }

 private:
  double value_;
  std::function<double(double)> profile_;
};

/// 1e-3 + (tanh(1 - 11x) + tanh(1 + 11x)) / 2.
double mixed_regime_epsilon(double x);

enum class FieldKind { zero, prescribed, poisson };

struct FieldSpec {
  FieldKind kind = FieldKind::zero;
  std::function<double(double)> prescribed;
  PoissonConfig poisson;
};

/// How the inflow formulas, written for v > 0, are applied at v < 0 nodes.
enum class InflowParity {
  /// Evaluate at |v| and extend r-hat evenly and j-hat oddly.
  absolute,
  /// Apply the formulas with the node's own (signed) velocity.
  literal,
};

/// Inflow data F_L, F_R and their v-derivatives tabulated at the velocity nodes.
struct InflowData {
  std::vector<double> f_left;
  std::vector<double> f_right;
  std::vector<double> df_left;
  std::vector<double> df_right;
};

struct BoundarySpec {
  bool periodic = true;
  InflowData inflow;
  InflowParity parity = InflowParity::absolute;

  static BoundarySpec make_periodic() { return {}; }
  /// F_L = F_R = M(v).
  static BoundarySpec maxwellian_inflow(const VelocityGrid &grid);
};

enum class TransportIntegrator { ssprk3, forward_euler };

/// Trace of r used as the interface flux in the transport update of j.
/// r_plus pairs with the j^- flux of the r update into a skew-symmetric
/// operator. r_minus couples both equations through minus traces, which
/// leaves an indefinite sum of [r][j] in the energy balance and grows
/// without bound once eps is not small.
enum class JTransportFlux { r_plus, r_minus };

struct SchemeParams {
  Knudsen epsilon = 1.0;
  double mu = 2.0;
  /// Fixed step; <= 0 selects min(cfl_parabolic h^2, cfl_hyperbolic h / max|v|).
  double dt = 0.0;
  double cfl_parabolic = 0.05;
  double cfl_hyperbolic = 0.3;
  BoundarySpec boundary;
  FieldSpec field;
  bool limiter_on = true;
  bool limit_stages = false;
  TransportIntegrator transport = TransportIntegrator::ssprk3;
  JTransportFlux j_transport_flux = JTransportFlux::r_plus;
};

/// Even parity r, odd parity j, both as nodal-in-v DG fields.
struct ParityState {
  ParityField r;
  ParityField j;
  double t = 0.0;
};

/// Electric field sampled at the Gauss points plus its two boundary values.
struct FieldSamples {
  bool zero = true;
  std::vector<double> at_quad;
  double left = 0.0;
  double right = 0.0;
  std::optional<FieldState> poisson;
};

/// Inflow boundary flux values per velocity node.
struct BoundaryFluxes {
  std::vector<double> r_left;
  std::vector<double> r_right;
  std::vector<double> j_left;
  std::vector<double> j_right;
};

struct LimiterReport {
  long activations = 0;
  long negative_averages = 0;
  double min_f = 0.0;
  double max_average_error = 0.0;
};

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  double theorem_energy = 0.0;
  double example_energy = 0.0;
  long limiter_activations = 0;
  long negative_averages = 0;
  double min_f_sampled = 0.0;
  double limiter_average_error = 0.0;
};

struct EnergyNorms {
  /// |||r|||^2 + eps^2 |||j|||^2 (pointwise eps inside the x-integral).
  double theorem_energy = 0.0;
  /// |||r|||^2 + ||eps||_{L2} |||j|||.
  double example_energy = 0.0;
};

/// Limiter scaling for one cell and velocity node.
double limiter_theta(double average, double minimum);

/// The asymptotic-preserving DG scheme on one mesh, velocity grid and kernel.
/// Every operation is a pure function of its arguments.
class ApScheme {
 public:
  ApScheme(Mesh1D mesh, int degree, VelocityGrid grid, CollisionKernel kernel, SchemeParams params);

  const Mesh1D &mesh() const { return mesh_; }
  const DGBasis &basis() const { return basis_; }
  const VelocityGrid &grid() const { return grid_; }
  const CollisionKernel &kernel() const { return kernel_; }
  const SchemeParams &params() const { return params_; }
  double dt() const { return dt_; }
  /// Gauss point coordinates and the Knudsen number sampled there.
  std::span<const double> quad_x() const { return quad_x_; }
  std::span<const double> quad_epsilon() const { return quad_eps_; }

  ParityField zero_field() const;
  /// Projection of f(x, v) sampled at the velocity nodes.
  ParityField project_distribution(const std::function<double(double, double)> &f) const;
  ParityState initial_state(const std::function<double(double, double)> &f) const;

  /// r = (f(v) + f(-v))/2, j = (f(v) - f(-v))/(2 eps).
  ParityState even_odd_decompose(const ParityField &f, double t = 0.0) const;
  /// f = r + eps j (projected onto V_h^k when eps depends on x).
  ParityField reconstruct_f(const ParityState &state) const;
  ScalarDGField density(const ParityState &state) const;
  double mass(const ParityState &state) const;

  FieldSamples compute_field(const ParityState &state) const;

  ParityField relaxation_step_r(const ParityState &state) const;
  ParityField relaxation_step_j(const ParityState &state, const ParityField &r_star,
                                const FieldSamples &field) const;
  ParityState transport_forward_euler(const ParityState &star, const FieldSamples &field) const;
  ParityState ssprk3_transport(const ParityState &star, const FieldSamples &field) const;
  ParityState positivity_limit(const ParityState &state, LimiterReport *report = nullptr) const;
  BoundaryFluxes inflow_boundary_fluxes(const ParityField &r, const FieldSamples &field) const;

  ParityState full_step(const ParityState &state, StepDiagnostics *diag = nullptr) const;

  EnergyNorms energy_norms(const ParityState &state) const;
  /// |||f - rho M||| with f = r + eps j.
  double equilibrium_distance(const ParityState &state) const;
  /// Minimum of reconstructed f over the limiter sample set.
  double min_sampled_f(const ParityState &state) const;

 private:
  std::vector<double> flux_parity(const ParityField &psi, LVariant variant) const;
  ParityField project_increment(std::span<const double> samples) const;
  /// Coefficients of j in one cell and node from those of the odd part eps*j.
  void odd_to_j(int cell, const double *odd, std::size_t odd_stride, double *j,
                std::size_t j_stride) const;
  /// Mode-m coefficient of the projection of eps*j in one cell and node.
  double eps_times_j(int cell, int mode, const double *j, std::size_t stride) const;
  std::vector<double> velocity_derivative_at_quad(std::span<const double> values) const;

  Mesh1D mesh_;
  DGBasis basis_;
  VelocityGrid grid_;
  CollisionKernel kernel_;
  SchemeParams params_;
  double dt_;
  std::vector<double> quad_x_;
  std::vector<double> quad_eps_;
  std::vector<double> quad_phi_;
  double eps_l2_ = 0.0;
  // Reference basis values at the limiter sample points, [s * n_modes + m].
  std::vector<double> sample_values_;
  // Per cell, the eps-weighted mass matrix and its inverse, [c][m * n_modes + n].
  std::vector<double> eps_mass_;
  std::vector<double> eps_mass_inv_;
  int n_samples_ = 0;
};

}  // namespace apdg

#endif  // APDG_SCHEME_HPP_
