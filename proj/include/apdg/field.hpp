#ifndef APDG_FIELD_HPP_
#define APDG_FIELD_HPP_

#include <functional>
#include <span>
#include <vector>

#include "apdg/dg.hpp"

namespace apdg {

/// E(x) = -2c(1/4 - x) exp(-c(1/4 - x)^2) with c = 50e.
double prescribed_field_example2(double x);

/// c(x) = 1 - (1-m)[tanh((x-0.3)/s) - tanh((x-0.7)/s)], s = 0.02, m = (1-0.001)/2.
double doping_profile(double x);

struct PoissonConfig {
  double beta = 0.002;
  std::function<double(double)> doping = doping_profile;
  double phi_left = 0.0;
  double phi_right = 5.0;
};

/// Potential at the n_cells+1 interface points and the field E = -dPhi/dx.
struct FieldState {
  std::vector<double> phi;
  /// Nodal E at the interface points; E is their piecewise-linear interpolant.
  std::vector<double> e_nodes;
  ScalarDGField e;
  double residual = 0.0;
};

/// Solves beta Phi'' = rho - c(x) with Dirichlet ends by second-order finite
/// differences on the interface points. rho at an interface is the average of
/// the two one-sided traces (one-sided at the domain ends).
FieldState solve_poisson(const ScalarDGField &rho, const PoissonConfig &config, const Mesh1D &mesh,
                         const DGBasis &basis);

/// Same solve for interface samples of the source (rho - c) already formed.
FieldState solve_poisson_nodes(std::span<const double> source, const PoissonConfig &config,
                               const Mesh1D &mesh, const DGBasis &basis);

/// Thomas algorithm. sub[0] and sup[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs);
/// Periodic tridiagonal system: sub[0] couples row 0 to x[n-1], sup[n-1] couples row n-1 to x[0].
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs);

}  // namespace apdg

#endif  // APDG_FIELD_HPP_
