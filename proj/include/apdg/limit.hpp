#ifndef APDG_LIMIT_HPP_
#define APDG_LIMIT_HPP_

#include <functional>
#include <vector>

#include "apdg/dg.hpp"

namespace apdg {

/// One forward-Euler LDG step for rho_t = D rho_xx with periodic closure:
/// (g, eta) = L+(rho, eta), (rho_new - rho, xi) / dt = D L-(g, xi).
ScalarDGField ldg_limit_step(const Mesh1D &mesh, const DGBasis &basis, const ScalarDGField &rho,
                             double diffusion, double dt);

/// rho(x, t) = exp(-4 pi^2 t) cos(2 pi x) + 1.
double exact_solution_example1(double x, double t);

struct DriftDiffusionState {
  std::vector<double> x;
  std::vector<double> rho;
  double t = 0.0;
};

/// Finite-difference drift-diffusion problem rho_t = (D (rho_x + E rho))_x.
/// Periodic grids are cell centred (n points); Dirichlet grids use the n+1
/// interface points of n uniform cells with both ends pinned.
struct DriftDiffusionSetup {
  double x_left = 0.0;
  double x_right = 1.0;
  int n = 100;
  bool periodic = true;
  double rho_left = 1.0;
  double rho_right = 1.0;
  double diffusion = 1.0;
  /// E at the n_faces cell faces of the current state (face p sits between
  /// points p and p+1; periodic grids have n faces, Dirichlet grids n).
  /// Empty function means E = 0.
  std::function<std::vector<double>(const DriftDiffusionState &)> face_field;
};

DriftDiffusionState drift_diffusion_initial(const DriftDiffusionSetup &setup,
                                            const std::function<double(double)> &rho0);
/// One Crank-Nicolson step with the field frozen at the start of the step.
DriftDiffusionState drift_diffusion_step(const DriftDiffusionSetup &setup,
                                         const DriftDiffusionState &state, double dt);
/// Integrates to t_end with steps of at most dt (the last one shortened).
DriftDiffusionState drift_diffusion_solve(const DriftDiffusionSetup &setup,
                                          const std::function<double(double)> &rho0, double t_end,
                                          double dt);
/// Face coordinates of the grid.
std::vector<double> drift_diffusion_faces(const DriftDiffusionSetup &setup);
double drift_diffusion_mass(const DriftDiffusionSetup &setup, const DriftDiffusionState &state);
/// Linear interpolation of the grid solution (periodic wrap where applicable).
double drift_diffusion_interpolate(const DriftDiffusionSetup &setup,
                                   const DriftDiffusionState &state, double x);

}  // namespace apdg

#endif  // APDG_LIMIT_HPP_
