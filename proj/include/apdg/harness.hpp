#ifndef APDG_HARNESS_HPP_
#define APDG_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apdg/config.hpp"
#include "apdg/limit.hpp"
#include "apdg/scheme.hpp"

namespace apdg {

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Norms of a - b. The finer mesh must refine the coarser one (same interval,
/// cell count a multiple). L1/L2 use a Gauss rule exact for the squared
/// difference; Linf is taken over those Gauss points plus cell endpoints.
ErrorNorms compute_error_norms(const DGBasis &basis_a, const Mesh1D &mesh_a,
                               const ScalarDGField &a, const DGBasis &basis_b,
                               const Mesh1D &mesh_b, const ScalarDGField &b);
/// Norms of a - g for a function g, on the same sample set with a k+4 point rule.
ErrorNorms compute_error_norms(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &a,
                               const std::function<double(double)> &g);

/// Least-squares slope of log y against log x; absent with fewer than two
/// usable (positive) points.
std::optional<double> fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// Runs body(i) for i in [0, n) on up to `threads` threads. Each index is
/// handled by exactly one call, so results written per index are deterministic.
void parallel_for(int n, int threads, const std::function<void(int)> &body);

struct SimulationOptions {
  int diagnostics_every = 1;
  std::vector<double> snapshots;
  bool record_equilibrium = false;
};

struct Snapshot {
  double t = 0.0;
  ParityState state;
};

struct SimulationResult {
  ParityState final_state;
  std::vector<StepDiagnostics> diagnostics;
  /// (t, |||f - rho M|||) pairs, including t = 0.
  std::vector<std::pair<double, double>> equilibrium;
  std::vector<Snapshot> snapshots;
  long steps = 0;
  double min_f = 0.0;
  long negative_averages = 0;
  double max_limiter_average_error = 0.0;
};

/// Number of steps of size dt that reach t_end; throws if t_end is not a multiple of dt.
long step_count(double t_end, double dt);

/// Advances `initial` to t_end with the scheme's dt. Diagnostics are kept for
/// every step that is a multiple of diagnostics_every and for the last step.
SimulationResult simulate(const ApScheme &scheme, const ParityState &initial, double t_end,
                          const SimulationOptions &options = {});

/// Scheme for one (mesh size, epsilon) case of a config; dt = 0 selects the
/// automatic step, rounded down so that t_end is a whole number of steps.
ApScheme make_scheme(const ExperimentConfig &config, int n_cells, double epsilon_override = 0.0);

struct AccuracyRow {
  int n_cells = 0;
  ErrorNorms error;
  /// NaN on the first row.
  ErrorNorms order;
};

struct AccuracyResult {
  std::string reference;
  std::vector<AccuracyRow> rows;
};

/// Density errors of the accuracy experiment. `exact` compares with the exact
/// drift-diffusion solution, `exact_fe` with the same Fourier mode advanced by
/// the forward-Euler factor (1 - 4 pi^2 dt)^n, `self` with the run on 2 N cells.
AccuracyResult run_accuracy_study(const ExperimentConfig &config,
                                  const std::filesystem::path &out_dir = {});
void write_accuracy_csv(std::ostream &os, const AccuracyResult &result);

struct ApSweepResult {
  std::vector<double> epsilons;
  std::vector<double> errors;
  std::optional<double> slope;
  std::string reference;
};

/// ||rho_eps - rho_ref||_{L2} at t_end for every epsilon of the config; the
/// slope is fitted over epsilons in [fit_min, fit_max].
ApSweepResult run_ap_sweep(const ExperimentConfig &config, const std::filesystem::path &out_dir = {});
void write_ap_sweep_csv(std::ostream &os, const ApSweepResult &result);

struct DriftDiffusionComparison {
  DriftDiffusionState state;
  std::vector<double> phi;
  std::vector<double> e;
  /// Relative L2 distance of the two E fields at the interface points (Poisson runs).
  double field_discrepancy = 0.0;
  /// Relative L2 distance of the densities.
  double density_discrepancy = 0.0;
};

struct ExampleResult {
  SimulationResult run;
  int n_cells = 0;
  std::optional<FieldState> field;
  std::optional<DriftDiffusionComparison> drift_diffusion;
  std::vector<std::filesystem::path> files;
};

/// Runs a single-mesh experiment (first entry of mesh_sizes) and writes its
/// profiles, distribution grids, field and diagnostic series.
ExampleResult run_example(const ExperimentConfig &config, const std::filesystem::path &out_dir = {});

/// Drift-diffusion reference matching the config's boundary and field on
/// `n` cells: Dirichlet rho = 1 for inflow runs, periodic otherwise.
DriftDiffusionComparison run_drift_diffusion_reference(const ExperimentConfig &config, int n,
                                                       double dt);

/// Base file name encoding experiment, epsilon, N_x and k.
std::string output_stem(const ExperimentConfig &config, int n_cells, double epsilon_override = 0.0);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Fast invariant suite on seeded random data.
std::vector<CheckResult> run_checks(std::uint64_t seed);

}  // namespace apdg

#endif  // APDG_HARNESS_HPP_
