#ifndef APDG_CONFIG_HPP_
#define APDG_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "apdg/scheme.hpp"

namespace apdg {

enum class ExperimentKind { accuracy, prescribed_field, boltzmann_poisson, mixed_regime, ap_sweep, custom };

/// Thrown for malformed or inconsistent configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat experiment description read from `key = value` lines.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::custom;
  std::string name = "experiment";

  std::vector<int> mesh_sizes{20};
  int degree = 2;
  int n_modes = 15;
  double x_left = 0.0;
  double x_right = 1.0;

  /// "mixed" selects the spatially varying Knudsen profile; otherwise a number.
  std::string epsilon = "1";
  std::vector<double> epsilons;
  double sigma = 1.0;
  double mu = 2.0;

  double dt = 0.0;
  double t_end = 0.0;

  /// periodic | inflow
  std::string boundary = "periodic";
  /// absolute | literal
  std::string inflow_parity = "absolute";
  /// zero | prescribed | poisson
  std::string field = "zero";
  double beta = 0.002;
  double phi_left = 0.0;
  double phi_right = 5.0;

  /// maxwellian | maxwellian_cos | double_maxwellian
  std::string initial = "maxwellian";
  double amplitude = 1.0;

  bool limiter = true;
  bool limit_stages = false;
  /// ssprk3 | forward_euler
  std::string transport = "ssprk3";
  /// r_plus | r_minus
  std::string j_flux = "r_plus";

  /// Accuracy study reference: exact | exact_fe | self.
  /// AP sweep reference: discrete_limit | drift_diffusion.
  std::string reference = "exact";
  double reference_epsilon = 1e-8;
  int reference_nx = 500;
  double reference_dt = 0.0;
  double fit_min = 1e-4;
  double fit_max = 1e-3;

  std::vector<double> snapshots;
  int diagnostics_every = 1;
  bool drift_diffusion_comparison = false;

  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
};

ExperimentKind parse_experiment_kind(const std::string &text);
std::string to_string(ExperimentKind kind);

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, duplicate
/// keys and malformed values raise ConfigError naming the line; the result is validated.
ExperimentConfig parse_config(std::istream &in, const std::string &source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path &path);
/// Checks cross-field invariants (dt, t_end > 0, known enum values, ...).
void validate_config(const ExperimentConfig &config);

/// Knudsen number described by the config; `epsilon_override` > 0 replaces it.
Knudsen make_knudsen(const ExperimentConfig &config, double epsilon_override = 0.0);
SchemeParams make_scheme_params(const ExperimentConfig &config, const VelocityGrid &grid,
                                double epsilon_override = 0.0);
/// Initial distribution f(x, v) named by `initial`.
std::function<double(double, double)> make_initial_condition(const ExperimentConfig &config);

}  // namespace apdg

#endif  // APDG_CONFIG_HPP_
