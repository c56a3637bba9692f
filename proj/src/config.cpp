#include "apdg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace apdg {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string &v, const std::string &where) {
  double out = 0.0;
  const char *first = v.data();
  const char *last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  }
  return out;
}

long to_long(const std::string &v, const std::string &where) {
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string &v, const std::string &where) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

template <class F>
auto to_list(const std::string &v, const std::string &where, F &&convert) {
  std::vector<decltype(convert(std::string{}, where))> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(where + ": empty list entry");
    out.push_back(convert(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

void require_one_of(const std::string &key, const std::string &value,
                    std::initializer_list<const char *> allowed) {
  for (const char *a : allowed) {
    if (value == a) return;
  }
  std::string msg = key + ": '" + value + "' is not one of";
  for (const char *a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg);
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string &text) {
  static const std::map<std::string, ExperimentKind> kinds{
      {"accuracy", ExperimentKind::accuracy},
      {"prescribed_field", ExperimentKind::prescribed_field},
      {"boltzmann_poisson", ExperimentKind::boltzmann_poisson},
      {"mixed_regime", ExperimentKind::mixed_regime},
      {"ap_sweep", ExperimentKind::ap_sweep},
      {"custom", ExperimentKind::custom},
  };
  const auto it = kinds.find(text);
  if (it == kinds.end()) throw ConfigError("unknown experiment kind '" + text + "'");
  return it->second;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::accuracy: return "accuracy";
    case ExperimentKind::prescribed_field: return "prescribed_field";
    case ExperimentKind::boltzmann_poisson: return "boltzmann_poisson";
    case ExperimentKind::mixed_regime: return "mixed_regime";
    case ExperimentKind::ap_sweep: return "ap_sweep";
    case ExperimentKind::custom: return "custom";
  }
  return "custom";
}

ExperimentConfig parse_config(std::istream &in, const std::string &source_name) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) throw ConfigError(where + ": empty key or value");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    const std::string at = where + " (" + key + ")";

    auto num = [&] { return to_double(val, at); };
    auto integer = [&] { return static_cast<int>(to_long(val, at)); };
    if (key == "experiment") c.kind = parse_experiment_kind(val);
    else if (key == "name") c.name = val;
    else if (key == "mesh_sizes") {
      c.mesh_sizes = to_list(val, at, [](const std::string &s, const std::string &w) {
        return static_cast<int>(to_long(s, w));
      });
    } else if (key == "degree") c.degree = integer();
    else if (key == "n_modes") c.n_modes = integer();
    else if (key == "x_left") c.x_left = num();
    else if (key == "x_right") c.x_right = num();
    else if (key == "epsilon") c.epsilon = val;
    else if (key == "epsilons") c.epsilons = to_list(val, at, to_double);
    else if (key == "sigma") c.sigma = num();
    else if (key == "mu") c.mu = num();
    else if (key == "dt") c.dt = num();
    else if (key == "t_end") c.t_end = num();
    else if (key == "boundary") c.boundary = val;
    else if (key == "inflow_parity") c.inflow_parity = val;
    else if (key == "field") c.field = val;
    else if (key == "beta") c.beta = num();
    else if (key == "phi_left") c.phi_left = num();
    else if (key == "phi_right") c.phi_right = num();
    else if (key == "initial") c.initial = val;
    else if (key == "amplitude") c.amplitude = num();
    else if (key == "limiter") c.limiter = to_bool(val, at);
    else if (key == "limit_stages") c.limit_stages = to_bool(val, at);
    else if (key == "transport") c.transport = val;
    else if (key == "j_flux") c.j_flux = val;
    else if (key == "reference") c.reference = val;
    else if (key == "reference_epsilon") c.reference_epsilon = num();
    else if (key == "reference_nx") c.reference_nx = integer();
    else if (key == "reference_dt") c.reference_dt = num();
    else if (key == "fit_min") c.fit_min = num();
    else if (key == "fit_max") c.fit_max = num();
    else if (key == "snapshots") c.snapshots = to_list(val, at, to_double);
    else if (key == "diagnostics_every") c.diagnostics_every = integer();
    else if (key == "drift_diffusion_comparison") c.drift_diffusion_comparison = to_bool(val, at);
    else if (key == "output_dir") c.output_dir = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(val, at));
    else if (key == "threads") c.threads = integer();
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

void validate_config(const ExperimentConfig &c) {
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (c.dt < 0.0) throw ConfigError("dt must be positive (or 0 for the automatic step)");
  if (c.degree < 0 || c.degree > 6) throw ConfigError("degree must be in [0, 6]");
  if (c.n_modes < 1 || c.n_modes % 2 == 0) throw ConfigError("n_modes must be odd and >= 1");
  if (!(c.x_right > c.x_left)) throw ConfigError("x_right must exceed x_left");
  if (c.mesh_sizes.empty()) throw ConfigError("mesh_sizes must not be empty");
  for (int n : c.mesh_sizes) {
    if (n < 1) throw ConfigError("mesh sizes must be positive");
  }
  if (c.epsilon != "mixed") {
    const double e = to_double(c.epsilon, "epsilon");
    if (!(e > 0.0)) throw ConfigError("epsilon must be positive");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0)) throw ConfigError("epsilons must be positive");
  }
  if (!(c.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(c.beta > 0.0)) throw ConfigError("beta must be positive");
  if (c.diagnostics_every < 1) throw ConfigError("diagnostics_every must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  require_one_of("boundary", c.boundary, {"periodic", "inflow"});
  require_one_of("inflow_parity", c.inflow_parity, {"absolute", "literal"});
  require_one_of("field", c.field, {"zero", "prescribed", "poisson"});
  require_one_of("initial", c.initial, {"maxwellian", "maxwellian_cos", "double_maxwellian"});
  require_one_of("transport", c.transport, {"ssprk3", "forward_euler"});
  require_one_of("j_flux", c.j_flux, {"r_plus", "r_minus"});
  if (c.kind == ExperimentKind::accuracy) {
    require_one_of("reference", c.reference, {"exact", "exact_fe", "self"});
    if (c.mesh_sizes.size() < 2) throw ConfigError("accuracy study needs at least two mesh sizes");
    if (c.reference != "self" && (c.initial != "maxwellian_cos" || c.field != "zero" ||
                                  c.boundary != "periodic")) {
      throw ConfigError("the exact reference needs initial = maxwellian_cos, field = zero, periodic");
    }
  }
  if (c.kind == ExperimentKind::ap_sweep) {
    require_one_of("reference", c.reference, {"discrete_limit", "drift_diffusion"});
    if (c.epsilons.empty()) throw ConfigError("ap_sweep needs an epsilons list");
    if (!(c.fit_max > c.fit_min)) throw ConfigError("fit_max must exceed fit_min");
    if (c.reference_nx < 3) throw ConfigError("reference_nx must be >= 3");
  }
  for (double s : c.snapshots) {
    if (s < 0.0 || s > c.t_end) throw ConfigError("snapshots must lie in [0, t_end]");
  }
}

Knudsen make_knudsen(const ExperimentConfig &c, double epsilon_override) {
  if (epsilon_override > 0.0) return Knudsen(epsilon_override);
  if (c.epsilon == "mixed") return Knudsen(std::function<double(double)>(mixed_regime_epsilon));
  return Knudsen(to_double(c.epsilon, "epsilon"));
}

SchemeParams make_scheme_params(const ExperimentConfig &c, const VelocityGrid &grid,
                                double epsilon_override) {
  SchemeParams p;
  p.epsilon = make_knudsen(c, epsilon_override);
  p.mu = c.mu;
  p.dt = c.dt;
  p.limiter_on = c.limiter;
  p.limit_stages = c.limit_stages;
  p.transport = c.transport == "forward_euler" ? TransportIntegrator::forward_euler
                                               : TransportIntegrator::ssprk3;
  p.j_transport_flux = c.j_flux == "r_minus" ? JTransportFlux::r_minus : JTransportFlux::r_plus;
  if (c.boundary == "inflow") {
    p.boundary = BoundarySpec::maxwellian_inflow(grid);
    p.boundary.parity =
        c.inflow_parity == "literal" ? InflowParity::literal : InflowParity::absolute;
  }
  if (c.field == "prescribed") {
    p.field.kind = FieldKind::prescribed;
    p.field.prescribed = prescribed_field_example2;
  } else if (c.field == "poisson") {
    p.field.kind = FieldKind::poisson;
    p.field.poisson.beta = c.beta;
    p.field.poisson.phi_left = c.phi_left;
    p.field.poisson.phi_right = c.phi_right;
  }
  return p;
}

std::function<double(double, double)> make_initial_condition(const ExperimentConfig &c) {
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  if (c.initial == "maxwellian_cos") {
    const double a = c.amplitude;
    return [norm, a](double x, double v) {
      return norm * std::exp(-0.5 * v * v) * (a * std::cos(2.0 * std::numbers::pi * x) + 1.0);
    };
  }
  if (c.initial == "double_maxwellian") {
    return [](double x, double v) {
      const double u0 = 0.2;
      const double t0 = (5.0 - 2.0 * std::cos(2.0 * std::numbers::pi * x)) / 20.0;
      const double rho0 = (2.0 - std::sin(2.0 * std::numbers::pi * x)) / 2.0;
      return 0.5 * rho0 *
             (std::exp(-(v - u0) * (v - u0) / t0) + std::exp(-(v + u0) * (v + u0) / t0));
    };
  }
  return [norm](double, double v) { return norm * std::exp(-0.5 * v * v); };
}

}  // namespace apdg
