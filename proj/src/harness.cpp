#include "apdg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "apdg/field.hpp"
#include "apdg/limit.hpp"

namespace apdg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::ofstream open_output(const std::filesystem::path &dir, const std::string &name,
                          std::vector<std::filesystem::path> *files = nullptr) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << std::setprecision(17);
  if (files != nullptr) files->push_back(path);
  return os;
}

double rate(double coarse_error, double fine_error, int coarse_n, int fine_n) {
  if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return kNaN;
  return std::log(coarse_error / fine_error) / std::log(static_cast<double>(fine_n) / coarse_n);
}

}  // namespace

namespace {

// Adds one cell's contribution. L2 uses the Gauss rule directly; L1 splits the
// cell at sign changes of d found on a fixed scan, so |d| is smooth on each piece.
void accumulate_cell(ErrorNorms &out, double h, const std::vector<double> &pts,
                     const std::vector<double> &wts, const std::function<double(double)> &d) {
  constexpr int kScan = 16;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double v = d(pts[q]);
    out.l2 += 0.5 * h * wts[q] * v * v;
    out.linf = std::max(out.linf, std::abs(v));
  }
  std::vector<double> cuts{-1.0};
  double xa = -1.0, fa = d(-1.0);
  out.linf = std::max(out.linf, std::abs(fa));
  for (int k = 1; k <= kScan; ++k) {
    const double xb = -1.0 + 2.0 * k / kScan;
    const double fb = d(xb);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = xa, hi = xb, flo = fa;
      for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = d(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    xa = xb;
    fa = fb;
  }
  out.linf = std::max(out.linf, std::abs(fa));
  cuts.push_back(1.0);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const double xi = 0.5 * (a + b) + 0.5 * (b - a) * pts[q];
      out.l1 += 0.25 * h * (b - a) * wts[q] * std::abs(d(xi));
    }
  }
}

}  // namespace

ErrorNorms compute_error_norms(const DGBasis &basis_a, const Mesh1D &mesh_a,
                               const ScalarDGField &a, const DGBasis &basis_b,
                               const Mesh1D &mesh_b, const ScalarDGField &b) {
  const bool a_fine = mesh_a.n_cells >= mesh_b.n_cells;
  const Mesh1D &fm = a_fine ? mesh_a : mesh_b;
  const Mesh1D &cm = a_fine ? mesh_b : mesh_a;
  const DGBasis &fb = a_fine ? basis_a : basis_b;
  const DGBasis &cb = a_fine ? basis_b : basis_a;
  const ScalarDGField &ff = a_fine ? a : b;
  const ScalarDGField &cf = a_fine ? b : a;
  const double tol = 1e-12 * fm.length();
  if (std::abs(fm.x_left - cm.x_left) > tol || std::abs(fm.x_right - cm.x_right) > tol ||
      fm.n_cells % cm.n_cells != 0) {
    throw std::invalid_argument("compute_error_norms: meshes have no common refinement");
  }
  if (ff.n_cells != fm.n_cells || cf.n_cells != cm.n_cells) {
    throw std::invalid_argument("compute_error_norms: field does not match its mesh");
  }
  const int ratio = fm.n_cells / cm.n_cells;
  std::vector<double> pts, wts;
  gauss_legendre(std::max(fb.degree(), cb.degree()) + 2, pts, wts);

  ErrorNorms out;
  for (int c = 0; c < fm.n_cells; ++c) {
    const int cc = c / ratio;
    const int sub = c % ratio;
    accumulate_cell(out, fm.h, pts, wts, [&](double xi) {
      const double xi_c = ratio == 1 ? xi : 2.0 * (sub + 0.5 * (xi + 1.0)) / ratio - 1.0;
      return evaluate(fb, fm, ff, c, xi) - evaluate(cb, cm, cf, cc, xi_c);
    });
  }
  out.l2 = std::sqrt(out.l2);
  return out;
}

ErrorNorms compute_error_norms(const DGBasis &basis, const Mesh1D &mesh, const ScalarDGField &a,
                               const std::function<double(double)> &g) {
  std::vector<double> pts, wts;
  gauss_legendre(basis.degree() + 4, pts, wts);
  ErrorNorms out;
  for (int c = 0; c < mesh.n_cells; ++c) {
    accumulate_cell(out, mesh.h, pts, wts, [&](double xi) {
      return evaluate(basis, mesh, a, c, xi) - g(mesh.center(c) + 0.5 * mesh.h * xi);
    });
  }
  out.l2 = std::sqrt(out.l2);
  return out;
}

std::optional<double> fit_loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

void parallel_for(int n, int threads, const std::function<void(int)> &body) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

long step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("step_count: dt and t_end must be positive");
  const double ratio = t_end / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - n) > 1e-6 * std::max(1.0, ratio)) {
    throw std::invalid_argument("t_end = " + format_number(t_end) +
                                " is not a whole number of steps dt = " + format_number(dt));
  }
  return n;
}

SimulationResult simulate(const ApScheme &scheme, const ParityState &initial, double t_end,
                          const SimulationOptions &options) {
  const double dt = scheme.dt();
  const long n = step_count(t_end, dt);
  std::vector<long> snap_steps;
  for (double s : options.snapshots) snap_steps.push_back(std::lround(s / dt));

  SimulationResult res;
  res.steps = n;
  res.min_f = std::numeric_limits<double>::infinity();
  ParityState state = initial;
  auto take_snapshots = [&](long step) {
    for (long s : snap_steps) {
      if (s == step) res.snapshots.push_back({state.t, state});
    }
  };
  if (options.record_equilibrium) {
    res.equilibrium.emplace_back(state.t, scheme.equilibrium_distance(state));
  }
  take_snapshots(0);
  StepDiagnostics diag;
  for (long step = 1; step <= n; ++step) {
    state = scheme.full_step(state, &diag);
    res.min_f = std::min(res.min_f, diag.min_f_sampled);
    res.negative_averages += diag.negative_averages;
    res.max_limiter_average_error = std::max(res.max_limiter_average_error, diag.limiter_average_error);
    const bool keep = step % options.diagnostics_every == 0 || step == n;
    if (keep) {
      res.diagnostics.push_back(diag);
      if (options.record_equilibrium) {
        res.equilibrium.emplace_back(state.t, scheme.equilibrium_distance(state));
      }
    }
    take_snapshots(step);
  }
  if (scheme.params().limiter_on) {
    LimiterReport rep;
    state = scheme.positivity_limit(state, &rep);
    res.min_f = std::min(res.min_f, rep.min_f);
    res.negative_averages += rep.negative_averages;
    res.max_limiter_average_error = std::max(res.max_limiter_average_error, rep.max_average_error);
  } else {
    res.min_f = std::min(res.min_f, scheme.min_sampled_f(state));
  }
  res.final_state = std::move(state);
  return res;
}

ApScheme make_scheme(const ExperimentConfig &config, int n_cells, double epsilon_override) {
  VelocityGrid grid(config.n_modes);
  CollisionKernel kernel = CollisionKernel::constant(grid, config.sigma, config.mu);
  SchemeParams params = make_scheme_params(config, grid, epsilon_override);
  const Mesh1D mesh(config.x_left, config.x_right, n_cells);
  if (!(params.dt > 0.0)) {
    const ApScheme probe(mesh, config.degree, grid, kernel, params);
    params.dt = config.t_end / std::ceil(config.t_end / probe.dt() - 1e-9);
  }
  return ApScheme(mesh, config.degree, std::move(grid), std::move(kernel), std::move(params));
}

std::string output_stem(const ExperimentConfig &config, int n_cells, double epsilon_override) {
  const std::string eps = epsilon_override > 0.0 ? format_number(epsilon_override) : config.epsilon;
  return config.name + "_eps" + eps + "_nx" + std::to_string(n_cells) + "_k" +
         std::to_string(config.degree);
}

AccuracyResult run_accuracy_study(const ExperimentConfig &config,
                                  const std::filesystem::path &out_dir) {
  std::vector<int> ns = config.mesh_sizes;
  if (ns.size() < 2) throw ConfigError("accuracy study needs at least two mesh sizes");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw ConfigError("mesh_sizes must be increasing");
  }
  const bool self = config.reference == "self";
  std::vector<int> cases = ns;
  if (self) {
    for (int n : ns) {
      if (std::find(cases.begin(), cases.end(), 2 * n) == cases.end()) cases.push_back(2 * n);
    }
  }
  std::vector<ScalarDGField> rho(cases.size());
  std::vector<double> dts(cases.size());
  const auto init = make_initial_condition(config);
  SimulationOptions opts;
  opts.diagnostics_every = std::numeric_limits<int>::max();
  parallel_for(static_cast<int>(cases.size()), config.threads, [&](int i) {
    const ApScheme scheme = make_scheme(config, cases[i]);
    const auto res = simulate(scheme, scheme.initial_state(init), config.t_end, opts);
    rho[i] = scheme.density(res.final_state);
    dts[i] = scheme.dt();
  });

  const DGBasis basis(config.degree);
  auto mesh_of = [&](int n) { return Mesh1D(config.x_left, config.x_right, n); };
  auto index_of = [&](int n) {
    return static_cast<std::size_t>(std::find(cases.begin(), cases.end(), n) - cases.begin());
  };

  AccuracyResult out;
  out.reference = config.reference;
  const double k2 = 4.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    AccuracyRow row;
    row.n_cells = ns[i];
    const std::size_t ci = index_of(ns[i]);
    if (self) {
      const std::size_t fi = index_of(2 * ns[i]);
      row.error = compute_error_norms(basis, mesh_of(ns[i]), rho[ci], basis, mesh_of(2 * ns[i]), rho[fi]);
    } else {
      double decay = std::exp(-k2 * config.t_end);
      if (config.reference == "exact_fe") {
        decay = std::pow(1.0 - k2 * dts[ci], static_cast<double>(step_count(config.t_end, dts[ci])));
      }
      const double a = config.amplitude;
      row.error = compute_error_norms(basis, mesh_of(ns[i]), rho[ci], [&](double x) {
        return a * decay * std::cos(2.0 * std::numbers::pi * x) + 1.0;
      });
    }
    if (i == 0) {
      row.order = {kNaN, kNaN, kNaN};
    } else {
      const auto &p = out.rows.back();
      row.order.l1 = rate(p.error.l1, row.error.l1, p.n_cells, row.n_cells);
      row.order.l2 = rate(p.error.l2, row.error.l2, p.n_cells, row.n_cells);
      row.order.linf = rate(p.error.linf, row.error.linf, p.n_cells, row.n_cells);
    }
    out.rows.push_back(row);
  }
  if (!out_dir.empty()) {
    auto os = open_output(out_dir, config.name + "_eps" + config.epsilon + "_k" +
                                       std::to_string(config.degree) + "_accuracy.csv");
    write_accuracy_csv(os, out);
  }
  return out;
}

void write_accuracy_csv(std::ostream &os, const AccuracyResult &result) {
  os << "n_cells,l1_error,l1_order,l2_error,l2_order,linf_error,linf_order\n";
  auto cell = [&](double v) {
    if (std::isnan(v)) return std::string();
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
  };
  for (const auto &r : result.rows) {
    os << r.n_cells << ',' << cell(r.error.l1) << ',' << cell(r.order.l1) << ','
       << cell(r.error.l2) << ',' << cell(r.order.l2) << ',' << cell(r.error.linf) << ','
       << cell(r.order.linf) << '\n';
  }
}

DriftDiffusionComparison run_drift_diffusion_reference(const ExperimentConfig &config, int n,
                                                       double dt) {
  const VelocityGrid grid(config.n_modes);
  const CollisionKernel kernel = CollisionKernel::constant(grid, config.sigma, config.mu);
  DriftDiffusionSetup setup;
  setup.x_left = config.x_left;
  setup.x_right = config.x_right;
  setup.n = n;
  setup.periodic = config.boundary == "periodic";
  setup.rho_left = 1.0;
  setup.rho_right = 1.0;
  setup.diffusion = diffusion_constant(grid, kernel);

  const Mesh1D mesh(config.x_left, config.x_right, n);
  const DGBasis linear(1);
  PoissonConfig pc;
  pc.beta = config.beta;
  pc.phi_left = config.phi_left;
  pc.phi_right = config.phi_right;
  auto poisson_of = [&](const DriftDiffusionState &s) {
    std::vector<double> src(s.rho.size());
    for (std::size_t p = 0; p < src.size(); ++p) src[p] = s.rho[p] - pc.doping(s.x[p]);
    return solve_poisson_nodes(src, pc, mesh, linear);
  };

  if (config.field == "prescribed") {
    const auto faces = drift_diffusion_faces(setup);
    std::vector<double> e(faces.size());
    for (std::size_t p = 0; p < faces.size(); ++p) e[p] = prescribed_field_example2(faces[p]);
    setup.face_field = [e](const DriftDiffusionState &) { return e; };
  } else if (config.field == "poisson") {
    if (setup.periodic) throw ConfigError("the Poisson drift-diffusion reference needs inflow boundaries");
    setup.face_field = [&](const DriftDiffusionState &s) {
      const auto fs = poisson_of(s);
      std::vector<double> e(s.rho.size() - 1);
      for (std::size_t p = 0; p < e.size(); ++p) e[p] = 0.5 * (fs.e_nodes[p] + fs.e_nodes[p + 1]);
      return e;
    };
  }

  const auto f0 = make_initial_condition(config);
  const auto v = grid.nodes();
  const auto dw = grid.density_weights();
  auto rho0 = [&](double x) {
    double s = 0.0;
    for (std::size_t l = 0; l < grid.size(); ++l) s += dw[l] * f0(x, v[l]);
    return s;
  };

  DriftDiffusionComparison out;
  out.state = drift_diffusion_solve(setup, rho0, config.t_end, dt);
  if (config.field == "poisson") {
    const auto fs = poisson_of(out.state);
    out.phi = fs.phi;
    out.e = fs.e_nodes;
  } else if (config.field == "prescribed") {
    for (double x : out.state.x) out.e.push_back(prescribed_field_example2(x));
  }
  return out;
}

ApSweepResult run_ap_sweep(const ExperimentConfig &config, const std::filesystem::path &out_dir) {
  const int n = config.mesh_sizes.front();
  const bool discrete = config.reference == "discrete_limit";
  std::vector<double> eps = config.epsilons;
  if (discrete) eps.push_back(config.reference_epsilon);
  std::vector<ScalarDGField> rho(eps.size());
  double dt = 0.0;
  const auto init = make_initial_condition(config);
  SimulationOptions opts;
  opts.diagnostics_every = std::numeric_limits<int>::max();
  parallel_for(static_cast<int>(eps.size()), config.threads, [&](int i) {
    const ApScheme scheme = make_scheme(config, n, eps[i]);
    const auto res = simulate(scheme, scheme.initial_state(init), config.t_end, opts);
    rho[i] = scheme.density(res.final_state);
    if (i == 0) dt = scheme.dt();
  });

  const DGBasis basis(config.degree);
  const Mesh1D mesh(config.x_left, config.x_right, n);
  ApSweepResult out;
  out.reference = config.reference;
  out.epsilons = config.epsilons;
  std::optional<DriftDiffusionComparison> dd;
  if (!discrete) {
    dd = run_drift_diffusion_reference(config, config.reference_nx,
                                       config.reference_dt > 0.0 ? config.reference_dt : dt);
  }
  for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
    if (discrete) {
      out.errors.push_back(compute_error_norms(basis, mesh, rho[i], basis, mesh, rho.back()).l2);
    } else {
      DriftDiffusionSetup s;
      s.x_left = config.x_left;
      s.x_right = config.x_right;
      s.n = config.reference_nx;
      s.periodic = config.boundary == "periodic";
      const auto &st = dd->state;
      out.errors.push_back(compute_error_norms(basis, mesh, rho[i], [&](double x) {
                             return drift_diffusion_interpolate(s, st, x);
                           }).l2);
    }
  }
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < out.epsilons.size(); ++i) {
    const double e = out.epsilons[i];
    if (e >= config.fit_min * (1.0 - 1e-9) && e <= config.fit_max * (1.0 + 1e-9)) {
      fx.push_back(e);
      fy.push_back(out.errors[i]);
    }
  }
  out.slope = fit_loglog_slope(fx, fy);
  if (!out_dir.empty()) {
    auto os = open_output(out_dir, config.name + "_nx" + std::to_string(n) + "_k" +
                                       std::to_string(config.degree) + "_ap_sweep.csv");
    write_ap_sweep_csv(os, out);
  }
  return out;
}

void write_ap_sweep_csv(std::ostream &os, const ApSweepResult &result) {
  os << "epsilon,error\n";
  for (std::size_t i = 0; i < result.epsilons.size(); ++i) {
    os << result.epsilons[i] << ',' << result.errors[i] << '\n';
  }
  os << "# slope," << (result.slope ? format_number(*result.slope) : std::string("absent")) << '\n';
}

namespace {

void write_density(std::ostream &os, const ApScheme &scheme, const ParityState &state) {
  write_pointwise_csv(os, scheme.basis(), scheme.mesh(), scheme.density(state), "rho");
}

void write_distribution(std::ostream &os, const ApScheme &scheme, const ParityState &state) {
  const ParityField f = scheme.reconstruct_f(state);
  const auto v = scheme.grid().nodes();
  const auto &mesh = scheme.mesh();
  os << "x,v,f\n";
  for (int c = 0; c < mesh.n_cells; ++c) {
    for (int l = 0; l < f.n_nodes; ++l) {
      os << mesh.center(c) << ',' << v[l] << ','
         << evaluate(scheme.basis(), mesh, f.slice(l), c, 0.0) << '\n';
    }
  }
}

double relative_l2(const std::vector<double> &a, const std::vector<double> &b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

ExampleResult run_example(const ExperimentConfig &config, const std::filesystem::path &out_dir) {
  const int n = config.mesh_sizes.front();
  const ApScheme scheme = make_scheme(config, n);
  SimulationOptions opts;
  opts.diagnostics_every = config.diagnostics_every;
  opts.snapshots = config.snapshots;
  opts.record_equilibrium = true;

  ExampleResult out;
  out.n_cells = n;
  out.run = simulate(scheme, scheme.initial_state(make_initial_condition(config)), config.t_end, opts);
  const FieldSamples fs = scheme.compute_field(out.run.final_state);
  if (fs.poisson) out.field = fs.poisson;

  if (config.drift_diffusion_comparison) {
    const double dt = config.reference_dt > 0.0 ? config.reference_dt : scheme.dt();
    const int ref_n = config.field == "poisson" ? n : config.reference_nx;
    out.drift_diffusion = run_drift_diffusion_reference(config, ref_n, dt);
    auto &dd = *out.drift_diffusion;
    DriftDiffusionSetup s;
    s.x_left = config.x_left;
    s.x_right = config.x_right;
    s.n = ref_n;
    s.periodic = config.boundary == "periodic";
    const ScalarDGField rho = scheme.density(out.run.final_state);
    std::vector<double> a, b;
    for (std::size_t p = 0; p < dd.state.x.size(); ++p) {
      a.push_back(evaluate_at(scheme.basis(), scheme.mesh(), rho, dd.state.x[p]));
      b.push_back(dd.state.rho[p]);
    }
    dd.density_discrepancy = relative_l2(a, b);
    if (out.field && dd.e.size() == out.field->e_nodes.size()) {
      dd.field_discrepancy = relative_l2(out.field->e_nodes, dd.e);
    }
  }

  if (out_dir.empty()) return out;
  const std::string stem = output_stem(config, n);
  {
    auto os = open_output(out_dir, stem + "_diagnostics.csv", &out.files);
    os << "step,t,mass,theorem_energy,example_energy,limiter_activations,min_f_sampled\n";
    for (const auto &d : out.run.diagnostics) {
      os << d.step << ',' << d.t << ',' << d.mass << ',' << d.theorem_energy << ','
         << d.example_energy << ',' << d.limiter_activations << ',' << d.min_f_sampled << '\n';
    }
  }
  {
    auto os = open_output(out_dir, stem + "_equilibrium.csv", &out.files);
    os << "t,equilibrium_distance\n";
    for (const auto &[t, d] : out.run.equilibrium) os << t << ',' << d << '\n';
  }
  auto snapshot_files = [&](double t, const ParityState &state) {
    const std::string tag = "_t" + format_number(t);
    auto rho_os = open_output(out_dir, stem + tag + "_rho.csv", &out.files);
    write_density(rho_os, scheme, state);
    auto f_os = open_output(out_dir, stem + tag + "_f.csv", &out.files);
    write_distribution(f_os, scheme, state);
  };
  for (const auto &snap : out.run.snapshots) snapshot_files(snap.t, snap.state);
  snapshot_files(out.run.final_state.t, out.run.final_state);
  if (out.field) {
    auto os = open_output(out_dir, stem + "_field.csv", &out.files);
    os << "x,phi,E\n";
    for (std::size_t p = 0; p < out.field->phi.size(); ++p) {
      os << scheme.mesh().interface(static_cast<int>(p)) << ',' << out.field->phi[p] << ','
         << out.field->e_nodes[p] << '\n';
    }
  }
  if (out.drift_diffusion) {
    const auto &dd = *out.drift_diffusion;
    auto os = open_output(out_dir, stem + "_drift_diffusion.csv", &out.files);
    os << "x,rho,phi,E\n";
    for (std::size_t p = 0; p < dd.state.x.size(); ++p) {
      os << dd.state.x[p] << ',' << dd.state.rho[p] << ','
         << (p < dd.phi.size() ? dd.phi[p] : 0.0) << ',' << (p < dd.e.size() ? dd.e[p] : 0.0)
         << '\n';
    }
  }
  return out;
}

std::vector<CheckResult> run_checks(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<CheckResult> out;
  auto record = [&](std::string name, double value, double tol) {
    out.push_back({std::move(name), value <= tol, value, tol});
  };

  const VelocityGrid grid(15);
  const auto v = grid.nodes();
  const auto mx = grid.maxwellian();
  const auto dw = grid.density_weights();
  const int nn = static_cast<int>(grid.size());
  const CollisionKernel kernel = CollisionKernel::constant(grid, 1.0, 2.0);

  {
    double err = 0.0;
    double dfact = 1.0;
    for (int p = 0; p <= 7; ++p) {
      double s = 0.0;
      for (int l = 0; l < nn; ++l) s += dw[l] * mx[l] * std::pow(v[l], 2 * p);
      err = std::max(err, std::abs(s - dfact) / dfact);
      dfact *= 2 * p + 1;
    }
    record("maxwellian_moments", err, 1e-12);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> f(nn);
      for (int l = 0; l < nn; ++l) f[l] = mx[l] * (1.5 + unit(rng)) * (1.0 + 0.3 * unit(rng) * v[l]);
      worst = std::max(worst, std::abs(moment_density(grid, collision_apply(kernel, grid, f))));
    }
    record("collision_conserves_density", worst, 1e-11);
  }

  const Mesh1D mesh(0.0, 1.0, 12);
  const DGBasis basis(2);
  auto random_scalar = [&] {
    ScalarDGField f(mesh.n_cells, basis.n_modes());
    for (auto &c : f.coef) c = unit(rng);
    return f;
  };
  {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_scalar();
      const auto b = random_scalar();
      worst = std::max(worst, std::abs(bilinear_L(basis, mesh, a, b, LVariant::plus) +
                                       bilinear_L(basis, mesh, b, a, LVariant::minus)));
    }
    record("l_plus_minus_skew", worst, 1e-11);
  }

  SchemeParams params;
  params.epsilon = 0.3;
  params.dt = 1e-4;
  const ApScheme scheme(mesh, 2, grid, kernel, params);
  auto random_state = [&] {
    ParityState s{scheme.zero_field(), scheme.zero_field(), 0.0};
    for (int c = 0; c < mesh.n_cells; ++c) {
      for (int m = 0; m < basis.n_modes(); ++m) {
        const double amp = m == 0 ? 1.0 : 0.2;
        for (int l = 0; l < nn / 2; ++l) {
          const double a = amp * mx[l] * (m == 0 ? 1.5 + unit(rng) : unit(rng));
          const double b = amp * mx[l] * unit(rng);
          s.r(c, m, l) = s.r(c, m, nn - 1 - l) = a;
          s.j(c, m, l) = b;
          s.j(c, m, nn - 1 - l) = -b;
        }
      }
    }
    return s;
  };
  {
    double dens = 0.0;
    double norm_growth = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = random_state();
      const auto rs = scheme.relaxation_step_r(s);
      const auto r0 = density(grid, s.r);
      const auto r1 = density(grid, rs);
      for (std::size_t i = 0; i < r0.coef.size(); ++i) dens = std::max(dens, std::abs(r0.coef[i] - r1.coef[i]));
      norm_growth = std::max(norm_growth, phase_norm(rs, grid, kernel) - phase_norm(s.r, grid, kernel));
    }
    record("relaxation_preserves_density", dens, 1e-12);
    record("relaxation_contracts_phase_norm", std::max(0.0, norm_growth), 1e-12);
  }
  {
    auto s = random_state();
    const double m0 = scheme.mass(s);
    for (int step = 0; step < 100; ++step) s = scheme.full_step(s);
    record("mass_conservation_100_steps", std::abs(scheme.mass(s) - m0) / std::abs(m0), 1e-12);
  }
  {
    const auto s = random_state();
    LimiterReport rep;
    scheme.positivity_limit(s, &rep);
    record("limiter_average_preservation", rep.max_average_error, 1e-14);
    record("limiter_nonnegative_samples", std::max(0.0, -rep.min_f), 1e-15);
  }
  {
    SchemeParams vp = params;
    vp.epsilon = Knudsen(std::function<double(double)>(mixed_regime_epsilon));
    const ApScheme vs(mesh, 2, grid, kernel, vp);
    const ParityField f = vs.project_distribution([&](double x, double vv) {
      return std::exp(-0.5 * (vv - 0.3) * (vv - 0.3)) * (1.2 + std::sin(6.0 * x));
    });
    const ParityField back = vs.reconstruct_f(vs.even_odd_decompose(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.data.size(); ++i) err = std::max(err, std::abs(f.data[i] - back.data[i]));
    record("parity_roundtrip_variable_epsilon", err, 1e-12);
  }
  {
    const int np = 64;
    const Mesh1D pm(0.0, 1.0, np);
    PoissonConfig pc;
    pc.phi_left = 0.0;
    pc.phi_right = 0.0;
    std::vector<double> src(np + 1);
    for (int p = 0; p <= np; ++p) {
      src[p] = -pc.beta * std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * pm.interface(p));
    }
    const auto fs = solve_poisson_nodes(src, pc, pm, DGBasis(1));
    double err = 0.0;
    for (int p = 0; p <= np; ++p) err = std::max(err, std::abs(fs.phi[p] - std::sin(std::numbers::pi * pm.interface(p))));
    record("poisson_manufactured_h64", err, 1e-3);
    record("poisson_residual", fs.residual, 1e-12);
  }
  {
    SchemeParams ap;
    ap.epsilon = 1e-8;
    ap.dt = 1e-5;
    ap.transport = TransportIntegrator::forward_euler;
    const ApScheme as(mesh, 2, grid, kernel, ap);
    auto s = as.initial_state([&](double x, double vv) {
      return std::exp(-0.5 * vv * vv) / std::sqrt(2.0 * std::numbers::pi) *
             (1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x));
    });
    const auto rho0 = as.density(s);
    const auto s1 = as.full_step(s);
    const auto expect = ldg_limit_step(mesh, basis, rho0, diffusion_constant(grid, kernel), ap.dt);
    const auto got = as.density(s1);
    double err = 0.0;
    for (std::size_t i = 0; i < got.coef.size(); ++i) err = std::max(err, std::abs(got.coef[i] - expect.coef[i]));
    record("ap_limit_matches_ldg_step", err, 1e-10);
  }
  return out;
}

}  // namespace apdg
