// Acceptance run: one PASS/FAIL line per criterion, followed by indented detail lines.
// Exit status is 0 when every criterion passes, or when every failing criterion is
// listed with --allow-red (the FAIL lines are still printed).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apdg/config.hpp"
#include "apdg/harness.hpp"
#include "apdg/limit.hpp"

using namespace apdg;

namespace {

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;
};

std::string fmt(double x, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", prec, x);
  return buf;
}

std::string fixed(double x, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

ExperimentConfig config(const std::string &name) {
  return load_config(std::filesystem::path(APDG_CONFIG_DIR) / name);
}

std::string order_list(const AccuracyResult &r) {
  std::string s;
  for (const auto &row : r.rows) {
    s += " N=" + std::to_string(row.n_cells) + ":" + fmt(row.error.l2, 2);
    if (!std::isnan(row.order.l2)) s += "(" + fixed(row.order.l2) + ")";
  }
  return s;
}

bool orders_in(const AccuracyResult &r, int min_n, double lo, double hi) {
  bool ok = true;
  int counted = 0;
  for (const auto &row : r.rows) {
    if (row.n_cells < min_n || std::isnan(row.order.l2)) continue;
    ++counted;
    ok = ok && row.order.l2 >= lo && row.order.l2 <= hi;
  }
  return ok && counted > 0;
}

Outcome criterion1() {
  Outcome o;
  auto cfg = config("accuracy_diffusive_k2.cfg");
  const auto res = run_accuracy_study(cfg);
  const double e64 = res.rows.back().error.l2;
  const bool orders = orders_in(res, 8, 2.7, 3.2);
  const bool level = res.rows.back().n_cells == 64 && e64 <= 2 * 9.99e-7 && e64 >= 9.99e-7 / 2;
  o.pass = orders && level;
  o.details.push_back("rho L2 vs exact limit (order):" + order_list(res));
  o.details.push_back("orders in [2.7,3.2] for N>=8: " + std::string(orders ? "yes" : "no") +
                      "; N=64 error " + fmt(e64) + " vs target 9.99e-7 (factor 2): " +
                      (level ? "yes" : "no"));
  auto fe = config("accuracy_diffusive_fe.cfg");
  const auto rf = run_accuracy_study(fe);
  o.details.push_back("supplementary, forward-Euler transport vs Euler-factor reference (spatial error only):" +
                      order_list(rf));
  return o;
}

Outcome criterion2() {
  Outcome o;
  auto kin = config("accuracy_kinetic_k2.cfg");
  const auto rk = run_accuracy_study(kin);
  const bool k2 = orders_in(rk, 16, 2.7, 3.2);
  o.details.push_back("k=2 eps=0.5 self-convergence, ||rho_N - rho_2N|| (order):" + order_list(rk));

  bool k3 = false;
  auto dif = config("accuracy_diffusive_k3.cfg");
  try {
    const auto r3 = run_accuracy_study(dif);
    k3 = orders_in(r3, 16, 3.6, 4.2);
    o.details.push_back("k=3 eps=1e-5 vs exact limit (order):" + order_list(r3));
  } catch (const std::exception &e) {
    o.details.push_back(std::string("k=3 eps=1e-5 at dt=2e-6: ") + e.what());
  }
  // Same data on the meshes the step size can carry, against the time-discrete reference.
  auto fe3 = config("accuracy_diffusive_fe.cfg");
  fe3.degree = 3;
  const auto rf3 = run_accuracy_study(fe3);
  o.details.push_back("supplementary k=3 eps=1e-5, forward-Euler transport vs Euler-factor reference:" + order_list(rf3));
  o.pass = k2 && k3;
  o.details.push_back(std::string("k=2 part: ") + (k2 ? "pass" : "fail") + "; k=3 part: " + (k3 ? "pass" : "fail"));
  return o;
}

Outcome criterion3() {
  Outcome o;
  VelocityGrid grid(15);
  auto kernel = CollisionKernel::constant(grid, 1.0, 2.0);
  SchemeParams p;
  p.epsilon = 1e-8;
  p.dt = 1e-5;
  p.limiter_on = false;
  p.transport = TransportIntegrator::forward_euler;
  const ApScheme s(Mesh1D(0.0, 1.0, 16), 2, grid, kernel, p);
  const double d = diffusion_constant(s.grid(), s.kernel());
  auto st = s.initial_state([](double x, double v) {
    return std::exp(-0.5 * v * v) / std::sqrt(2 * std::numbers::pi) * (1.0 + std::cos(2 * std::numbers::pi * x));
  });
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const auto expect = ldg_limit_step(s.mesh(), s.basis(), s.density(st), d, p.dt);
    st = s.full_step(st);
    const auto got = s.density(st);
    for (std::size_t i = 0; i < got.coef.size(); ++i) worst = std::max(worst, std::abs(got.coef[i] - expect.coef[i]));
  }
  o.pass = worst <= 1e-10;
  o.details.push_back("max per-step coefficient difference over 100 steps: " + fmt(worst) + " (tol 1e-10)");
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto cfg = config("ap_sweep.cfg");
  cfg.epsilons = {1e-4, 2e-4, 4e-4, 1e-3};
  const auto res = run_ap_sweep(cfg);
  std::string line = "||rho_eps - rho_limit||_L2:";
  for (std::size_t i = 0; i < res.epsilons.size(); ++i) line += " " + fmt(res.epsilons[i], 0) + ":" + fmt(res.errors[i], 2);
  o.details.push_back(line);
  o.pass = res.slope && std::abs(*res.slope - 1.0) <= 0.3;
  o.details.push_back("fitted slope over [1e-4,1e-3]: " + (res.slope ? fixed(*res.slope, 3) : std::string("absent")) +
                      " (target 1.0 +- 0.3); reference " + res.reference);
  return o;
}

Outcome criterion5() {
  Outcome o;
  o.pass = true;
  const int n = 16;
  const double h = 1.0 / n;
  const double dt = 0.05 * h * h / 31.0;
  for (double eps : {0.5, 1e-2, 1e-5}) {
    VelocityGrid grid(15);
    SchemeParams p;
    p.epsilon = eps;
    p.dt = dt;
    p.limiter_on = false;
    const ApScheme s(Mesh1D(0.0, 1.0, n), 2, grid, CollisionKernel::constant(grid, 1.0, 2.0), p);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto f = s.project_distribution([](double x, double v) {
      return std::exp(-0.5 * v * v) * (1.0 + 0.5 * std::sin(2 * std::numbers::pi * x) + 0.3 * v * std::cos(4 * std::numbers::pi * x));
    });
    for (auto &c : f.data) c += 0.05 * u(rng);
    auto st = s.even_odd_decompose(f);
    double prev = s.energy_norms(st).theorem_energy;
    const double e0 = prev;
    double worst_rel = -std::numeric_limits<double>::infinity();
    long increases = 0;
    for (int k = 0; k < 10000; ++k) {
      st = s.full_step(st);
      const double e = s.energy_norms(st).theorem_energy;
      const double rel = (e - prev) / prev;
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-14) ++increases;
      prev = e;
    }
    o.pass = o.pass && increases == 0;
    o.details.push_back("eps=" + fmt(eps, 0) + ": energy " + fmt(e0) + " -> " + fmt(prev) +
                        ", largest relative step change " + fmt(worst_rel, 2) + ", increases above 1e-14 relative: " +
                        std::to_string(increases));
  }
  return o;
}

struct ExampleRuns {
  std::vector<std::pair<std::string, SimulationResult>> runs;
  SimulationResult bp;
  SimulationResult mixed;
};

ExampleRuns example_runs() {
  ExampleRuns out;
  std::vector<std::pair<std::string, ExperimentConfig>> cases;
  for (const char *name : {"accuracy_diffusive_k2.cfg", "accuracy_kinetic_k2.cfg"}) {
    auto c = config(name);
    c.kind = ExperimentKind::custom;
    c.mesh_sizes = {16};
    cases.emplace_back(std::string(name), c);
  }
  cases.emplace_back("prescribed_field_kinetic.cfg", config("prescribed_field_kinetic.cfg"));
  cases.emplace_back("prescribed_field_diffusive.cfg", config("prescribed_field_diffusive.cfg"));
  cases.emplace_back("boltzmann_poisson.cfg", config("boltzmann_poisson.cfg"));
  cases.emplace_back("mixed_regime.cfg", config("mixed_regime.cfg"));
  std::vector<SimulationResult> res(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto c = cases[i].second;
    c.drift_diffusion_comparison = false;
    c.snapshots.clear();
    c.diagnostics_every = 1;
    c.limiter = true;
    res[i] = run_example(c).run;
  }
  for (std::size_t i = 0; i < cases.size(); ++i) out.runs.emplace_back(cases[i].first, res[i]);
  out.bp = res[4];
  out.mixed = res[5];
  return out;
}

Outcome criterion6(const ExampleRuns &ex) {
  Outcome o;
  o.pass = true;
  for (const auto &[name, r] : ex.runs) {
    const bool ok = r.min_f >= -1e-13 && r.max_limiter_average_error <= 1e-14;
    o.pass = o.pass && ok;
    o.details.push_back(name + ": " + std::to_string(r.steps) + " steps, min f " + fmt(r.min_f, 2) +
                        ", max average change " + fmt(r.max_limiter_average_error, 2) + ", negative averages " +
                        std::to_string(r.negative_averages) + (ok ? "" : "  <-- violates"));
  }
  return o;
}

Outcome criterion7(std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VelocityGrid grid(15);
  const auto kernel = CollisionKernel::constant(grid, 1.0, 2.0);
  const int nn = static_cast<int>(grid.size());
  const auto mx = grid.maxwellian();
  const Mesh1D mesh(0.0, 1.0, 12);
  SchemeParams p;
  p.epsilon = 0.3;
  p.dt = 1e-4;
  const ApScheme s(mesh, 2, grid, kernel, p);
  auto random_state = [&] {
    ParityState st{s.zero_field(), s.zero_field(), 0.0};
    for (int c = 0; c < mesh.n_cells; ++c) {
      for (int m = 0; m < 3; ++m) {
        const double amp = m == 0 ? 1.0 : 0.2;
        for (int l = 0; l < nn / 2; ++l) {
          const double a = amp * mx[l] * (m == 0 ? 1.5 + u(rng) : u(rng));
          const double b = amp * mx[l] * u(rng);
          st.r(c, m, l) = st.r(c, m, nn - 1 - l) = a;
          st.j(c, m, l) = b;
          st.j(c, m, nn - 1 - l) = -b;
        }
      }
    }
    return st;
  };

  double dens = 0.0, growth = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const auto st = random_state();
    const auto rs = s.relaxation_step_r(st);
    const auto a = s.density(st);
    const auto b = density(grid, rs);
    // pointwise: compare at Gauss points
    const auto qa = scalar_to_quadrature(s.basis(), mesh, a);
    const auto qb = scalar_to_quadrature(s.basis(), mesh, b);
    for (std::size_t i = 0; i < qa.size(); ++i) dens = std::max(dens, std::abs(qa[i] - qb[i]));
    growth = std::max(growth, phase_norm(rs, grid, kernel) - phase_norm(st.r, grid, kernel));
  }
  auto st = random_state();
  const double m0 = s.mass(st);
  for (int k = 0; k < 1000; ++k) st = s.full_step(st);
  const double drift = std::abs(s.mass(st) - m0) / std::abs(m0);

  double q = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> f(nn);
    for (int l = 0; l < nn; ++l) f[l] = mx[l] * (1.5 + u(rng)) + 0.1 * mx[l] * u(rng) * grid.nodes()[l];
    q = std::max(q, std::abs(moment_density(grid, collision_apply(kernel, grid, f))));
  }
  double skew = 0.0;
  const DGBasis basis(2);
  for (int t = 0; t < 100; ++t) {
    ScalarDGField a(mesh.n_cells, 3), b(mesh.n_cells, 3);
    for (auto &x : a.coef) x = u(rng);
    for (auto &x : b.coef) x = u(rng);
    skew = std::max(skew, std::abs(bilinear_L(basis, mesh, a, b, LVariant::plus) +
                                   bilinear_L(basis, mesh, b, a, LVariant::minus)));
  }
  const bool ok_d = dens <= 1e-12, ok_m = drift <= 1e-12, ok_q = q <= 1e-11, ok_s = skew <= 1e-11,
             ok_g = growth <= 0.0;
  o.pass = ok_d && ok_m && ok_q && ok_s && ok_g;
  o.details.push_back("relaxation density change " + fmt(dens, 2) + " (1e-12); mass drift over 1000 steps " +
                      fmt(drift, 2) + " (1e-12); |int Q dv| " + fmt(q, 2) + " (1e-11)");
  o.details.push_back("L+/L- skew " + fmt(skew, 2) + " (1e-11); max |||r*||| - |||r||| over 100 states " +
                      fmt(growth, 2) + " (<= 0)");
  return o;
}

Outcome criterion8(const ExampleRuns &ex) {
  Outcome o;
  const auto &eq = ex.bp.equilibrium;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < eq.size(); ++i) {
    if (eq[i].second > eq[peak].second) peak = i;
  }
  long rises = 0;
  double min_after = eq[peak].second, max_rise = 0.0;
  for (std::size_t i = peak + 1; i < eq.size(); ++i) {
    rises += !(eq[i].second < eq[i - 1].second);
    min_after = std::min(min_after, eq[i].second);
    max_rise = std::max(max_rise, (eq[i].second - min_after) / min_after);
  }
  const double transient = eq[peak].first;
  const bool bp_ok = rises == 0 && transient <= 0.25 * eq.back().first;
  o.details.push_back("Boltzmann-Poisson |||f - f_eq|||: " + fmt(eq.front().second, 2) + " at t=0, peak " +
                      fmt(eq[peak].second, 2) + " at t=" + fmt(transient, 2) + ", " + fmt(eq.back().second, 2) +
                      " at t=" + fmt(eq.back().first, 2) + "; non-decreasing samples after the peak: " +
                      std::to_string(rises) + ", largest relative rise above the running minimum " +
                      fmt(max_rise, 2));

  long inc = 0, theorem_inc = 0;
  double worst = -std::numeric_limits<double>::infinity();
  const auto &d = ex.mixed.diagnostics;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double rel = (d[i].example_energy - d[i - 1].example_energy) / d[i - 1].example_energy;
    worst = std::max(worst, rel);
    inc += rel > 1e-14;
    theorem_inc += d[i].theorem_energy > d[i - 1].theorem_energy * (1.0 + 1e-14);
  }
  const bool mix_ok = inc == 0;
  o.details.push_back("mixed regime energy: " + fmt(d.front().example_energy) + " -> " + fmt(d.back().example_energy) +
                      " over " + std::to_string(d.size()) + " steps, largest relative step change " + fmt(worst, 2) +
                      ", increases above 1e-14 relative: " + std::to_string(inc) +
                      " (theorem energy increases: " + std::to_string(theorem_inc) + ")");
  o.pass = bp_ok && mix_ok;
  return o;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> allow_red;
  std::vector<int> only;
  std::uint64_t seed = 7;
  app.add_option("--allow-red", allow_red, "Criteria whose FAIL does not change the exit status");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--seed", seed, "Seed for randomized states");
  CLI11_PARSE(app, argc, argv);

  auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  const std::vector<std::string> names{
      "",
      "diffusive accuracy table (k=2, eps=1e-5)",
      "self-convergence (k=2, eps=0.5) and k=3 orders",
      "one-step diffusive limit equals LDG",
      "AP sweep slope in epsilon",
      "energy monotonicity",
      "positivity with limiter",
      "conservation suite",
      "qualitative runs",
  };

  std::set<int> failed;
  int ran = 0;
  std::optional<ExampleRuns> ex;
  for (int c = 1; c <= 8; ++c) {
    if (!wanted(c)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      switch (c) {
        case 1: o = criterion1(); break;
        case 2: o = criterion2(); break;
        case 3: o = criterion3(); break;
        case 4: o = criterion4(); break;
        case 5: o = criterion5(); break;
        case 6:
          if (!ex) ex = example_runs();
          o = criterion6(*ex);
          break;
        case 7: o = criterion7(seed); break;
        case 8:
          if (!ex) ex = example_runs();
          o = criterion8(*ex);
          break;
      }
    } catch (const std::exception &e) {
      o.pass = false;
      o.details.push_back(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << ": " << names[c] << " [" << fixed(secs, 1)
              << " s]\n";
    for (const auto &d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    if (!o.pass) failed.insert(c);
  }

  bool unexpected = false;
  for (int c : failed) {
    if (std::find(allow_red.begin(), allow_red.end(), c) == allow_red.end()) unexpected = true;
  }
  std::cout << "summary: " << (ran - static_cast<int>(failed.size())) << " passed, " << failed.size() << " failed";
  if (!failed.empty() && !unexpected) std::cout << " (all failures are listed with --allow-red)";
  std::cout << "\n";
  return unexpected ? 1 : 0;
}
