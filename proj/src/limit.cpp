#include "apdg/limit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "apdg/field.hpp"

namespace apdg {

ScalarDGField ldg_limit_step(const Mesh1D &mesh, const DGBasis &basis, const ScalarDGField &rho,
                             double diffusion, double dt) {
  const ScalarDGField g = apply_L(basis, mesh, rho, LVariant::plus);
  const ScalarDGField lg = apply_L(basis, mesh, g, LVariant::minus);
  ScalarDGField out = rho;
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] += dt * diffusion * lg.coef[i];
  return out;
}

double exact_solution_example1(double x, double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  return std::exp(-two_pi * two_pi * t) * std::cos(two_pi * x) + 1.0;
}

namespace {

double spacing(const DriftDiffusionSetup &s) { return (s.x_right - s.x_left) / s.n; }

void validate(const DriftDiffusionSetup &s) {
  if (s.n < 3 || !(s.x_right > s.x_left) || !(s.diffusion > 0.0)) {
    throw std::invalid_argument("DriftDiffusionSetup: need n >= 3, a valid interval and D > 0");
  }
}

}  // namespace

std::vector<double> drift_diffusion_faces(const DriftDiffusionSetup &setup) {
  const double h = spacing(setup);
  std::vector<double> out(setup.n);
  for (int p = 0; p < setup.n; ++p) {
    out[p] = setup.periodic ? setup.x_left + (p + 1) * h : setup.x_left + (p + 0.5) * h;
  }
  return out;
}

DriftDiffusionState drift_diffusion_initial(const DriftDiffusionSetup &setup,
                                            const std::function<double(double)> &rho0) {
  validate(setup);
  const double h = spacing(setup);
  DriftDiffusionState st;
  const int np = setup.periodic ? setup.n : setup.n + 1;
  st.x.resize(np);
  st.rho.resize(np);
  for (int p = 0; p < np; ++p) {
    st.x[p] = setup.periodic ? setup.x_left + (p + 0.5) * h : setup.x_left + p * h;
    st.rho[p] = rho0(st.x[p]);
  }
  if (!setup.periodic) {
    st.rho.front() = setup.rho_left;
    st.rho.back() = setup.rho_right;
  }
  return st;
}

DriftDiffusionState drift_diffusion_step(const DriftDiffusionSetup &setup,
                                         const DriftDiffusionState &state, double dt) {
  const double h = spacing(setup);
  const double d = setup.diffusion;
  const int np = static_cast<int>(state.rho.size());
  std::vector<double> e(setup.n, 0.0);
  if (setup.face_field) {
    e = setup.face_field(state);
    if (static_cast<int>(e.size()) != setup.n) {
      throw std::invalid_argument("drift_diffusion_step: face field has the wrong length");
    }
  }

  // Row p of the operator A: lower, diagonal, upper coefficients.
  auto coefficients = [&](double e_minus, double e_plus, double &lo, double &di, double &up) {
    lo = d / h * (1.0 / h - 0.5 * e_minus);
    di = d / h * (-2.0 / h + 0.5 * e_plus - 0.5 * e_minus);
    up = d / h * (1.0 / h + 0.5 * e_plus);
  };

  DriftDiffusionState out = state;
  out.t = state.t + dt;
  if (setup.periodic) {
    const int n = np;
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (int p = 0; p < n; ++p) {
      const double em = e[(p - 1 + n) % n];
      const double ep = e[p];
      double lo = 0.0, di = 0.0, up = 0.0;
      coefficients(em, ep, lo, di, up);
      const double ap = lo * state.rho[(p - 1 + n) % n] + di * state.rho[p] +
                        up * state.rho[(p + 1) % n];
      rhs[p] = state.rho[p] + 0.5 * dt * ap;
      sub[p] = -0.5 * dt * lo;
      diag[p] = 1.0 - 0.5 * dt * di;
      sup[p] = -0.5 * dt * up;
    }
    out.rho = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
  } else {
    const int ni = np - 2;
    std::vector<double> sub(ni), diag(ni), sup(ni), rhs(ni);
    for (int p = 1; p <= ni; ++p) {
      double lo = 0.0, di = 0.0, up = 0.0;
      coefficients(e[p - 1], e[p], lo, di, up);
      const double ap = lo * state.rho[p - 1] + di * state.rho[p] + up * state.rho[p + 1];
      double r = state.rho[p] + 0.5 * dt * ap;
      if (p == 1) r += 0.5 * dt * lo * setup.rho_left;
      if (p == ni) r += 0.5 * dt * up * setup.rho_right;
      rhs[p - 1] = r;
      sub[p - 1] = -0.5 * dt * lo;
      diag[p - 1] = 1.0 - 0.5 * dt * di;
      sup[p - 1] = -0.5 * dt * up;
    }
    const auto inner = solve_tridiagonal(sub, diag, sup, rhs);
    for (int p = 1; p <= ni; ++p) out.rho[p] = inner[p - 1];
    out.rho.front() = setup.rho_left;
    out.rho.back() = setup.rho_right;
  }
  for (double v : out.rho) {
    if (!std::isfinite(v)) throw std::runtime_error("drift_diffusion_step: non-finite density");
  }
  return out;
}

DriftDiffusionState drift_diffusion_solve(const DriftDiffusionSetup &setup,
                                          const std::function<double(double)> &rho0, double t_end,
                                          double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("drift_diffusion_solve: dt must be positive");
  DriftDiffusionState st = drift_diffusion_initial(setup, rho0);
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    const double step = std::min(dt, t_end - st.t);
    if (step <= 0.0) break;
    st = drift_diffusion_step(setup, st, step);
  }
  st.t = t_end;
  return st;
}

double drift_diffusion_mass(const DriftDiffusionSetup &setup, const DriftDiffusionState &state) {
  const double h = spacing(setup);
  double s = 0.0;
  for (double v : state.rho) s += v;
  if (!setup.periodic) s -= 0.5 * (state.rho.front() + state.rho.back());
  return s * h;
}

double drift_diffusion_interpolate(const DriftDiffusionSetup &setup,
                                   const DriftDiffusionState &state, double x) {
  const double h = spacing(setup);
  const int np = static_cast<int>(state.rho.size());
  if (setup.periodic) {
    double s = (x - setup.x_left) / h - 0.5;
    s = std::fmod(s + np, static_cast<double>(np));
    const int p = static_cast<int>(std::floor(s));
    const double t = s - p;
    return (1.0 - t) * state.rho[p % np] + t * state.rho[(p + 1) % np];
  }
  const double s = (x - setup.x_left) / h;
  const int p = std::clamp(static_cast<int>(std::floor(s)), 0, np - 2);
  const double t = s - p;
  return (1.0 - t) * state.rho[p] + t * state.rho[p + 1];
}

}  // namespace apdg
