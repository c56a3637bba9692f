#include "apdg/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace apdg {

Knudsen::Knudsen(double value) : value_(value) {
  if (!(value > 0.0)) throw std::invalid_argument("Knudsen number must be positive");
}

Knudsen::Knudsen(std::function<double(double)> profile)
    : value_(0.0), profile_(std::move(profile)) {}

double mixed_regime_epsilon(double x) {
  return 1e-3 + 0.5 * (std::tanh(1.0 - 11.0 * x) + std::tanh(1.0 + 11.0 * x));
}

BoundarySpec BoundarySpec::maxwellian_inflow(const VelocityGrid &grid) {
  BoundarySpec b;
  b.periodic = false;
  const auto v = grid.nodes();
  const auto m = grid.maxwellian();
  b.inflow.f_left.assign(m.begin(), m.end());
  b.inflow.f_right.assign(m.begin(), m.end());
  b.inflow.df_left.resize(grid.size());
  for (std::size_t l = 0; l < grid.size(); ++l) b.inflow.df_left[l] = -v[l] * m[l];
  b.inflow.df_right = b.inflow.df_left;
  return b;
}

double limiter_theta(double average, double minimum) {
  if (average < 0.0) return 0.0;
  if (!(average > minimum)) return 1.0;
  return std::min(average / (average - minimum), 1.0);
}

ApScheme::ApScheme(Mesh1D mesh, int degree, VelocityGrid grid, CollisionKernel kernel,
                   SchemeParams params)
    : mesh_(mesh), basis_(degree), grid_(std::move(grid)), kernel_(std::move(kernel)),
      params_(std::move(params)) {
  if (params_.mu < kernel_.max_lambda()) {
    throw std::invalid_argument("SchemeParams: mu must be >= max lambda");
  }
  if (params_.dt > 0.0) {
    dt_ = params_.dt;
  } else {
    dt_ = std::min(params_.cfl_parabolic * mesh_.h * mesh_.h,
                   params_.cfl_hyperbolic * mesh_.h / grid_.max_speed());
  }
  if (!params_.boundary.periodic) {
    const auto &in = params_.boundary.inflow;
    const auto n = grid_.size();
    if (in.f_left.size() != n || in.f_right.size() != n || in.df_left.size() != n ||
        in.df_right.size() != n) {
      throw std::invalid_argument("BoundarySpec: inflow tables must match the velocity grid");
    }
  }
  if (params_.field.kind == FieldKind::prescribed && !params_.field.prescribed) {
    throw std::invalid_argument("FieldSpec: prescribed field requires a function");
  }

  quad_x_ = quadrature_coordinates(basis_, mesh_);
  quad_eps_.resize(quad_x_.size());
  quad_phi_.resize(quad_x_.size());
  const auto gw = basis_.gauss_weights();
  double e2 = 0.0;
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    const double e = params_.epsilon.at(quad_x_[p]);
    if (!(e > 0.0)) throw std::invalid_argument("SchemeParams: epsilon must be positive");
    quad_eps_[p] = e;
    quad_phi_[p] = std::min(1.0, 1.0 / (e * e));
    e2 += 0.5 * mesh_.h * gw[p % basis_.n_quad()] * e * e;
  }
  eps_l2_ = std::sqrt(e2);

  if (!params_.epsilon.is_constant()) {
    const int nm = basis_.n_modes();
    const int nq = basis_.n_quad();
    const auto gv = basis_.gauss_values();
    eps_mass_.resize(static_cast<std::size_t>(mesh_.n_cells) * nm * nm);
    eps_mass_inv_.resize(eps_mass_.size());
    for (int c = 0; c < mesh_.n_cells; ++c) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nm, nm);
      for (int q = 0; q < nq; ++q) {
        const double e = quad_eps_[static_cast<std::size_t>(c) * nq + q];
        for (int a = 0; a < nm; ++a) {
          for (int b = 0; b < nm; ++b) m(a, b) += gw[q] * e * gv[q * nm + a] * gv[q * nm + b];
        }
      }
      const Eigen::MatrixXd inv = m.llt().solve(Eigen::MatrixXd::Identity(nm, nm));
      for (int a = 0; a < nm; ++a) {
        for (int b = 0; b < nm; ++b) {
          eps_mass_[(static_cast<std::size_t>(c) * nm + a) * nm + b] = m(a, b);
          eps_mass_inv_[(static_cast<std::size_t>(c) * nm + a) * nm + b] = inv(a, b);
        }
      }
    }
  }

  auto samples = basis_.lobatto_points();
  n_samples_ = static_cast<int>(samples.size());
  const int nm = basis_.n_modes();
  sample_values_.resize(static_cast<std::size_t>(n_samples_) * nm);
  for (int s = 0; s < n_samples_; ++s) {
    for (int m = 0; m < nm; ++m) sample_values_[s * nm + m] = basis_.value(m, samples[s]);
  }
}

ParityField ApScheme::zero_field() const {
  return ParityField(mesh_.n_cells, basis_.n_modes(), static_cast<int>(grid_.size()));
}

ParityField ApScheme::project_distribution(const std::function<double(double, double)> &f) const {
  const int nn = static_cast<int>(grid_.size());
  const auto v = grid_.nodes();
  std::vector<double> samples(quad_x_.size() * nn);
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    for (int l = 0; l < nn; ++l) samples[p * nn + l] = f(quad_x_[p], v[l]);
  }
  return from_quadrature(basis_, mesh_, samples, nn);
}

ParityState ApScheme::initial_state(const std::function<double(double, double)> &f) const {
  return even_odd_decompose(project_distribution(f));
}

ParityState ApScheme::even_odd_decompose(const ParityField &f, double t) const {
  const int nn = f.n_nodes;
  ParityState s{zero_field(), zero_field(), t};
  if (params_.epsilon.is_constant()) {
    const double inv = 1.0 / (2.0 * params_.epsilon.value());
    for (int c = 0; c < f.n_cells; ++c) {
      for (int m = 0; m < f.n_modes; ++m) {
        for (int l = 0; l < nn; ++l) {
          const double a = f(c, m, l);
          const double b = f(c, m, nn - 1 - l);
          s.r(c, m, l) = 0.5 * (a + b);
          s.j(c, m, l) = (a - b) * inv;
        }
      }
    }
    return s;
  }
  // j solves Pi(eps j) = odd part of f, so reconstruct_f returns f exactly.
  std::vector<double> odd(f.n_modes);
  for (int c = 0; c < f.n_cells; ++c) {
    for (int l = 0; l < nn; ++l) {
      for (int m = 0; m < f.n_modes; ++m) {
        const double a = f(c, m, l);
        const double b = f(c, m, nn - 1 - l);
        s.r(c, m, l) = 0.5 * (a + b);
        odd[m] = 0.5 * (a - b);
      }
      odd_to_j(c, odd.data(), 1, &s.j.data[s.j.index(c, 0, l)], nn);
    }
  }
  return s;
}

void ApScheme::odd_to_j(int cell, const double *odd, std::size_t odd_stride, double *j,
                        std::size_t j_stride) const {
  const int nm = basis_.n_modes();
  const double *inv = &eps_mass_inv_[static_cast<std::size_t>(cell) * nm * nm];
  for (int a = 0; a < nm; ++a) {
    double acc = 0.0;
    for (int b = 0; b < nm; ++b) acc += inv[a * nm + b] * odd[b * odd_stride];
    j[a * j_stride] = acc;
  }
}

double ApScheme::eps_times_j(int cell, int mode, const double *j, std::size_t stride) const {
  if (params_.epsilon.is_constant()) return params_.epsilon.value() * j[mode * stride];
  const int nm = basis_.n_modes();
  const double *row = &eps_mass_[(static_cast<std::size_t>(cell) * nm + mode) * nm];
  double acc = 0.0;
  for (int b = 0; b < nm; ++b) acc += row[b] * j[b * stride];
  return acc;
}

ParityField ApScheme::reconstruct_f(const ParityState &state) const {
  ParityField f = state.r;
  if (params_.epsilon.is_constant()) {
    const double e = params_.epsilon.value();
    for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] += e * state.j.data[i];
    return f;
  }
  const int nn = f.n_nodes;
  for (int c = 0; c < f.n_cells; ++c) {
    for (int m = 0; m < f.n_modes; ++m) {
      for (int l = 0; l < nn; ++l) {
        f(c, m, l) += eps_times_j(c, m, &state.j.data[state.j.index(c, 0, l)], nn);
      }
    }
  }
  return f;
}

ScalarDGField ApScheme::density(const ParityState &state) const {
  return apdg::density(grid_, state.r);
}

double ApScheme::mass(const ParityState &state) const {
  return integrate_x(mesh_, density(state));
}

FieldSamples ApScheme::compute_field(const ParityState &state) const {
  FieldSamples out;
  switch (params_.field.kind) {
    case FieldKind::zero:
      return out;
    case FieldKind::prescribed: {
      out.zero = false;
      out.at_quad.resize(quad_x_.size());
      for (std::size_t p = 0; p < quad_x_.size(); ++p) {
        out.at_quad[p] = params_.field.prescribed(quad_x_[p]);
      }
      out.left = params_.field.prescribed(mesh_.x_left);
      out.right = params_.field.prescribed(mesh_.x_right);
      return out;
    }
    case FieldKind::poisson: {
      out.zero = false;
      out.poisson = solve_poisson(density(state), params_.field.poisson, mesh_, basis_);
      out.at_quad = scalar_to_quadrature(basis_, mesh_, out.poisson->e);
      out.left = out.poisson->e_nodes.front();
      out.right = out.poisson->e_nodes.back();
      return out;
    }
  }
  return out;
}

std::vector<double> ApScheme::velocity_derivative_at_quad(std::span<const double> values) const {
  const int nn = static_cast<int>(grid_.size());
  const auto &k = grid_.nodal_deriv_matrix();
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    const double *src = &values[p * nn];
    double *dst = &out[p * nn];
    for (int m = 0; m < nn; ++m) {
      double s = 0.0;
      for (int i = 0; i < nn; ++i) s += k(m, i) * src[i];
      dst[m] = s;
    }
  }
  return out;
}

ParityField ApScheme::project_increment(std::span<const double> samples) const {
  return from_quadrature(basis_, mesh_, samples, static_cast<int>(grid_.size()));
}

ParityField ApScheme::relaxation_step_r(const ParityState &state) const {
  const int nn = static_cast<int>(grid_.size());
  const auto &gain = kernel_.gain_matrix();
  const auto lambda = kernel_.lambda();
  const auto mx = grid_.maxwellian();
  const auto dw = grid_.density_weights();
  const double mu = params_.mu;
  std::vector<double> pr(nn);

  auto relax_point = [&](const double *r, double *out, double eps) {
    const double tau = -std::expm1(-mu * dt_ / (eps * eps));
    double rho = 0.0;
    for (int l = 0; l < nn; ++l) rho += dw[l] * r[l];
    for (int i = 0; i < nn; ++i) {
      double g = 0.0;
      for (int l = 0; l < nn; ++l) g += gain(i, l) * r[l];
      pr[i] = g + (mu - lambda[i]) * r[i];
    }
    for (int i = 0; i < nn; ++i) {
      out[i] = (1.0 - tau) * r[i] + tau * (1.0 - tau) * pr[i] / mu + tau * tau * rho * mx[i];
    }
  };

  if (params_.epsilon.is_constant()) {
    // Linear in r with x-independent coefficients: act on the modal coefficients.
    ParityField out = zero_field();
    const double eps = params_.epsilon.value();
    for (int c = 0; c < mesh_.n_cells; ++c) {
      for (int m = 0; m < basis_.n_modes(); ++m) {
        relax_point(&state.r.data[state.r.index(c, m, 0)], &out.data[out.index(c, m, 0)], eps);
      }
    }
    return out;
  }
  const auto vals = to_quadrature(basis_, mesh_, state.r);
  std::vector<double> relaxed(vals.size());
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    relax_point(&vals[p * nn], &relaxed[p * nn], quad_eps_[p]);
  }
  return from_quadrature(basis_, mesh_, relaxed, nn);
}

std::vector<double> ApScheme::flux_parity(const ParityField &psi, LVariant variant) const {
  return interface_fluxes_parity(basis_, mesh_, psi, variant);
}

BoundaryFluxes ApScheme::inflow_boundary_fluxes(const ParityField &r,
                                                const FieldSamples &field) const {
  const int nn = static_cast<int>(grid_.size());
  const int last = mesh_.n_cells - 1;
  const auto v = grid_.nodes();
  const auto lambda = kernel_.lambda();
  const auto cv = basis_.center_values();
  const auto &in = params_.boundary.inflow;
  const double h = mesh_.h;
  const double scale = std::sqrt(2.0 / h);
  const double eps_l = params_.epsilon.at(mesh_.x_left);
  const double eps_r = params_.epsilon.at(mesh_.x_right);
  const double e_l = field.zero ? 0.0 : field.left;
  const double e_r = field.zero ? 0.0 : field.right;

  // Cell averages of the boundary cells; the centre value leaves the
  // quadratic mode of those cells undamped in the kinetic regime.
  std::vector<double> r1(nn), rn(nn);
  for (int l = 0; l < nn; ++l) {
    r1[l] = scale * cv[0] * r(0, 0, l);
    rn[l] = scale * cv[0] * r(last, 0, l);
  }

  BoundaryFluxes out;
  out.r_left.resize(nn);
  out.r_right.resize(nn);
  out.j_left.resize(nn);
  out.j_right.resize(nn);
  const bool literal = params_.boundary.parity == InflowParity::literal;
  for (int l = 0; l < nn; ++l) {
    const bool mirrored = !literal && v[l] < 0.0;
    const int s = mirrored ? nn - 1 - l : l;
    const double vs = v[s];
    const double lam = lambda[s];
    const double den_l = lam * h + 2.0 * eps_l * vs;
    const double den_r = lam * h + 2.0 * eps_r * vs;
    if (!(den_l > 0.0) || !(den_r > 0.0)) {
      throw std::domain_error("inflow_boundary_fluxes: non-positive denominator at node " +
                              std::to_string(l));
    }
    const double rl =
        (h * (lam * in.f_left[s] - eps_l * e_l * in.df_left[s]) + 2.0 * eps_l * vs * r1[s]) / den_l;
    const double rr =
        (h * (lam * in.f_right[s] + eps_r * e_r * in.df_right[s]) + 2.0 * eps_r * vs * rn[s]) /
        den_r;
    const double jl = (-vs * (r1[s] - rl) / (0.5 * h) + e_l * in.df_left[s]) / lam;
    const double jr = (-vs * (rr - rn[s]) / (0.5 * h) + e_r * in.df_right[s]) / lam;
    const double sign = mirrored ? -1.0 : 1.0;
    out.r_left[l] = rl;
    out.r_right[l] = rr;
    out.j_left[l] = sign * jl;
    out.j_right[l] = sign * jr;
  }
  return out;
}

namespace {

// Only the end whose one-sided trace lies outside the domain is replaced:
// x_{1/2} for minus traces, x_{N+1/2} for plus traces.
void override_boundary(std::vector<double> &fluxes, LVariant variant, const BoundaryFluxes &b,
                       bool r_values, int n_cells) {
  if (variant == LVariant::minus) {
    const auto &left = r_values ? b.r_left : b.j_left;
    std::copy(left.begin(), left.end(), fluxes.begin());
  } else {
    const auto &right = r_values ? b.r_right : b.j_right;
    std::copy(right.begin(), right.end(),
              fluxes.begin() + static_cast<std::ptrdiff_t>(n_cells * right.size()));
  }
}

}  // namespace

ParityField ApScheme::relaxation_step_j(const ParityState &state, const ParityField &r_star,
                                        const FieldSamples &field) const {
  const int nn = static_cast<int>(grid_.size());
  const auto v = grid_.nodes();
  const auto lambda = kernel_.lambda();
  const double dt = dt_;

  auto fluxes = flux_parity(r_star, LVariant::plus);
  if (!params_.boundary.periodic) {
    const auto b = inflow_boundary_fluxes(r_star, field);
    override_boundary(fluxes, LVariant::plus, b, true, mesh_.n_cells);
  }
  const ParityField lr = apply_L_parity(basis_, mesh_, r_star, fluxes);

  if (params_.epsilon.is_constant() && field.zero) {
    const double e2 = params_.epsilon.value() * params_.epsilon.value();
    const double phi = std::min(1.0, 1.0 / e2);
    std::vector<double> alpha(nn), beta_v(nn);
    for (int l = 0; l < nn; ++l) {
      alpha[l] = e2 / (e2 + lambda[l] * dt);
      beta_v[l] = dt * (1.0 - e2 * phi) / (e2 + lambda[l] * dt) * v[l];
    }
    ParityField out = zero_field();
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      const std::size_t l = i % nn;
      out.data[i] = alpha[l] * state.j.data[i] - beta_v[l] * lr.data[i];
    }
    return out;
  }

  const auto jq = to_quadrature(basis_, mesh_, state.j);
  const auto lq = to_quadrature(basis_, mesh_, lr);
  std::vector<double> dq;
  if (!field.zero) dq = velocity_derivative_at_quad(to_quadrature(basis_, mesh_, r_star));
  std::vector<double> out(jq.size());
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    const double e2 = quad_eps_[p] * quad_eps_[p];
    const double phi = quad_phi_[p];
    const double ep = field.zero ? 0.0 : field.at_quad[p];
    for (int l = 0; l < nn; ++l) {
      const std::size_t i = p * nn + l;
      const double alpha = e2 / (e2 + lambda[l] * dt);
      const double beta = dt * (1.0 - e2 * phi) / (e2 + lambda[l] * dt);
      double rhs = -v[l] * lq[i];
      if (!field.zero) rhs += ep * dq[i];
      out[i] = alpha * jq[i] + beta * rhs;
    }
  }
  return from_quadrature(basis_, mesh_, out, nn);
}

ParityState ApScheme::transport_forward_euler(const ParityState &star,
                                              const FieldSamples &field) const {
  const int nn = static_cast<int>(grid_.size());
  const auto v = grid_.nodes();
  const double dt = dt_;

  const LVariant r_variant =
      params_.j_transport_flux == JTransportFlux::r_plus ? LVariant::plus : LVariant::minus;
  auto jflux = flux_parity(star.j, LVariant::minus);
  auto rflux = flux_parity(star.r, r_variant);
  if (!params_.boundary.periodic) {
    const auto b = inflow_boundary_fluxes(star.r, field);
    override_boundary(jflux, LVariant::minus, b, false, mesh_.n_cells);
    override_boundary(rflux, r_variant, b, true, mesh_.n_cells);
  }
  const ParityField lj = apply_L_parity(basis_, mesh_, star.j, jflux);
  const ParityField lr = apply_L_parity(basis_, mesh_, star.r, rflux);

  ParityState out{star.r, star.j, star.t};
  if (params_.epsilon.is_constant() && field.zero) {
    const double e = params_.epsilon.value();
    const double phi = std::min(1.0, 1.0 / (e * e));
    for (std::size_t i = 0; i < out.r.data.size(); ++i) {
      const double dv = dt * v[i % nn];
      out.r.data[i] -= dv * lj.data[i];
      out.j.data[i] -= phi * dv * lr.data[i];
    }
    return out;
  }

  const auto ljq = to_quadrature(basis_, mesh_, lj);
  const auto lrq = to_quadrature(basis_, mesh_, lr);
  std::vector<double> djq, drq;
  if (!field.zero) {
    djq = velocity_derivative_at_quad(to_quadrature(basis_, mesh_, star.j));
    drq = velocity_derivative_at_quad(to_quadrature(basis_, mesh_, star.r));
  }
  std::vector<double> inc_r(ljq.size()), inc_j(ljq.size());
  for (std::size_t p = 0; p < quad_x_.size(); ++p) {
    const double phi = quad_phi_[p];
    const double ep = field.zero ? 0.0 : field.at_quad[p];
    for (int l = 0; l < nn; ++l) {
      const std::size_t i = p * nn + l;
      double a = -v[l] * ljq[i];
      double b = -v[l] * lrq[i];
      if (!field.zero) {
        a += ep * djq[i];
        b += ep * drq[i];
      }
      inc_r[i] = dt * a;
      inc_j[i] = dt * phi * b;
    }
  }
  const auto dr = project_increment(inc_r);
  const auto dj = project_increment(inc_j);
  for (std::size_t i = 0; i < out.r.data.size(); ++i) {
    out.r.data[i] += dr.data[i];
    out.j.data[i] += dj.data[i];
  }
  return out;
}

namespace {

void axpby(ParityField &dst, double a, const ParityField &x, double b) {
  for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] = a * x.data[i] + b * dst.data[i];
}

}  // namespace

ParityState ApScheme::ssprk3_transport(const ParityState &star, const FieldSamples &field) const {
  auto stage = [&](const ParityState &u) {
    ParityState next = transport_forward_euler(u, field);
    if (params_.limit_stages && params_.limiter_on) next = positivity_limit(next);
    return next;
  };
  ParityState u1 = stage(star);
  ParityState u2 = stage(u1);
  axpby(u2.r, 0.75, star.r, 0.25);
  axpby(u2.j, 0.75, star.j, 0.25);
  ParityState u3 = stage(u2);
  axpby(u3.r, 1.0 / 3.0, star.r, 2.0 / 3.0);
  axpby(u3.j, 1.0 / 3.0, star.j, 2.0 / 3.0);
  u3.t = star.t;
  return u3;
}

ParityState ApScheme::positivity_limit(const ParityState &state, LimiterReport *report) const {
  const int nn = static_cast<int>(grid_.size());
  const int nm = basis_.n_modes();
  const double scale = std::sqrt(2.0 / mesh_.h);
  const double inv_sqrt_h = 1.0 / std::sqrt(mesh_.h);
  const bool constant = params_.epsilon.is_constant();
  const double eps = constant ? params_.epsilon.value() : 0.0;

  ParityState out = state;
  const ParityField f = reconstruct_f(state);
  LimiterReport rep;
  rep.min_f = std::numeric_limits<double>::infinity();

  std::vector<double> coeffs(nm);
  std::vector<double> fnew(static_cast<std::size_t>(nm) * nn);
  std::vector<double> odd(nm);

  auto poly_min = [&](const double *c) {
    double mn = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_samples_; ++s) {
      double val = 0.0;
      for (int m = 0; m < nm; ++m) val += c[m] * sample_values_[s * nm + m];
      mn = std::min(mn, val * scale);
    }
    if (nm == 3) {
      // Interior vertex of the quadratic in the reference coordinate.
      const double c0 = scale * std::sqrt(0.5) * c[0];
      const double c1 = scale * std::sqrt(1.5) * c[1];
      const double c2 = scale * std::sqrt(2.5) * c[2];
      const double a0 = c0 - 0.5 * c2;
      const double a2 = 1.5 * c2;
      if (a2 > 0.0) {
        const double xi = -c1 / (2.0 * a2);
        if (std::abs(xi) < 1.0) mn = std::min(mn, a0 + c1 * xi + a2 * xi * xi);
      }
    }
    return mn;
  };

  for (int c = 0; c < mesh_.n_cells; ++c) {
    bool changed = false;
    for (int l = 0; l < nn; ++l) {
      for (int m = 0; m < nm; ++m) coeffs[m] = f(c, m, l);
      const double avg = coeffs[0] * inv_sqrt_h;
      const double mn = poly_min(coeffs.data());
      const double theta = limiter_theta(avg, mn);
      if (avg < 0.0) ++rep.negative_averages;
      if (theta < 1.0) {
        changed = true;
        ++rep.activations;
      }
      fnew[l] = coeffs[0];
      for (int m = 1; m < nm; ++m) fnew[static_cast<std::size_t>(m) * nn + l] = theta * coeffs[m];
      for (int m = 0; m < nm; ++m) coeffs[m] = fnew[static_cast<std::size_t>(m) * nn + l];
      rep.min_f = std::min(rep.min_f, poly_min(coeffs.data()));
    }
    if (!changed) continue;

    for (int m = 0; m < nm; ++m) {
      const double *fm = &fnew[static_cast<std::size_t>(m) * nn];
      for (int l = 0; l < nn; ++l) {
        out.r(c, m, l) = 0.5 * (fm[l] + fm[nn - 1 - l]);
        if (constant) out.j(c, m, l) = (fm[l] - fm[nn - 1 - l]) / (2.0 * eps);
      }
    }
    if (!constant) {
      for (int l = 0; l < nn; ++l) {
        for (int m = 0; m < nm; ++m) {
          const double *fm = &fnew[static_cast<std::size_t>(m) * nn];
          odd[m] = 0.5 * (fm[l] - fm[nn - 1 - l]);
        }
        odd_to_j(c, odd.data(), 1, &out.j.data[out.j.index(c, 0, l)], nn);
      }
    }
    for (int l = 0; l < nn; ++l) {
      const double before = f(c, 0, l);
      const double after = out.r(c, 0, l) + eps_times_j(c, 0, &out.j.data[out.j.index(c, 0, l)], nn);
      rep.max_average_error = std::max(rep.max_average_error, std::abs(after - before) * inv_sqrt_h);
    }
  }
  if (report != nullptr) *report = rep;
  return out;
}

ParityState ApScheme::full_step(const ParityState &state, StepDiagnostics *diag) const {
  LimiterReport rep;
  ParityState cur = params_.limiter_on ? positivity_limit(state, &rep) : state;
  if (!params_.limiter_on) rep.min_f = min_sampled_f(state);

  const FieldSamples field = compute_field(cur);
  ParityState star;
  star.r = relaxation_step_r(cur);
  star.j = relaxation_step_j(cur, star.r, field);
  star.t = cur.t;

  ParityState next = params_.transport == TransportIntegrator::ssprk3
                         ? ssprk3_transport(star, field)
                         : transport_forward_euler(star, field);
  next.t = state.t + dt_;

  for (std::size_t i = 0; i < next.r.data.size(); ++i) {
    if (!std::isfinite(next.r.data[i]) || !std::isfinite(next.j.data[i])) {
      throw std::runtime_error("full_step: non-finite value in state at t = " +
                               std::to_string(next.t));
    }
  }

  if (diag != nullptr) {
    const auto en = energy_norms(next);
    diag->step += 1;
    diag->t = next.t;
    diag->mass = mass(next);
    diag->theorem_energy = en.theorem_energy;
    diag->example_energy = en.example_energy;
    diag->limiter_activations = rep.activations;
    diag->negative_averages = rep.negative_averages;
    diag->min_f_sampled = rep.min_f;
    diag->limiter_average_error = rep.max_average_error;
  }
  return next;
}

EnergyNorms ApScheme::energy_norms(const ParityState &state) const {
  const double r2 = std::pow(phase_norm(state.r, grid_, kernel_), 2);
  const double jn = phase_norm(state.j, grid_, kernel_);
  EnergyNorms out;
  if (params_.epsilon.is_constant()) {
    const double e = params_.epsilon.value();
    out.theorem_energy = r2 + e * e * jn * jn;
  } else {
    std::vector<double> w(quad_eps_.size());
    for (std::size_t p = 0; p < w.size(); ++p) w[p] = quad_eps_[p] * quad_eps_[p];
    out.theorem_energy =
        r2 + std::pow(phase_norm_weighted(basis_, mesh_, state.j, grid_, kernel_, w), 2);
  }
  out.example_energy = r2 + eps_l2_ * jn;
  return out;
}

double ApScheme::equilibrium_distance(const ParityState &state) const {
  ParityField diff = reconstruct_f(state);
  const ScalarDGField rho = density(state);
  const auto mx = grid_.maxwellian();
  const int nn = diff.n_nodes;
  for (int c = 0; c < diff.n_cells; ++c) {
    for (int m = 0; m < diff.n_modes; ++m) {
      for (int l = 0; l < nn; ++l) diff(c, m, l) -= rho(c, m) * mx[l];
    }
  }
  return phase_norm(diff, grid_, kernel_);
}

double ApScheme::min_sampled_f(const ParityState &state) const {
  const ParityField f = reconstruct_f(state);
  const int nm = f.n_modes;
  const double scale = std::sqrt(2.0 / mesh_.h);
  double mn = std::numeric_limits<double>::infinity();
  for (int c = 0; c < f.n_cells; ++c) {
    for (int l = 0; l < f.n_nodes; ++l) {
      for (int s = 0; s < n_samples_; ++s) {
        double val = 0.0;
        for (int m = 0; m < nm; ++m) val += f(c, m, l) * sample_values_[s * nm + m];
        mn = std::min(mn, val * scale);
      }
    }
  }
  return mn;
}

}  // namespace apdg
