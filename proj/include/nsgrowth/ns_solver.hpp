#pragma once

/// \file
/// Time integration of the growth Navier-Stokes system with optional
/// artificial density diffusion on a staggered 1D grid.
///
/// One step is the Strang composition
///   growth(dt/2) . transport(dt) . growth(dt/2).
/// The growth substep is the exact logistic flow of d rho/dt = G0 rho (P_M - rho^gamma),
/// so the stiffness gamma*G0*P_M of the source never enters the step size. The
/// transport substep is explicit first-order upwind for mass and momentum
/// advection, explicit in the pressure gradient and the eps terms, and
/// backward Euler in the viscous term. Walls carry u = 0 and zero-Neumann rho.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "nsgrowth/core_model.hpp"
#include "nsgrowth/diagnostics.hpp"
#include "nsgrowth/errors.hpp"
#include "nsgrowth/trajectory.hpp"

namespace nsgrowth {

struct SolverConfig {
  double cfl = 0.3;
  double dt_max = 1e-3;
  double dt_min = 1e-12;
  double rho_floor = 1e-12;
  double t_end = 0.5;
  double output_every = 0.01;
  bool strict = false;
  double saturation_delta = 0.05;  ///< threshold for the consistency column

  bool operator==(const SolverConfig&) const = default;
};

inline void validate(const SolverConfig& c) {
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw DomainError("cfl must lie in (0,1]");
  if (!(c.dt_min > 0.0 && c.dt_min < c.dt_max)) throw DomainError("0 < dt_min < dt_max required");
  if (!(c.rho_floor > 0.0)) throw DomainError("rho_floor > 0 required");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw DomainError("t_end >= 0 required");
  if (!(c.output_every > 0.0)) throw DomainError("output_every > 0 required");
  if (!(c.saturation_delta > 0.0 && c.saturation_delta < 1.0)) {
    throw DomainError("saturation_delta must lie in (0,1)");
  }
}

/// Advective CFL limit on |u| + c and, when eps > 0, the explicit diffusion
/// limit dx^2 / (2 eps); capped by dt_max. The viscous term is implicit and
/// does not restrict the step.
inline double compute_dt(const FluidState& s, const ModelParams& params,
                         const SolverConfig& config) {
  const double dx = s.grid.dx();
  double max_speed = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double u = std::max(std::abs(s.u[i]), std::abs(s.u[i + 1]));
    max_speed = std::max(max_speed, u + sound_speed(s.rho[i], params.gamma));
  }
  double dt = config.dt_max;
  if (max_speed > 0.0) dt = std::min(dt, config.cfl * dx / max_speed);
  if (params.eps > 0.0) dt = std::min(dt, config.cfl * dx * dx / (2.0 * params.eps));
  if (!(dt >= config.dt_min)) {
    std::ostringstream msg;
    msg << "time step " << dt << " below dt_min " << config.dt_min << " at t=" << s.t;
    throw StallError(msg.str());
  }
  return dt;
}

namespace detail {

/// log(exp(a) + exp(b)) with -inf handled.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace detail

/// Exact logistic flow of one cell over dt. In y = rho^gamma the source reads
/// dy/dt = k y (P_M - y) / P_M with k = gamma G0 P_M, solved by
///   y = P_M y0 / (y0 + (P_M - y0) exp(-k dt)).
/// Evaluated in logs; fixes 0 and P_M^(1/gamma).
inline double logistic_density(double rho0, const ModelParams& params, double dt) {
  if (rho0 == 0.0 || dt == 0.0) return rho0;
  const double k_dt = params.gamma * params.g0 * params.pm * dt;
  const double log_pm = std::log(params.pm);
  const double log_y0 = params.gamma * std::log(rho0);
  // denominator y0 (1 - e^{-k dt}) + P_M e^{-k dt}
  const double log_one_minus_e = std::log(-std::expm1(-k_dt));
  const double log_den = detail::log_add_exp(log_y0 + log_one_minus_e, log_pm - k_dt);
  return rho0 * std::exp((log_pm - log_den) / params.gamma);
}

inline FluidState growth_substep(FluidState s, const ModelParams& params, double dt) {
  for (double& r : s.rho) r = logistic_density(r, params, dt);
  return s;
}

struct TransportStats {
  std::size_t floor_activations = 0;
  std::size_t overflow_flags = 0;
  double mass_defect = 0.0;  ///< |mass_after - mass_before| / mass_before (0 for vacuum)
};

/// One explicit transport-diffusion update over dt; time advances by dt.
inline FluidState transport_substep(const FluidState& s, const ModelParams& params, double dt,
                                    const SolverConfig& config, TransportStats* stats = nullptr) {
  const std::size_t n = s.rho.size();
  const double dx = s.grid.dx();
  const double nu = params.viscosity();
  const double eps = params.eps;
  TransportStats local;

  // Face density gradient (walls: zero Neumann).
  std::vector<double> grad_rho(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) grad_rho[f] = (s.rho[f] - s.rho[f - 1]) / dx;

  // Mass flux: upwind advection minus eps diffusion, zero at the walls.
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) {
    const double uf = s.u[f];
    const double upwind = uf >= 0.0 ? s.rho[f - 1] : s.rho[f];
    flux[f] = upwind * uf - eps * grad_rho[f];
  }

  FluidState out(s.grid, s.t + dt);
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] = s.rho[i] - dt / dx * (flux[i + 1] - flux[i]);
  }

  const std::vector<double> p = pressure_field(s.rho, params.gamma, &local.overflow_flags);

  // eps correction in nonconservative form: -eps d/dx (u d rho/dx) at faces.
  std::vector<double> q(n + 1, 0.0);
  if (eps > 0.0) {
    for (std::size_t f = 1; f < n; ++f) q[f] = s.u[f] * grad_rho[f];
  }

  // Explicit part of the face momentum update, then backward Euler viscosity:
  //   rho_f (u_f - u*_f)/dt = nu (u_{f-1} - 2 u_f + u_{f+1}) / dx^2.
  const std::size_t m = n - 1;  // interior faces 1..n-1
  std::vector<double> diag(m), rhs(m), rho_face(m);
  const double visc = nu * dt / (dx * dx);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t f = k + 1;
    const double rf = std::max(0.5 * (s.rho[f - 1] + s.rho[f]), config.rho_floor);
    const double uf = s.u[f];
    const double adv = uf >= 0.0 ? uf * (uf - s.u[f - 1]) / dx : uf * (s.u[f + 1] - uf) / dx;
    const double dp = (p[f] - p[f - 1]) / dx;
    const double corr = eps > 0.0 ? eps * (q[f + 1] - q[f - 1]) / (2.0 * dx) : 0.0;
    const double u_star = uf - dt * (adv + (dp + corr) / rf);
    rho_face[k] = rf;
    diag[k] = rf + 2.0 * visc;
    rhs[k] = rf * u_star;
  }
  // Thomas algorithm; off-diagonals are all -visc, so the system is
  // strictly diagonally dominant.
  std::vector<double> c_prime(m, 0.0);
  std::vector<double> d_prime(m, 0.0);
  c_prime[0] = -visc / diag[0];
  d_prime[0] = rhs[0] / diag[0];
  for (std::size_t k = 1; k < m; ++k) {
    const double denom = diag[k] + visc * c_prime[k - 1];
    c_prime[k] = -visc / denom;
    d_prime[k] = (rhs[k] + visc * d_prime[k - 1]) / denom;
  }
  out.u[m] = d_prime[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    out.u[k + 1] = d_prime[k] - c_prime[k] * out.u[k + 2];
  }
  out.u.front() = 0.0;
  out.u.back() = 0.0;

  double mass_before = 0.0;
  double mass_after = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass_before += s.rho[i];
    mass_after += out.rho[i];
  }
  if (mass_before > 0.0) local.mass_defect = std::abs(mass_after - mass_before) / mass_before;

  for (std::size_t i = 0; i < n; ++i) {
    if (out.rho[i] < 0.0) {
      if (config.strict) {
        std::ostringstream msg;
        msg << "negative density " << out.rho[i] << " in cell " << i << " at t=" << out.t;
        throw NegativeDensityError(msg.str());
      }
      out.rho[i] = config.rho_floor;
      ++local.floor_activations;
    }
  }

  if (stats != nullptr) *stats = local;
  return out;
}

struct StepResult {
  FluidState state;
  double dt = 0.0;
  TransportStats stats;
};

/// One Strang step with dt = min(compute_dt, dt_cap).
inline StepResult step(const FluidState& s, const ModelParams& params, const SolverConfig& config,
                       double dt_cap = std::numeric_limits<double>::infinity()) {
  const double dt = std::min(compute_dt(s, params, config), dt_cap);
  StepResult r;
  FluidState half = growth_substep(s, params, 0.5 * dt);
  half = transport_substep(half, params, dt, config, &r.stats);
  r.state = growth_substep(std::move(half), params, 0.5 * dt);
  r.state.t = s.t + dt;
  r.dt = dt;
  if (!all_finite(r.state)) {
    std::ostringstream msg;
    msg << "non-finite field after step at t=" << r.state.t;
    throw NonFiniteError(msg.str());
  }
  return r;
}

/// Called after every accepted step with the new state and the step size.
using StepObserver = std::function<void(const FluidState&, double)>;

/// Advance to t_end, recording a snapshot and a diagnostics row at every
/// multiple of output_every and at t_end. Failures stop the run and are
/// reported in the trajectory, which keeps what was computed before.
inline Trajectory run(const FluidState& initial, const ModelParams& params,
                      const SolverConfig& config, const StepObserver& on_step = {}) {
  validate(params);
  validate(config);
  validate(initial);

  Trajectory traj;
  traj.params = params;
  const RecordOptions options{config.saturation_delta};
  traj.snapshots.push_back(initial);
  traj.records.push_back(make_record(initial, params, nullptr, options));

  const double t0 = initial.t;
  const double t_end = t0 + config.t_end;
  const double snap_tol = 1e-12 * std::max(1.0, std::abs(t_end));
  std::size_t next_index = 1;
  FluidState state = initial;

  while (t_end - state.t > snap_tol) {
    const double next_output =
        std::min(t0 + static_cast<double>(next_index) * config.output_every, t_end);
    try {
      StepResult r = step(state, params, config, next_output - state.t);
      auto& st = traj.step_stats;
      st.dt_history.push_back(r.dt);
      st.floor_activations += r.stats.floor_activations;
      st.overflow_flags += r.stats.overflow_flags;
      st.max_transport_mass_defect = std::max(st.max_transport_mass_defect, r.stats.mass_defect);
      state = std::move(r.state);
    } catch (const StallError& e) {
      traj.failure = RunFailure{FailureKind::stall, state.t, e.what()};
      break;
    } catch (const NonFiniteError& e) {
      traj.failure = RunFailure{FailureKind::non_finite, state.t, e.what()};
      break;
    } catch (const NegativeDensityError& e) {
      traj.failure = RunFailure{FailureKind::negative_density, state.t, e.what()};
      break;
    }
    if (on_step) on_step(state, traj.step_stats.dt_history.back());

    if (std::abs(state.t - next_output) <= snap_tol) {
      state.t = next_output;
      traj.records.push_back(make_record(state, params, &traj.records.back(), options));
      traj.snapshots.push_back(state);
      ++next_index;
    }
  }
  return traj;
}

}  // namespace nsgrowth
