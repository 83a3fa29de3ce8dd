#pragma once

/// \file
/// A priori bounds evaluated along a trajectory, and the run-level time
/// integrals (pressure L2 norm, complementarity, eps terms) read off the
/// cumulative diagnostics columns.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nsgrowth/core_model.hpp"
#include "nsgrowth/trajectory.hpp"

namespace nsgrowth {

/// Outcome of checking observed(t) <= bound(t) * (1 + tolerance) at every
/// output. Margins are bound - observed; the worst one is kept.
struct BoundCheckResult {
  std::string name;
  double worst_margin = std::numeric_limits<double>::infinity();
  double t_worst = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

namespace detail {

template <class Bound, class Observed>
BoundCheckResult check_along(const Trajectory& traj, std::string name, double tol, Bound bound,
                             Observed observed) {
  BoundCheckResult out;
  out.name = std::move(name);
  out.tolerance = tol;
  for (const DiagnosticsRecord& rec : traj.records) {
    const double b = bound(rec);
    const double o = observed(rec);
    const double margin = b - o;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.t_worst = rec.t;
    }
    if (!(o <= b * (1.0 + tol))) out.pass = false;
  }
  if (traj.records.empty()) out.worst_margin = 0.0;
  return out;
}

}  // namespace detail

/// mass(t) <= exp(G0 P_M t) mass(0).
inline BoundCheckResult mass_bound_check(const Trajectory& traj, const ModelParams& params,
                                         double tol = 1e-8) {
  if (traj.records.empty()) return {"mass_bound", 0.0, 0.0, tol, true};
  const double m0 = traj.records.front().mass;
  const double t0 = traj.records.front().t;
  const double rate = params.g0 * params.pm;
  return detail::check_along(
      traj, "mass_bound", tol,
      [&](const DiagnosticsRecord& r) { return std::exp(rate * (r.t - t0)) * m0; },
      [](const DiagnosticsRecord& r) { return r.mass; });
}

/// Explicit constant of the energy inequality on [0, horizon]:
/// C = gamma/(gamma-1) G0 P_M^(2-1/gamma) exp(G0 P_M horizon) mass(0).
inline double gronwall_constant(const ModelParams& params, double mass0, double horizon) {
  if (!(params.gamma > 1.0)) throw DomainError("energy inequality requires gamma > 1");
  const double g = params.gamma;
  return g / (g - 1.0) * params.g0 * std::pow(params.pm, 2.0 - 1.0 / g) *
         std::exp(params.g0 * params.pm * horizon) * mass0;
}

/// E(t) + int_0^t J <= (E(0) + C t) exp(G0 P_M t) with C from gronwall_constant.
inline BoundCheckResult gronwall_energy_check(const Trajectory& traj, const ModelParams& params,
                                              double tol = 1e-6) {
  if (!(params.gamma > 1.0)) throw DomainError("energy inequality requires gamma > 1");
  if (traj.records.empty()) return {"energy_inequality", 0.0, 0.0, tol, true};
  const DiagnosticsRecord& first = traj.records.front();
  const double t0 = first.t;
  const double horizon = traj.records.back().t - t0;
  const double c = gronwall_constant(params, first.mass, horizon);
  const double e0 = first.energy.value_or(0.0);
  const double rate = params.g0 * params.pm;
  return detail::check_along(
      traj, "energy_inequality", tol,
      [&](const DiagnosticsRecord& r) {
        const double t = r.t - t0;
        return (e0 + c * t) * std::exp(rate * t);
      },
      [](const DiagnosticsRecord& r) { return r.energy.value_or(0.0) + r.dissipation_cum; });
}

/// Zero vacuum-floor activations over the run.
inline BoundCheckResult nonnegativity_check(const Trajectory& traj) {
  BoundCheckResult out{"nonnegativity", 0.0, 0.0, 0.0, true};
  if (traj.step_stats.floor_activations > 0) {
    out.worst_margin = -static_cast<double>(traj.step_stats.floor_activations);
  }
  out.pass = traj.step_stats.floor_activations == 0;
  return out;
}

/// Per-substep transport mass change <= 10 * machine epsilon * N (relative).
inline BoundCheckResult transport_conservation_check(const Trajectory& traj) {
  const double n = traj.snapshots.empty()
                       ? 1.0
                       : static_cast<double>(traj.snapshots.front().grid.n_cells());
  const double bound = 10.0 * std::numeric_limits<double>::epsilon() * n;
  BoundCheckResult out{"transport_mass_conservation", 0.0, 0.0, 0.0, true};
  out.worst_margin = bound - traj.step_stats.max_transport_mass_defect;
  out.pass = out.worst_margin >= 0.0;
  return out;
}

/// ||p||_{L^2((0,T) x Omega)}.
inline double pressure_l2(const Trajectory& traj) {
  return traj.records.empty() ? 0.0 : std::sqrt(traj.records.back().pressure_l2_cum);
}

/// Time integral of sum dx p (1 - rho); signed.
inline double complementarity_residual(const Trajectory& traj) {
  return traj.records.empty() ? 0.0 : traj.records.back().complementarity_cum;
}

/// (eps ||d rho||^2_{L^2(t,x)}, eps gamma int int rho^(gamma-2) |d rho|^2).
inline std::pair<double, double> eps_terms(const Trajectory& traj) {
  if (traj.records.empty()) return {0.0, 0.0};
  return {traj.records.back().eps_grad_cum, traj.records.back().eps_press_cum};
}

}  // namespace nsgrowth
