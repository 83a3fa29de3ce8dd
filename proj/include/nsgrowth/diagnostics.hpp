#pragma once

/// \file
/// Pointwise-in-time functionals of a fluid state (energy, dissipation,
/// norms, complementarity and consistency residuals, artificial-viscosity
/// terms) and the per-output record that accumulates their time integrals.
///
/// Time integrals use the trapezoid rule at output cadence, so their accuracy
/// is limited by output_every, not by the solver step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "nsgrowth/core_model.hpp"

namespace nsgrowth {

/// E = sum dx (1/2 rho ubar^2 + rho^gamma/(gamma-1)), ubar the face average.
inline double energy(const FluidState& s, const ModelParams& params) {
  if (!(params.gamma > 1.0)) throw DomainError("energy requires gamma > 1");
  const double inv = 1.0 / (params.gamma - 1.0);
  double e = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double ubar = 0.5 * (s.u[i] + s.u[i + 1]);
    e += 0.5 * s.rho[i] * ubar * ubar + pressure(s.rho[i], params.gamma) * inv;
  }
  return e * s.grid.dx();
}

/// J = (mu + xi) sum dx ((u_{i+1} - u_i)/dx)^2.
inline double dissipation(const FluidState& s, const ModelParams& params) {
  const double dx = s.grid.dx();
  double j = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double du = (s.u[i + 1] - s.u[i]) / dx;
    j += du * du;
  }
  return params.viscosity() * j * dx;
}

inline double lq_norm(const FluidState& s, double q) {
  if (!(q >= 1.0)) throw DomainError("q >= 1 required");
  double acc = 0.0;
  for (double r : s.rho) acc += std::pow(std::abs(r), q);
  return std::pow(acc * s.grid.dx(), 1.0 / q);
}

/// ||(rho - 1)_+||_{L^q}.
inline double excess_norm(const FluidState& s, double q) {
  if (!(q >= 1.0)) throw DomainError("q >= 1 required");
  double acc = 0.0;
  for (double r : s.rho) {
    const double e = std::max(r - 1.0, 0.0);
    if (e > 0.0) acc += std::pow(e, q);
  }
  return std::pow(acc * s.grid.dx(), 1.0 / q);
}

/// sum dx p (1 - rho); signed.
inline double complementarity_integrand(const FluidState& s, const ModelParams& params) {
  double acc = 0.0;
  for (double r : s.rho) acc += pressure(r, params.gamma) * (1.0 - r);
  return acc * s.grid.dx();
}

/// sum dx p^2.
inline double pressure_square_integrand(const FluidState& s, const ModelParams& params) {
  double acc = 0.0;
  for (double r : s.rho) {
    const double p = pressure(r, params.gamma);
    acc += p * p;
  }
  return acc * s.grid.dx();
}

struct ConsistencyResult {
  double rms = 0.0;
  std::size_t cells = 0;  ///< size of the saturated set
  bool empty() const noexcept { return cells == 0; }
};

/// RMS of (du/dx)_i - G(p_i) over cells with rho_i >= 1 - delta.
inline ConsistencyResult consistency_residual(const FluidState& s, const ModelParams& params,
                                              double delta = 0.05) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  const double dx = s.grid.dx();
  ConsistencyResult out;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (s.rho[i] < 1.0 - delta) continue;
    const double div_u = (s.u[i + 1] - s.u[i]) / dx;
    const double r = div_u - growth_rate(pressure(s.rho[i], params.gamma), params);
    acc += r * r;
    ++out.cells;
  }
  if (out.cells > 0) out.rms = std::sqrt(acc / static_cast<double>(out.cells));
  return out;
}

/// Centered density gradient per cell with zero-Neumann ghosts.
inline std::vector<double> density_gradient(const FluidState& s) {
  const std::size_t n = s.rho.size();
  const double dx = s.grid.dx();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = s.rho[i == 0 ? 0 : i - 1];
    const double right = s.rho[i + 1 == n ? n - 1 : i + 1];
    g[i] = (right - left) / (2.0 * dx);
  }
  return g;
}

/// Spatial integrands of the artificial-viscosity terms:
/// (eps sum dx |d rho|^2, eps gamma sum dx rho^(gamma-2) |d rho|^2).
inline std::pair<double, double> eps_integrands(const FluidState& s, const ModelParams& params) {
  if (params.eps == 0.0) return {0.0, 0.0};
  const std::vector<double> g = density_gradient(s);
  double grad = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double g2 = g[i] * g[i];
    grad += g2;
    if (g2 > 0.0 && s.rho[i] > 0.0) weighted += checked_pow(s.rho[i], params.gamma - 2.0).value * g2;
  }
  const double dx = s.grid.dx();
  return {params.eps * grad * dx, params.eps * params.gamma * weighted * dx};
}

/// One row of diagnostics at an output time. Cumulative columns are running
/// trapezoid integrals from the initial time.
struct DiagnosticsRecord {
  double t = 0.0;
  std::optional<double> energy;  ///< absent for gamma = 1
  double dissipation = 0.0;
  double dissipation_cum = 0.0;
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l4 = 0.0;
  double pressure_sq = 0.0;
  double pressure_l2_cum = 0.0;  ///< running integral of p^2 over time and space
  double excess_l2 = 0.0;
  double complementarity = 0.0;
  double complementarity_cum = 0.0;
  double consistency_rms = 0.0;
  std::size_t consistency_cells = 0;
  double eps_grad = 0.0;
  double eps_grad_cum = 0.0;
  double eps_press = 0.0;
  double eps_press_cum = 0.0;

  bool operator==(const DiagnosticsRecord&) const = default;
};

struct RecordOptions {
  double saturation_delta = 0.05;
};

inline DiagnosticsRecord make_record(const FluidState& s, const ModelParams& params,
                                     const DiagnosticsRecord* previous,
                                     const RecordOptions& options = {}) {
  DiagnosticsRecord r;
  r.t = s.t;
  if (params.gamma > 1.0) r.energy = energy(s, params);
  r.dissipation = dissipation(s, params);
  r.mass = mass(s);
  r.l1 = lq_norm(s, 1.0);
  r.l2 = lq_norm(s, 2.0);
  r.l4 = lq_norm(s, 4.0);
  r.pressure_sq = pressure_square_integrand(s, params);
  r.excess_l2 = excess_norm(s, 2.0);
  r.complementarity = complementarity_integrand(s, params);
  const ConsistencyResult c = consistency_residual(s, params, options.saturation_delta);
  r.consistency_rms = c.rms;
  r.consistency_cells = c.cells;
  std::tie(r.eps_grad, r.eps_press) = eps_integrands(s, params);

  if (previous != nullptr) {
    const double half_dt = 0.5 * (r.t - previous->t);
    auto trap = [half_dt](double cum, double a, double b) { return cum + half_dt * (a + b); };
    r.dissipation_cum = trap(previous->dissipation_cum, previous->dissipation, r.dissipation);
    r.pressure_l2_cum = trap(previous->pressure_l2_cum, previous->pressure_sq, r.pressure_sq);
    r.complementarity_cum =
        trap(previous->complementarity_cum, previous->complementarity, r.complementarity);
    r.eps_grad_cum = trap(previous->eps_grad_cum, previous->eps_grad, r.eps_grad);
    r.eps_press_cum = trap(previous->eps_press_cum, previous->eps_press, r.eps_press);
  }
  return r;
}

}  // namespace nsgrowth
