#pragma once

/// \file
/// Parameter sweeps toward the stiff (gamma -> infinity) and vanishing
/// diffusion (eps -> 0) regimes, and the 1D Hele-Shaw reference profile.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nsgrowth/bound_checks.hpp"
#include "nsgrowth/compactness.hpp"
#include "nsgrowth/config.hpp"
#include "nsgrowth/diagnostics.hpp"
#include "nsgrowth/errors.hpp"
#include "nsgrowth/ns_solver.hpp"
#include "nsgrowth/trajectory.hpp"

namespace nsgrowth {

struct SweepPlan {
  RunConfig base;
  SweepAxis axis = SweepAxis::gamma;
  std::vector<double> values;
  KernelSpec kernel;
};

/// Values ascending for gamma, descending for eps. One value is accepted
/// (degenerate sweep, no pairwise quantities).
inline void validate(const SweepPlan& plan) {
  if (plan.values.empty()) throw DomainError("sweep needs at least one value");
  for (std::size_t k = 1; k < plan.values.size(); ++k) {
    const bool ordered = plan.axis == SweepAxis::gamma ? plan.values[k] > plan.values[k - 1]
                                                       : plan.values[k] < plan.values[k - 1];
    if (!ordered) {
      throw DomainError(plan.axis == SweepAxis::gamma ? "gamma values must be ascending"
                                                      : "eps values must be descending");
    }
  }
  for (double v : plan.values) {
    if (!std::isfinite(v)) throw DomainError("sweep values must be finite");
  }
}

/// Plan from a config carrying a sweep section.
inline SweepPlan plan_from_config(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: section required");
  SweepPlan plan;
  plan.base = cfg;
  plan.axis = cfg.sweep->axis;
  plan.values = cfg.sweep->values;
  if (cfg.compactness) plan.kernel = *cfg.compactness;
  return plan;
}

struct SweepRow {
  double value = 0.0;
  std::optional<std::string> failure;
  double excess = 0.0;  ///< ||(rho-1)_+||_L2 at the final time
  double pressure_l2 = 0.0;
  double complementarity_cum = 0.0;
  double consistency_rms = 0.0;
  std::size_t consistency_cells = 0;
  double eps_grad_cum = 0.0;
  double eps_press_cum = 0.0;
  /// L2((0,T) x Omega) distance to the previous row's density.
  std::optional<double> cauchy_distance;
  std::size_t floor_activations = 0;
  double max_transport_mass_defect = 0.0;
  BoundCheckResult mass_check;
  std::optional<BoundCheckResult> energy_check;  ///< absent for gamma <= 1
  FluidState final_state;
};

struct SweepReport {
  SweepAxis axis = SweepAxis::gamma;
  std::vector<SweepRow> rows;
  std::optional<CompactnessReport> compactness;

  bool all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.failure; });
  }
};

/// Member config for one sweep value.
inline RunConfig member_config(const SweepPlan& plan, double value) {
  RunConfig cfg = plan.base;
  cfg.sweep.reset();
  if (plan.axis == SweepAxis::gamma) {
    cfg.params.gamma = value;
  } else {
    cfg.params.eps = value;
  }
  return cfg;
}

inline Trajectory run_member(const RunConfig& cfg) {
  const InitialData init = build_initial(cfg);
  return run(init.state, cfg.params, cfg.solver);
}

/// sqrt of the trapezoid-in-time integral of sum dx (rho_a - rho_b)^2 over
/// the snapshots both trajectories reached.
inline double cauchy_distance(const Trajectory& a, const Trajectory& b) {
  const std::size_t m = std::min(a.snapshots.size(), b.snapshots.size());
  if (m == 0) return 0.0;
  auto sq = [&](std::size_t k) {
    const FluidState& sa = a.snapshots[k];
    const FluidState& sb = b.snapshots[k];
    if (sa.rho.size() != sb.rho.size()) throw ShapeError("sweep members do not share a grid");
    double acc = 0.0;
    for (std::size_t i = 0; i < sa.rho.size(); ++i) {
      const double d = sa.rho[i] - sb.rho[i];
      acc += d * d;
    }
    return acc * sa.grid.dx();
  };
  double total = 0.0;
  double prev = sq(0);
  for (std::size_t k = 1; k < m; ++k) {
    const double cur = sq(k);
    total += 0.5 * (prev + cur) * (a.snapshots[k].t - a.snapshots[k - 1].t);
    prev = cur;
  }
  return std::sqrt(total);
}

inline SweepRow summarize(double value, const Trajectory& traj) {
  SweepRow row;
  row.value = value;
  if (traj.failure) {
    row.failure = std::string(to_string(traj.failure->kind)) + ": " + traj.failure->message;
  }
  if (!traj.records.empty()) {
    const DiagnosticsRecord& last = traj.records.back();
    row.excess = last.excess_l2;
    row.consistency_rms = last.consistency_rms;
    row.consistency_cells = last.consistency_cells;
  }
  row.pressure_l2 = pressure_l2(traj);
  row.complementarity_cum = complementarity_residual(traj);
  const auto eps = eps_terms(traj);
  row.eps_grad_cum = eps.first;
  row.eps_press_cum = eps.second;
  row.floor_activations = traj.step_stats.floor_activations;
  row.max_transport_mass_defect = traj.step_stats.max_transport_mass_defect;
  row.mass_check = mass_bound_check(traj, traj.params);
  if (traj.params.gamma > 1.0) row.energy_check = gronwall_energy_check(traj, traj.params);
  if (!traj.snapshots.empty()) row.final_state = traj.final_state();
  return row;
}

/// Runs every member concurrently, then assembles rows, successive Cauchy
/// distances and the compactness table in plan order.
inline SweepReport run_sweep(const SweepPlan& plan) {
  validate(plan);
  std::vector<std::future<Trajectory>> jobs;
  jobs.reserve(plan.values.size());
  for (double v : plan.values) {
    RunConfig cfg = member_config(plan, v);
    jobs.push_back(std::async(std::launch::async, [cfg]() { return run_member(cfg); }));
  }
  std::vector<Trajectory> trajs;
  trajs.reserve(jobs.size());
  for (auto& j : jobs) trajs.push_back(j.get());

  SweepReport rep;
  rep.axis = plan.axis;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    SweepRow row = summarize(plan.values[k], trajs[k]);
    if (k > 0) row.cauchy_distance = cauchy_distance(trajs[k - 1], trajs[k]);
    rep.rows.push_back(std::move(row));
  }
  if (rep.rows.size() >= 2) {
    std::vector<FluidState> family;
    for (const SweepRow& r : rep.rows) family.push_back(r.final_state);
    rep.compactness = criterion_sweep(family, plan.kernel);
  }
  return rep;
}

/// x[k+1] <= (1 + slack) x[k] for every k; the margin is the smallest
/// (1 + slack) x[k] - x[k+1].
inline BoundCheckResult decreasing_check(std::string name, const std::vector<double>& x,
                                         double slack) {
  BoundCheckResult out;
  out.name = std::move(name);
  out.tolerance = slack;
  if (x.size() < 2) {
    out.worst_margin = 0.0;
    return out;
  }
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double margin = (1.0 + slack) * x[k - 1] - x[k];
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.t_worst = static_cast<double>(k);
    }
    if (!(margin >= 0.0)) out.pass = false;
  }
  return out;
}

/// Least-squares slope of log y against log x over positive pairs.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (!(x[k] > 0.0 && y[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const double mm = static_cast<double>(m);
  return (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
}

template <class F>
std::vector<double> column(const SweepReport& rep, F f) {
  std::vector<double> out;
  for (const SweepRow& r : rep.rows) out.push_back(f(r));
  return out;
}

/// Stiff-limit trends: excess, |complementarity|, consistency residual and
/// successive Cauchy distances decreasing with 5% slack; pressure L2 norm
/// with max/min <= 3.
inline std::vector<BoundCheckResult> gamma_trend_checks(const SweepReport& rep,
                                                        double slack = 0.05) {
  std::vector<BoundCheckResult> out;
  out.push_back(decreasing_check("excess_decreasing",
                                 column(rep, [](const SweepRow& r) { return r.excess; }), slack));
  out.push_back(decreasing_check(
      "complementarity_decreasing",
      column(rep, [](const SweepRow& r) { return std::abs(r.complementarity_cum); }), slack));
  out.push_back(decreasing_check(
      "consistency_decreasing",
      column(rep, [](const SweepRow& r) { return r.consistency_rms; }), slack));
  std::vector<double> cauchy;
  for (const SweepRow& r : rep.rows) {
    if (r.cauchy_distance) cauchy.push_back(*r.cauchy_distance);
  }
  out.push_back(decreasing_check("cauchy_decreasing", cauchy, slack));

  const auto p = column(rep, [](const SweepRow& r) { return r.pressure_l2; });
  BoundCheckResult ratio{"pressure_l2_ratio", 0.0, 0.0, 0.0, true};
  if (!p.empty()) {
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    const double r = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    ratio.worst_margin = 3.0 - r;
    ratio.pass = r <= 3.0;
  }
  out.push_back(ratio);
  return out;
}

/// Vanishing-diffusion trends: both eps accumulators decreasing and the
/// gradient term vanishing with log-log slope >= 0.4 in eps.
inline std::vector<BoundCheckResult> eps_trend_checks(const SweepReport& rep,
                                                      double slack = 0.05) {
  std::vector<BoundCheckResult> out;
  const auto grad = column(rep, [](const SweepRow& r) { return r.eps_grad_cum; });
  const auto press = column(rep, [](const SweepRow& r) { return r.eps_press_cum; });
  out.push_back(decreasing_check("eps_grad_decreasing", grad, slack));
  out.push_back(decreasing_check("eps_press_decreasing", press, slack));
  const double slope = log_log_slope(column(rep, [](const SweepRow& r) { return r.value; }), grad);
  out.push_back({"eps_grad_slope", slope - 0.4, 0.0, 0.0, slope >= 0.4});
  return out;
}

struct HeleShawProfile {
  double a = 0.0;
  double b = 1.0;
  double k = 1.0;
  double pm = 1.0;
  std::vector<double> x;
  std::vector<double> p;
  double center_value = 0.0;
};

/// P_M (1 - cosh(k (x - xc)) / cosh(k l / 2)), k = sqrt(nu0 G0).
inline double hele_shaw_pressure(double x, double a, double b, const ModelParams& params) {
  const double k = std::sqrt(params.nu0 * params.g0);
  const double xc = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  return params.pm * (1.0 - std::cosh(k * (x - xc)) / std::cosh(k * half));
}

/// Samples the profile at n equally spaced nodes including both endpoints.
inline HeleShawProfile hele_shaw_profile(double a, double b, const ModelParams& params,
                                         std::size_t n_samples) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("Hele-Shaw interval needs b > a");
  }
  if (!(params.nu0 > 0.0 && params.g0 > 0.0 && params.pm > 0.0)) {
    throw DomainError("Hele-Shaw profile needs nu0, g0, pm > 0");
  }
  if (n_samples < 2) throw DomainError("Hele-Shaw profile needs at least two samples");
  HeleShawProfile prof;
  prof.a = a;
  prof.b = b;
  prof.k = std::sqrt(params.nu0 * params.g0);
  prof.pm = params.pm;
  // Evaluated in extended precision from the node's offset to the center so
  // each stored sample carries a single rounding; the second difference
  // amplifies sample errors by 1/h^2.
  using ld = long double;
  const ld hl = (static_cast<ld>(b) - a) / static_cast<ld>(n_samples - 1);
  const ld half = (static_cast<ld>(b) - a) / 2;
  const ld kl = std::sqrt(static_cast<ld>(params.nu0) * params.g0);
  const ld denom = std::cosh(kl * half);
  const ld mid = static_cast<ld>(n_samples - 1) / 2;
  prof.x.resize(n_samples);
  prof.p.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const ld offset = (static_cast<ld>(i) - mid) * hl;
    prof.x[i] = i + 1 == n_samples ? b : static_cast<double>(a + static_cast<ld>(i) * hl);
    prof.p[i] = static_cast<double>(params.pm * (1 - std::cosh(kl * offset) / denom));
  }
  prof.p.front() = 0.0;
  prof.p.back() = 0.0;
  prof.center_value = hele_shaw_pressure(0.5 * (a + b), a, b, params);
  return prof;
}

/// max over interior nodes of |-p'' - k^2 (P_M - p)| with centered differences.
inline double hele_shaw_residual(const HeleShawProfile& prof) {
  const std::size_t n = prof.p.size();
  if (n < 3) return 0.0;
  const double h = (prof.b - prof.a) / static_cast<double>(n - 1);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = (prof.p[i + 1] - 2.0 * prof.p[i] + prof.p[i - 1]) / (h * h);
    const double res = -d2 - prof.k * prof.k * (prof.pm - prof.p[i]);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

struct DarcyComparison {
  bool empty = true;
  double a = 0.0;
  double b = 0.0;
  std::size_t cells = 0;
  double rms = 0.0;  ///< RMS of (p - p_HS) / P_M over the saturated block
};

/// Fits the Hele-Shaw profile on the largest contiguous block with
/// rho >= 1 - delta (ends at the block's outer faces) and reports the RMS
/// pressure deviation. Descriptive only.
inline DarcyComparison compare_to_darcy(const FluidState& s, const ModelParams& params,
                                        double delta = 0.05) {
  DarcyComparison out;
  const std::size_t n = s.rho.size();
  std::size_t best_lo = 0, best_len = 0;
  for (std::size_t i = 0; i < n;) {
    if (s.rho[i] >= 1.0 - delta) {
      std::size_t j = i;
      while (j < n && s.rho[j] >= 1.0 - delta) ++j;
      if (j - i > best_len) {
        best_lo = i;
        best_len = j - i;
      }
      i = j;
    } else {
      ++i;
    }
  }
  if (best_len == 0) return out;
  out.empty = false;
  out.cells = best_len;
  out.a = s.grid.face(best_lo);
  out.b = s.grid.face(best_lo + best_len);
  double acc = 0.0;
  for (std::size_t i = best_lo; i < best_lo + best_len; ++i) {
    const double p = pressure(s.rho[i], params.gamma);
    const double d = (p - hele_shaw_pressure(s.grid.center(i), out.a, out.b, params)) / params.pm;
    acc += d * d;
  }
  out.rms = std::sqrt(acc / static_cast<double>(best_len));
  return out;
}

}  // namespace nsgrowth
