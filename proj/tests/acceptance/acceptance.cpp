// Acceptance battery: one PASS/FAIL line per criterion. `--only k` runs a
// single criterion (ctest registers each separately).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsgrowth/nsgrowth.hpp"

using namespace nsgrowth;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int prec = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

RunConfig load(const std::string& rel) {
  std::ifstream f(fs::path(NSGROWTH_SOURCE_DIR) / rel, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

RunConfig bump_config() { return load("configs/bump.json"); }

const double kTransportBound = 10.0 * std::numeric_limits<double>::epsilon();

// ---- shared runs ----------------------------------------------------------

RunConfig uniform_config(double gamma, double t_end) {
  RunConfig c;
  c.n_cells = 50;
  c.params.gamma = gamma;
  c.params.g0 = 1.0;
  c.params.pm = 1.0;
  c.init.preset = Preset::uniform;
  c.init.r0 = 0.5;
  c.solver.t_end = t_end;
  c.solver.output_every = t_end / 50.0;
  c.solver.dt_max = 1e-2;
  return c;
}

struct LogisticRuns {
  std::vector<double> gammas{1.0, 5.0, 40.0};
  std::vector<Trajectory> trajs;
  double seconds = 0.0;
};

const LogisticRuns& logistic_runs() {
  static const LogisticRuns runs = [] {
    LogisticRuns r;
    const auto t0 = Clock::now();
    for (double g : r.gammas) r.trajs.push_back(run_member(uniform_config(g, 5.0)));
    r.seconds = seconds_since(t0);
    return r;
  }();
  return runs;
}

struct FixedPointRuns {
  std::vector<double> gammas{1.0, 5.0, 40.0};
  std::vector<Trajectory> trajs;
  double seconds = 0.0;
};

const FixedPointRuns& fixed_point_runs() {
  static const FixedPointRuns runs = [] {
    FixedPointRuns r;
    const auto t0 = Clock::now();
    for (double g : r.gammas) r.trajs.push_back(run_member(uniform_config(g, 50.0 / g)));
    r.seconds = seconds_since(t0);
    return r;
  }();
  return runs;
}

struct TimedTrajectory {
  Trajectory traj;
  double seconds = 0.0;
};

const TimedTrajectory& bump40() {
  static const TimedTrajectory r = [] {
    const auto t0 = Clock::now();
    TimedTrajectory out{run_member(bump_config()), 0.0};
    out.seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

struct TimedSweep {
  SweepReport report;
  double seconds = 0.0;
};

const TimedSweep& gamma_sweep() {
  static const TimedSweep r = [] {
    SweepPlan plan;
    plan.base = bump_config();
    plan.axis = SweepAxis::gamma;
    plan.values = {5, 10, 20, 40, 80};
    const auto t0 = Clock::now();
    TimedSweep out{run_sweep(plan), 0.0};
    out.seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

const TimedSweep& eps_sweep() {
  static const TimedSweep r = [] {
    SweepPlan plan;
    plan.base = bump_config();
    plan.base.params.gamma = 10.0;
    plan.axis = SweepAxis::eps;
    plan.values = {1e-2, 1e-3, 1e-4};
    const auto t0 = Clock::now();
    TimedSweep out{run_sweep(plan), 0.0};
    out.seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

// ---- criteria -------------------------------------------------------------

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Closed-form logistic in y = rho^gamma, evaluated independently of the solver.
double logistic_oracle(double rho0, double gamma, double g0, double pm, double t) {
  const long double y0 = std::pow(static_cast<long double>(rho0), static_cast<long double>(gamma));
  const long double e = std::exp(-static_cast<long double>(gamma * g0 * pm * t));
  const long double y = pm * y0 / (y0 + (pm - y0) * e);
  return static_cast<double>(std::pow(y, 1.0L / static_cast<long double>(gamma)));
}

Outcome c1() {
  const auto& runs = logistic_runs();
  double worst = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < runs.gammas.size(); ++k) {
    const Trajectory& tr = runs.trajs[k];
    ok = ok && tr.ok();
    for (const FluidState& s : tr.snapshots) {
      const double ref = logistic_oracle(0.5, runs.gammas[k], 1.0, 1.0, s.t);
      for (double r : s.rho) worst = std::max(worst, std::abs(r - ref) / ref);
    }
  }
  ok = ok && worst <= 1e-9;
  return {ok, "max rel err " + num(worst) + " (<= 1e-9), " + num(runs.seconds, 3) + " s"};
}

Outcome c2() {
  const auto& runs = fixed_point_runs();
  double worst_rho = 0.0, worst_p = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < runs.gammas.size(); ++k) {
    const Trajectory& tr = runs.trajs[k];
    ok = ok && tr.ok();
    const double g = runs.gammas[k];
    const double target = std::pow(1.0, 1.0 / g);
    for (double r : tr.final_state().rho) {
      worst_rho = std::max(worst_rho, std::abs(r - target));
      worst_p = std::max(worst_p, std::abs(pressure(r, g) - 1.0));
    }
  }
  ok = ok && worst_rho <= 1e-6 && worst_p <= 1e-4;
  return {ok, "|rho - P_M^(1/gamma)| = " + num(worst_rho) + ", |p - P_M| = " + num(worst_p) +
                  ", " + num(runs.seconds, 3) + " s"};
}

Outcome c3() {
  const auto& r = bump40();
  const auto chk = mass_bound_check(r.traj, r.traj.params, 1e-8);
  return {r.traj.ok() && chk.pass, "worst margin " + num(chk.worst_margin) + " at t=" +
                                       num(chk.t_worst) + ", " + num(r.seconds, 3) + " s"};
}

Outcome c4() {
  const auto& r = bump40();
  const auto chk = gronwall_energy_check(r.traj, r.traj.params);
  const auto& first = r.traj.records.front();
  const auto& last = r.traj.records.back();
  return {r.traj.ok() && chk.pass,
          "E(0)=" + num(first.energy.value_or(0)) + ", E(T)+intJ=" +
              num(last.energy.value_or(0) + last.dissipation_cum) + ", worst margin " +
              num(chk.worst_margin) + " at t=" + num(chk.t_worst)};
}

std::string row_values(const SweepReport& rep, double SweepRow::*field) {
  std::string s;
  for (const auto& r : rep.rows) s += (s.empty() ? "" : " ") + num(r.*field, 3);
  return s;
}

Outcome c5() {
  const auto& sw = gamma_sweep();
  const auto checks = gamma_trend_checks(sw.report);
  bool ok = sw.report.all_ok();
  std::string failed;
  for (const auto& c : checks) {
    if (c.name == "consistency_decreasing") continue;  // reported under #6
    if (!c.pass) {
      ok = false;
      failed += " " + c.name;
    }
  }
  std::string cauchy;
  for (const auto& r : sw.report.rows) {
    if (r.cauchy_distance) cauchy += (cauchy.empty() ? "" : " ") + num(*r.cauchy_distance, 3);
  }
  return {ok, "excess [" + row_values(sw.report, &SweepRow::excess) + "], compl [" +
                  row_values(sw.report, &SweepRow::complementarity_cum) + "], p_L2 [" +
                  row_values(sw.report, &SweepRow::pressure_l2) + "], cauchy [" + cauchy + "]" +
                  (failed.empty() ? "" : ", failed:" + failed) + ", " + num(sw.seconds, 3) + " s"};
}

Outcome c6() {
  const auto& sw = gamma_sweep();
  const SweepRow& last = sw.report.rows.back();
  const ModelParams p = bump_config().params;
  const double gate = 0.1 * p.g0 * p.pm;
  return {!last.failure && last.consistency_cells > 0 && last.consistency_rms <= gate,
          "gamma=80 rms " + num(last.consistency_rms) + " on " +
              std::to_string(last.consistency_cells) + " cells (gate " + num(gate) + ")"};
}

Outcome c7() {
  const auto& sw = eps_sweep();
  const auto checks = eps_trend_checks(sw.report);
  bool ok = sw.report.all_ok();
  for (const auto& c : checks) ok = ok && c.pass;
  std::vector<double> eps, grad;
  for (const auto& r : sw.report.rows) {
    eps.push_back(r.value);
    grad.push_back(r.eps_grad_cum);
  }
  return {ok, "eps*||d rho||^2 [" + row_values(sw.report, &SweepRow::eps_grad_cum) +
                  "], press term [" + row_values(sw.report, &SweepRow::eps_press_cum) +
                  "], slope " + num(log_log_slope(eps, grad)) + " (>= 0.4), " +
                  num(sw.seconds, 3) + " s"};
}

Outcome c8() {
  const auto t0 = Clock::now();
  const auto& sw = gamma_sweep();
  const KernelSpec spec;
  std::vector<FluidState> family;
  for (const auto& r : sw.report.rows) family.push_back(r.final_state);
  const CompactnessReport rep = criterion_sweep(family, spec);

  // grid-scale checkerboards with varying amplitude
  const Grid1D grid = family.front().grid;
  std::vector<FluidState> checker;
  for (double a : {0.2, 0.4, 0.6, 0.8}) {
    FluidState s(grid);
    for (std::size_t i = 0; i < grid.n_cells(); ++i) s.rho[i] = 0.5 + 0.5 * a * (i % 2 ? 1 : -1);
    checker.push_back(s);
  }
  const CompactnessReport neg = criterion_sweep(checker, spec);
  const bool control_ok = !neg.pass;
  const double ceiling = kernel_l1_norm(spec.h_list.back()) / kernel_l1_norm(spec.h_list.front());
  std::string sups;
  for (double v : rep.sup_value) sups += (sups.empty() ? "" : " ") + num(v);
  return {rep.pass && control_ok,
          "sup [" + sups + "], decay " + num(rep.decay_factor) + " (need " +
              num(spec.required_decay) + "; kernel-mass ceiling " + num(ceiling) +
              "), checkerboard decay " + num(neg.decay_factor) +
              (control_ok ? " (control ok)" : " (control FAILED)") + ", " +
              num(seconds_since(t0), 3) + " s"};
}

Outcome c9() {
  const RunConfig cfg = bump_config();
  const InitialData init = build_initial(cfg);
  const std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<WeightField> fields;
  for (double l : lambdas) fields.emplace_back(cfg.n_cells, l);
  std::vector<double> sup_mass(lambdas.size(), 0.0);
  double wmin = 1.0, wmax = 0.0;
  bool saturated = false;
  const Grid1D grid = cfg.grid();
  const auto t0 = Clock::now();
  const Trajectory traj =
      run(init.state, cfg.params, cfg.solver, [&](const FluidState& s, double dt) {
        const auto B = maximal_operator(velocity_gradient_magnitude(s.u, grid.dx()));
        for (std::size_t k = 0; k < fields.size(); ++k) {
          fields[k].B = B;
          fields[k] = evolve_weight_with_rate(std::move(fields[k]), s.u, grid, cfg.params.eps, dt);
          for (double w : fields[k].w) {
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
          }
          const WeightMass m = weight_mass_check(s.rho, fields[k].w, grid.dx());
          saturated = saturated || m.saturated;
          sup_mass[k] = std::max(sup_mass[k], m.value);
        }
      });
  std::vector<double> c;
  for (std::size_t k = 0; k < lambdas.size(); ++k) c.push_back(sup_mass[k] / lambdas[k]);
  const double cmin = *std::min_element(c.begin(), c.end());
  const double cmax = *std::max_element(c.begin(), c.end());
  const double spread = cmin > 0.0 ? cmax / cmin - 1.0 : std::numeric_limits<double>::infinity();
  const bool in_range = wmin >= 0.0 && wmax <= 1.0;
  return {traj.ok() && in_range && spread <= 0.3 && !saturated,
          "w in [" + num(wmin) + ", " + num(wmax) + "], C per lambda [" + num(c[0]) + " " +
              num(c[1]) + " " + num(c[2]) + "], spread " + num(spread) + " (<= 0.3), " +
              num(seconds_since(t0), 3) + " s"};
}

Outcome c10() {
  const auto t0 = Clock::now();
  ModelParams p;
  p.nu0 = 1.0;
  p.g0 = 1.0;
  p.pm = 1.0;
  const HeleShawProfile prof = hele_shaw_profile(-1.0, 1.0, p, 10000);
  const double res = hele_shaw_residual(prof);
  const double center_err = std::abs(prof.center_value - (1.0 - 1.0 / std::cosh(1.0)));
  return {res <= 1e-8 * p.pm && center_err <= 1e-10,
          "max residual " + num(res) + " (<= 1e-8), center error " + num(center_err) + ", " +
              num(seconds_since(t0), 3) + " s"};
}

Outcome c11() {
  double worst_ratio = 0.0;
  std::size_t runs = 0;
  auto note = [&](double defect, std::size_t n) {
    worst_ratio = std::max(worst_ratio, defect / (kTransportBound * static_cast<double>(n)));
    ++runs;
  };
  for (const auto& t : logistic_runs().trajs) {
    note(t.step_stats.max_transport_mass_defect, t.snapshots.front().grid.n_cells());
  }
  for (const auto& t : fixed_point_runs().trajs) {
    note(t.step_stats.max_transport_mass_defect, t.snapshots.front().grid.n_cells());
  }
  note(bump40().traj.step_stats.max_transport_mass_defect, bump_config().n_cells);
  for (const auto* sw : {&gamma_sweep(), &eps_sweep()}) {
    for (const auto& r : sw->report.rows) {
      note(r.max_transport_mass_defect, r.final_state.grid.n_cells());
    }
  }
  return {worst_ratio <= 1.0, std::to_string(runs) +
                                  " runs, worst defect / (10 eps N) = " + num(worst_ratio)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome c12() {
  const fs::path base = fs::temp_directory_path() / "nsgrowth_acceptance_determinism";
  fs::remove_all(base);
  const std::string cfg = (fs::path(NSGROWTH_SOURCE_DIR) / "configs/bump.json").string();
  int status[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    const fs::path out = base / ("run" + std::to_string(k));
    const std::string cmd = std::string("\"") + NSGROWTH_CLI + "\" verify --config \"" + cfg +
                            "\" --seed 7 --out \"" + out.string() + "\" > /dev/null";
    status[k] = std::system(cmd.c_str());
  }
  std::size_t compared = 0;
  bool same = true;
  for (const auto& entry : fs::recursive_directory_iterator(base / "run0")) {
    const std::string name = entry.path().filename().string();
    if (name != "diagnostics.csv" && name != "verdict.json") continue;
    const fs::path other = base / "run1" / fs::relative(entry.path(), base / "run0");
    same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
    ++compared;
  }
  fs::remove_all(base);
  return {same && compared > 0 && status[0] == status[1],
          std::to_string(compared) + " files compared byte-for-byte, identical: " +
              (same ? "yes" : "no") + ", verify exit status " + std::to_string(status[0] >> 8)};
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome()>>> m{
      {1, {"logistic oracle", c1}},
      {2, {"homeostatic fixed point", c2}},
      {3, {"mass bound", c3}},
      {4, {"energy inequality", c4}},
      {5, {"stiff-limit trends", c5}},
      {6, {"consistency relation", c6}},
      {7, {"vanishing diffusion limit", c7}},
      {8, {"compactness criterion", c8}},
      {9, {"weight bounds", c9}},
      {10, {"Hele-Shaw reference", c10}},
      {11, {"transport mass conservation", c11}},
      {12, {"determinism", c12}},
  };
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only k]\n";
      return 1;
    }
  }
  if (only && !criteria().contains(*only)) {
    std::cerr << "no criterion " << *only << "\n";
    return 1;
  }
  int failures = 0;
  for (const auto& [k, entry] : criteria()) {
    if (only && k != *only) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << k << " (" << entry.first
              << "): " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
