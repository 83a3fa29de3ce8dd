// nsgrowth command line: run, sweeps, verify battery, compactness table,
// Hele-Shaw reference.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsgrowth/nsgrowth.hpp"

namespace {

using namespace nsgrowth;

struct Overrides {
  std::optional<double> gamma;
  std::optional<double> eps;
  std::optional<double> t_end;
};

void add_overrides(CLI::App* sub, Overrides& o) {
  sub->add_option("--gamma", o.gamma, "override params.gamma");
  sub->add_option("--eps", o.eps, "override params.eps");
  sub->add_option("--t-end", o.t_end, "override time.t_end");
}

RunConfig load_config(const std::string& path, const Overrides& o) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config", path);
  std::stringstream ss;
  ss << f.rdbuf();
  RunConfig cfg = parse_config(ss.str());
  if (o.gamma) cfg.params.gamma = *o.gamma;
  if (o.eps) cfg.params.eps = *o.eps;
  if (o.t_end) cfg.solver.t_end = *o.t_end;
  // re-validate after overrides through the canonical text
  return parse_config(serialize_config(cfg));
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

void print_checks(const std::vector<BoundCheckResult>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " margin=" << fmt_num(c.worst_margin)
              << "\n";
  }
}

int cmd_run(const RunConfig& cfg, const std::string& out, bool plots) {
  const InitialData init = build_initial(cfg);
  for (const auto& w : init.warnings) std::cerr << "warning: " << w << "\n";
  const Trajectory traj = run(init.state, cfg.params, cfg.solver);
  const OutputManifest m = emit_outputs(traj, cfg, out, plots);
  if (traj.failure) {
    std::cerr << "run failed (" << to_string(traj.failure->kind) << ") at t=" << traj.failure->t
              << ": " << traj.failure->message << "\n";
  }
  print_checks(run_checks(traj));
  std::cout << "wrote " << out << " (run " << m.run_id << ")\n";
  return m.exit_status;
}

int cmd_sweep(RunConfig cfg, SweepAxis axis, const std::vector<double>& values,
              const std::string& out) {
  cfg.sweep = SweepSpec{axis, values};
  SweepPlan plan = plan_from_config(cfg);
  const SweepReport rep = run_sweep(plan);
  const OutputManifest m = emit_sweep_outputs(rep, cfg, out);
  for (const auto& r : rep.rows) {
    std::cout << to_string(axis) << "=" << fmt_num(r.value) << " excess=" << fmt_num(r.excess)
              << " pressure_l2=" << fmt_num(r.pressure_l2)
              << " eps_grad=" << fmt_num(r.eps_grad_cum);
    if (r.failure) std::cout << " FAILED: " << *r.failure;
    std::cout << "\n";
  }
  print_checks(sweep_checks(rep));
  std::cout << "wrote " << out << "\n";
  return m.exit_status;
}

int cmd_compactness(RunConfig cfg, const std::string& out) {
  if (!cfg.sweep || cfg.sweep->axis != SweepAxis::gamma || cfg.sweep->values.size() < 2) {
    cfg.sweep = SweepSpec{SweepAxis::gamma, {5, 10, 20, 40, 80}};
  }
  const SweepReport rep = run_sweep(plan_from_config(cfg));
  if (!rep.compactness) throw DomainError("compactness table needs at least two members");
  const CompactnessReport& c = *rep.compactness;
  OutputWriter w(out, cfg);
  w.add("compactness.csv", "compactness", compactness_csv(c));
  w.add("compactness.json", "verdict", to_json(c).dump(2) + "\n");
  for (std::size_t k = 0; k < c.h.size(); ++k) {
    std::cout << "h=" << fmt_num(c.h[k]) << " sup=" << fmt_num(c.sup_value[k]) << "\n";
  }
  std::cout << (c.pass ? "PASS" : "FAIL") << " decay=" << fmt_num(c.decay_factor)
            << " required=" << fmt_num(c.required_decay) << " slope=" << fmt_num(c.slope) << "\n";
  const int status = !rep.all_ok() ? 2 : (c.pass ? 0 : 3);
  w.finish(status);
  return status;
}

int cmd_heleshaw(double nu0, double g0, double pm, const std::string& interval,
                 std::size_t samples, const std::string& out) {
  const auto ab = parse_list(interval, "--interval");
  if (ab.size() != 2) throw ConfigError("--interval: expected a,b");
  ModelParams p;
  p.nu0 = nu0;
  p.g0 = g0;
  p.pm = pm;
  const HeleShawProfile prof = hele_shaw_profile(ab[0], ab[1], p, samples);
  const double res = hele_shaw_residual(prof);
  std::cout << "k=" << fmt_num(prof.k) << " center=" << fmt_num(prof.center_value)
            << " max_residual=" << fmt_num(res) << "\n";
  if (!out.empty()) {
    std::string csv = "x,p\n";
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
      csv += fmt_num(prof.x[i]) + "," + fmt_num(prof.p[i]) + "\n";
    }
    ensure_dir(out);
    write_file(std::filesystem::path(out) / "heleshaw.csv", csv);
  }
  return res <= 1e-8 * pm ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressible Navier-Stokes with growth: solver and limit diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", values_text, interval;
  bool plots = false;
  std::uint64_t seed = 0;
  double nu0 = 1.0, g0 = 1.0, pm = 1.0;
  std::size_t samples = 10000;
  Overrides ov;

  auto* run_cmd = app.add_subcommand("run", "single run with diagnostics and bound checks");
  run_cmd->add_option("--config", config_path, "JSON config")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--plots", plots, "write SVG charts");
  add_overrides(run_cmd, ov);

  auto* sg = app.add_subcommand("sweep-gamma", "gamma sweep");
  sg->add_option("--config", config_path, "JSON config")->required();
  sg->add_option("--values", values_text, "comma separated, ascending")->required();
  sg->add_option("--out", out_dir, "output directory");
  add_overrides(sg, ov);

  auto* se = app.add_subcommand("sweep-eps", "eps sweep");
  se->add_option("--config", config_path, "JSON config")->required();
  se->add_option("--values", values_text, "comma separated, descending")->required();
  se->add_option("--out", out_dir, "output directory");
  add_overrides(se, ov);

  auto* ver = app.add_subcommand("verify", "seeded invariant battery on randomized presets");
  ver->add_option("--config", config_path, "JSON config")->required();
  ver->add_option("--seed", seed, "RNG seed")->required();
  ver->add_option("--out", out_dir, "output directory");
  add_overrides(ver, ov);

  auto* comp = app.add_subcommand("compactness", "oscillation functional over a gamma family");
  comp->add_option("--config", config_path, "JSON config")->required();
  comp->add_option("--out", out_dir, "output directory");
  add_overrides(comp, ov);

  auto* hs = app.add_subcommand("heleshaw", "1D Hele-Shaw pressure profile");
  hs->add_option("--nu0", nu0, "friction coefficient")->required();
  hs->add_option("--interval", interval, "a,b")->required();
  hs->add_option("--g0", g0, "growth rate");
  hs->add_option("--pm", pm, "homeostatic pressure");
  hs->add_option("--samples", samples, "sample count");
  hs->add_option("--out", out_dir, "output directory (heleshaw.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (hs->parsed()) {
      const bool wants_out = hs->count("--out") > 0;
      return cmd_heleshaw(nu0, g0, pm, interval, samples, wants_out ? out_dir : std::string());
    }
    const RunConfig cfg = load_config(config_path, ov);
    if (run_cmd->parsed()) return cmd_run(cfg, out_dir, plots);
    if (sg->parsed()) return cmd_sweep(cfg, SweepAxis::gamma, parse_list(values_text, "--values"), out_dir);
    if (se->parsed()) return cmd_sweep(cfg, SweepAxis::eps, parse_list(values_text, "--values"), out_dir);
    if (ver->parsed()) {
      const VerifyOutcome v = run_verify(cfg, seed, out_dir);
      std::cout << (v.exit_status == 0 ? "PASS" : "FAIL") << " verify seed=" << seed << " ("
                << v.case_dirs.size() << " cases) -> " << out_dir << "\n";
      return v.exit_status;
    }
    if (comp->parsed()) return cmd_compactness(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
