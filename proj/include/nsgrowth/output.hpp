#pragma once

/// \file
/// Result files: diagnostics.csv, snapshots.csv, verdict.json, manifest.json,
/// optional SVG charts, and the sweep / compactness tables. Numbers are
/// printed with %.17g so identical runs give identical bytes.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsgrowth/bound_checks.hpp"
#include "nsgrowth/compactness.hpp"
#include "nsgrowth/config.hpp"
#include "nsgrowth/errors.hpp"
#include "nsgrowth/limit_lab.hpp"
#include "nsgrowth/trajectory.hpp"

namespace nsgrowth {

/// Bumped whenever a CSV column or JSON key changes.
inline constexpr int kOutputSchemaVersion = 1;

inline constexpr const char* kDiagnosticsHeader =
    "t,energy,dissipation,dissipation_cum,mass,l1,l2,l4,pressure_sq,pressure_l2_cum,excess_l2,"
    "complementarity,complementarity_cum,consistency_rms,consistency_cells,eps_grad,eps_grad_cum,"
    "eps_press,eps_press_cum";

inline constexpr const char* kSnapshotsHeader = "t,x,rho,u,p";

inline constexpr const char* kSweepHeader =
    "value,failure,excess,pressure_l2,complementarity_cum,consistency_rms,consistency_cells,"
    "eps_grad_cum,eps_press_cum,cauchy_distance,floor_activations,max_transport_mass_defect";

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string diagnostics_csv(const Trajectory& traj) {
  std::string out = std::string(kDiagnosticsHeader) + "\n";
  for (const DiagnosticsRecord& r : traj.records) {
    const double cols[] = {r.dissipation,     r.dissipation_cum, r.mass,
                           r.l1,              r.l2,              r.l4,
                           r.pressure_sq,     r.pressure_l2_cum, r.excess_l2,
                           r.complementarity, r.complementarity_cum, r.consistency_rms};
    out += fmt_num(r.t) + "," + (r.energy ? fmt_num(*r.energy) : std::string());
    for (double c : cols) out += "," + fmt_num(c);
    out += "," + std::to_string(r.consistency_cells);
    for (double c : {r.eps_grad, r.eps_grad_cum, r.eps_press, r.eps_press_cum}) {
      out += "," + fmt_num(c);
    }
    out += "\n";
  }
  return out;
}

/// Long format, one row per (snapshot, cell); u is averaged to cell centers.
inline std::string snapshots_csv(const Trajectory& traj) {
  std::string out = std::string(kSnapshotsHeader) + "\n";
  for (const FluidState& s : traj.snapshots) {
    const std::string t = fmt_num(s.t);
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
      const double u = 0.5 * (s.u[i] + s.u[i + 1]);
      out += t + "," + fmt_num(s.grid.center(i)) + "," + fmt_num(s.rho[i]) + "," + fmt_num(u) +
             "," + fmt_num(pressure(s.rho[i], traj.params.gamma)) + "\n";
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json(const BoundCheckResult& r) {
  return {{"name", r.name},
          {"pass", r.pass},
          {"worst_margin", r.worst_margin},
          {"t_worst", r.t_worst},
          {"tolerance", r.tolerance}};
}

/// The a priori checks that apply to a single run.
inline std::vector<BoundCheckResult> run_checks(const Trajectory& traj) {
  std::vector<BoundCheckResult> checks;
  checks.push_back(mass_bound_check(traj, traj.params));
  if (traj.params.gamma > 1.0) checks.push_back(gronwall_energy_check(traj, traj.params));
  checks.push_back(nonnegativity_check(traj));
  checks.push_back(transport_conservation_check(traj));
  return checks;
}

inline bool all_pass(const std::vector<BoundCheckResult>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

inline std::string verdict_json(const Trajectory& traj,
                                const std::vector<BoundCheckResult>& checks) {
  nlohmann::ordered_json v;
  v["schema_version"] = kOutputSchemaVersion;
  v["pass"] = all_pass(checks) && traj.ok();
  if (traj.failure) {
    v["failure"] = {{"kind", to_string(traj.failure->kind)},
                    {"t", traj.failure->t},
                    {"message", traj.failure->message}};
  } else {
    v["failure"] = nullptr;
  }
  v["floor_activations"] = traj.step_stats.floor_activations;
  v["overflow_flags"] = traj.step_stats.overflow_flags;
  v["steps"] = traj.step_stats.dt_history.size();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  v["checks"] = arr;
  return v.dump(2) + "\n";
}

/// Minimal polyline chart.
inline std::string svg_line_chart(const std::string& title, const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  const double w = 640.0, h = 400.0, pad = 50.0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!xs.empty()) {
    x0 = *std::min_element(xs.begin(), xs.end());
    x1 = *std::max_element(xs.begin(), xs.end());
    y0 = *std::min_element(ys.begin(), ys.end());
    y1 = *std::max_element(ys.begin(), ys.end());
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + (y0 == 0.0 ? 1.0 : std::abs(y0) * 0.1);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\">"
    << title << "</text>\n";
  o << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
    << h - pad << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << pad << "\" y=\"" << h - pad + 18 << "\" font-size=\"11\">" << fmt_num(x0)
    << "</text>\n";
  o << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 18
    << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_num(x1) << "</text>\n";
  o << "<text x=\"4\" y=\"" << h - pad << "\" font-size=\"11\">" << fmt_num(y0) << "</text>\n";
  o << "<text x=\"4\" y=\"" << pad << "\" font-size=\"11\">" << fmt_num(y1) << "</text>\n";
  o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double px = pad + (xs[k] - x0) / (x1 - x0) * (w - 2 * pad);
    const double py = h - pad - (ys[k] - y0) / (y1 - y0) * (h - 2 * pad);
    o << (k ? " " : "") << fmt_num(px) << "," << fmt_num(py);
  }
  o << "\"/>\n</svg>\n";
  return o.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing", path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed", path.string());
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory", dir.string());
  }
}

/// FNV-1a of the canonical config text, as 16 hex digits.
inline std::string run_id(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct OutputFile {
  std::string path;  ///< relative to the output directory
  std::string role;
};

struct OutputManifest {
  std::string run_id;
  std::string config;  ///< canonical config text
  std::vector<OutputFile> files;
  int exit_status = 0;
};

inline std::string manifest_json(const OutputManifest& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = kOutputSchemaVersion;
  j["run_id"] = m.run_id;
  j["config"] = nlohmann::ordered_json::parse(m.config);
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"path", f.path}, {"role", f.role}});
  j["files"] = files;
  j["exit_status"] = m.exit_status;
  return j.dump(2) + "\n";
}

class OutputWriter {
 public:
  OutputWriter(std::filesystem::path dir, const RunConfig& cfg) : dir_(std::move(dir)) {
    ensure_dir(dir_);
    manifest_.run_id = run_id(cfg);
    manifest_.config = serialize_config(cfg);
  }

  void add(const std::string& name, const std::string& role, const std::string& content) {
    write_file(dir_ / name, content);
    manifest_.files.push_back({name, role});
  }

  OutputManifest finish(int exit_status) {
    manifest_.exit_status = exit_status;
    write_file(dir_ / "manifest.json", manifest_json(manifest_));
    return manifest_;
  }

 private:
  std::filesystem::path dir_;
  OutputManifest manifest_;
};

/// Exit status convention shared with the command line.
inline int run_exit_status(const Trajectory& traj, const std::vector<BoundCheckResult>& checks) {
  if (!traj.ok()) return 2;
  return all_pass(checks) ? 0 : 3;
}

/// Writes diagnostics, snapshots, verdict, optional charts and the manifest.
inline OutputManifest emit_outputs(const Trajectory& traj, const RunConfig& cfg,
                                   const std::filesystem::path& out_dir, bool plots = false) {
  const auto checks = run_checks(traj);
  OutputWriter w(out_dir, cfg);
  w.add("diagnostics.csv", "diagnostics", diagnostics_csv(traj));
  w.add("snapshots.csv", "snapshots", snapshots_csv(traj));
  w.add("verdict.json", "verdict", verdict_json(traj, checks));
  if (plots) {
    std::vector<double> t, e, m, x;
    for (const auto& r : traj.records) {
      t.push_back(r.t);
      e.push_back(r.energy.value_or(0.0));
      m.push_back(r.mass);
      x.push_back(r.excess_l2);
    }
    if (traj.params.gamma > 1.0) w.add("energy.svg", "plot", svg_line_chart("E(t)", t, e));
    w.add("mass.svg", "plot", svg_line_chart("mass(t)", t, m));
    w.add("excess.svg", "plot", svg_line_chart("||(rho-1)_+||(t)", t, x));
  }
  return w.finish(run_exit_status(traj, checks));
}

inline std::string sweep_csv(const SweepReport& rep) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const SweepRow& r : rep.rows) {
    out += fmt_num(r.value) + "," + (r.failure ? "1" : "0");
    for (double c : {r.excess, r.pressure_l2, r.complementarity_cum, r.consistency_rms}) {
      out += "," + fmt_num(c);
    }
    out += "," + std::to_string(r.consistency_cells);
    out += "," + fmt_num(r.eps_grad_cum) + "," + fmt_num(r.eps_press_cum);
    out += "," + (r.cauchy_distance ? fmt_num(*r.cauchy_distance) : std::string());
    out += "," + std::to_string(r.floor_activations);
    out += "," + fmt_num(r.max_transport_mass_defect) + "\n";
  }
  return out;
}

inline std::string compactness_csv(const CompactnessReport& c) {
  std::string out = "h,sup";
  for (std::size_t m = 0; m < c.values.size(); ++m) out += ",member" + std::to_string(m);
  out += "\n";
  for (std::size_t k = 0; k < c.h.size(); ++k) {
    out += fmt_num(c.h[k]) + "," + fmt_num(c.sup_value[k]);
    for (const auto& row : c.values) out += "," + fmt_num(row[k]);
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json to_json(const CompactnessReport& c) {
  return {{"h", c.h},
          {"sup", c.sup_value},
          {"slope", c.slope},
          {"decay_factor", c.decay_factor},
          {"required_decay", c.required_decay},
          {"pass", c.pass}};
}

inline std::vector<BoundCheckResult> sweep_checks(const SweepReport& rep) {
  std::vector<BoundCheckResult> checks =
      rep.axis == SweepAxis::gamma ? gamma_trend_checks(rep) : eps_trend_checks(rep);
  for (const SweepRow& r : rep.rows) {
    BoundCheckResult m = r.mass_check;
    m.name += "@" + fmt_num(r.value);
    checks.push_back(m);
    if (r.energy_check) {
      BoundCheckResult e = *r.energy_check;
      e.name += "@" + fmt_num(r.value);
      checks.push_back(e);
    }
  }
  return checks;
}

inline std::string sweep_verdict_json(const SweepReport& rep,
                                      const std::vector<BoundCheckResult>& checks) {
  nlohmann::ordered_json v;
  v["schema_version"] = kOutputSchemaVersion;
  v["axis"] = to_string(rep.axis);
  v["pass"] = all_pass(checks) && rep.all_ok();
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const SweepRow& r : rep.rows) {
    if (r.failure) failures.push_back({{"value", r.value}, {"failure", *r.failure}});
  }
  v["failures"] = failures;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  v["checks"] = arr;
  if (rep.compactness) {
    v["compactness"] = to_json(*rep.compactness);
  } else {
    v["compactness"] = nullptr;
  }
  return v.dump(2) + "\n";
}

/// sweep.csv, sweep_verdict.json, compactness.csv when present, manifest.
/// The compactness outcome is reported but does not change the exit status.
inline OutputManifest emit_sweep_outputs(const SweepReport& rep, const RunConfig& cfg,
                                         const std::filesystem::path& out_dir) {
  const auto checks = sweep_checks(rep);
  OutputWriter w(out_dir, cfg);
  w.add("sweep.csv", "sweep report", sweep_csv(rep));
  w.add("sweep_verdict.json", "verdict", sweep_verdict_json(rep, checks));
  if (rep.compactness) w.add("compactness.csv", "compactness", compactness_csv(*rep.compactness));
  const int status = !rep.all_ok() ? 2 : (all_pass(checks) ? 0 : 3);
  return w.finish(status);
}

}  // namespace nsgrowth
