#pragma once

/// \file
/// Run configuration: JSON schema, validation with key-named errors,
/// canonical re-serialization, and the initial-data presets.
///
/// Schema (every key optional inside its section; grid, params and time
/// sections are required):
///
///   grid    { length = 1, n_cells = 400 }
///   params  { gamma = 40, mu = 1, xi = 0, g0 = 4, pm = 2, eps = 0, nu0 = 1 }
///   init    { preset = "bump" | "plateau" | "riemann" | "uniform", ... }
///             uniform:  r0 = 0.5
///             bump:     amplitude = 0.9, center = L/2, width = L/10
///             plateau:  r_in = 0.9, r_out = 0, center = L/2, half_width = L/10
///             riemann:  rho_l = 0.9, u_l = 0, rho_r = 0.1, u_r = 0, x0 = L/2
///   time    { t_end = 0.5, cfl = 0.3, output_every = 0.01, dt_max = 1e-3, dt_min = 1e-12 }
///   solver  { rho_floor = 1e-12, strict = false, saturation_delta = 0.05 }
///   sweep   { axis = "gamma" | "eps", values = [...] }
///   compactness { h_list = [0.2, 0.1, 0.05, 0.025, 0.0125], required_decay = 3 }
///   seed    = 0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsgrowth/compactness.hpp"
#include "nsgrowth/core_model.hpp"
#include "nsgrowth/errors.hpp"
#include "nsgrowth/ns_solver.hpp"

namespace nsgrowth {

enum class Preset { uniform, bump, plateau, riemann };

inline const char* to_string(Preset p) {
  switch (p) {
    case Preset::uniform: return "uniform";
    case Preset::bump: return "bump";
    case Preset::plateau: return "plateau";
    case Preset::riemann: return "riemann";
  }
  return "unknown";
}

/// Preset parameters. Unset geometric values resolve against the domain
/// length when the initial state is built.
struct InitConfig {
  Preset preset = Preset::bump;
  double r0 = 0.5;
  double amplitude = 0.9;
  std::optional<double> center;
  std::optional<double> width;
  double r_in = 0.9;
  double r_out = 0.0;
  std::optional<double> half_width;
  double rho_l = 0.9;
  double u_l = 0.0;
  double rho_r = 0.1;
  double u_r = 0.0;
  std::optional<double> x0;

  bool operator==(const InitConfig&) const = default;
};

enum class SweepAxis { gamma, eps };

inline const char* to_string(SweepAxis a) { return a == SweepAxis::gamma ? "gamma" : "eps"; }

struct SweepSpec {
  SweepAxis axis = SweepAxis::gamma;
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  double length = 1.0;
  std::size_t n_cells = 400;
  ModelParams params;
  InitConfig init;
  SolverConfig solver;
  std::optional<SweepSpec> sweep;
  std::optional<KernelSpec> compactness;
  std::uint64_t seed = 0;

  Grid1D grid() const { return Grid1D(length, n_cells); }

  bool operator==(const RunConfig& o) const {
    auto same_kernel = [](const std::optional<KernelSpec>& a, const std::optional<KernelSpec>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || (a->h_list == b->h_list && a->required_decay == b->required_decay);
    };
    return length == o.length && n_cells == o.n_cells && params == o.params && init == o.init &&
           solver == o.solver && sweep == o.sweep && same_kernel(compactness, o.compactness) &&
           seed == o.seed;
  }
};

namespace detail {

using nlohmann::json;

class Section {
 public:
  Section(const json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& item : obj_.items()) {
      if (!allowed.contains(item.key())) throw ConfigError(key(item.key()) + ": unknown key");
    }
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k) const { return obj_.contains(k); }

  double number(const std::string& k, double fallback) const {
    if (!obj_.contains(k)) return fallback;
    const json& v = obj_.at(k);
    if (!v.is_number()) throw ConfigError(key(k) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key(k) + ": must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& k) const {
    if (!obj_.contains(k)) return std::nullopt;
    return number(k, 0.0);
  }

  std::uint64_t unsigned_integer(const std::string& k, std::uint64_t fallback) const {
    if (!obj_.contains(k)) return fallback;
    const json& v = obj_.at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(key(k) + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& k, bool fallback) const {
    if (!obj_.contains(k)) return fallback;
    const json& v = obj_.at(k);
    if (!v.is_boolean()) throw ConfigError(key(k) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k, const std::string& fallback) const {
    if (!obj_.contains(k)) return fallback;
    const json& v = obj_.at(k);
    if (!v.is_string()) throw ConfigError(key(k) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& k) const {
    const json& v = obj_.at(k);
    if (!v.is_array()) throw ConfigError(key(k) + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError(key(k) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const json& child(const std::string& k) const { return obj_.at(k); }

 private:
  const json& obj_;
  std::string path_;
};

inline void require(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key + ": " + constraint);
}

}  // namespace detail

/// Parse and validate a JSON run configuration, filling defaults.
inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  using detail::require;
  using detail::Section;

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  Section top(root, "",
              {"grid", "params", "init", "time", "solver", "sweep", "compactness", "seed"});
  for (const char* k : {"grid", "params", "time"}) {
    if (!top.has(k)) throw ConfigError(std::string(k) + ": required section missing");
  }

  RunConfig cfg;
  {
    Section s(top.child("grid"), "grid", {"length", "n_cells"});
    cfg.length = s.number("length", cfg.length);
    require(cfg.length > 0.0, s.key("length"), "length > 0");
    cfg.n_cells = s.unsigned_integer("n_cells", cfg.n_cells);
    require(cfg.n_cells >= 3, s.key("n_cells"), "n_cells >= 3");
  }
  {
    Section s(top.child("params"), "params", {"gamma", "mu", "xi", "g0", "pm", "eps", "nu0"});
    ModelParams& p = cfg.params;
    p.gamma = s.number("gamma", p.gamma);
    require(p.gamma >= 1.0, s.key("gamma"), "gamma >= 1");
    p.mu = s.number("mu", p.mu);
    require(p.mu > 0.0, s.key("mu"), "mu > 0");
    p.xi = s.number("xi", p.xi);
    require(p.mu + p.xi > 0.0, s.key("xi"), "mu + xi > 0");
    p.g0 = s.number("g0", p.g0);
    require(p.g0 > 0.0, s.key("g0"), "g0 > 0");
    p.pm = s.number("pm", p.pm);
    require(p.pm > 0.0, s.key("pm"), "pm > 0");
    p.eps = s.number("eps", p.eps);
    require(p.eps >= 0.0, s.key("eps"), "eps >= 0");
    p.nu0 = s.number("nu0", p.nu0);
    require(p.nu0 > 0.0, s.key("nu0"), "nu0 > 0");
  }
  {
    Section s(top.child("time"), "time", {"t_end", "cfl", "output_every", "dt_max", "dt_min"});
    SolverConfig& c = cfg.solver;
    c.t_end = s.number("t_end", c.t_end);
    require(c.t_end >= 0.0, s.key("t_end"), "t_end >= 0");
    c.cfl = s.number("cfl", c.cfl);
    require(c.cfl > 0.0 && c.cfl <= 1.0, s.key("cfl"), "0 < cfl <= 1");
    c.output_every = s.number("output_every", c.output_every);
    require(c.output_every > 0.0, s.key("output_every"), "output_every > 0");
    c.dt_max = s.number("dt_max", c.dt_max);
    c.dt_min = s.number("dt_min", c.dt_min);
    require(c.dt_min > 0.0, s.key("dt_min"), "dt_min > 0");
    require(c.dt_min < c.dt_max, s.key("dt_max"), "dt_max > dt_min");
  }
  if (top.has("solver")) {
    Section s(top.child("solver"), "solver", {"rho_floor", "strict", "saturation_delta"});
    SolverConfig& c = cfg.solver;
    c.rho_floor = s.number("rho_floor", c.rho_floor);
    require(c.rho_floor > 0.0, s.key("rho_floor"), "rho_floor > 0");
    c.strict = s.boolean("strict", c.strict);
    c.saturation_delta = s.number("saturation_delta", c.saturation_delta);
    require(c.saturation_delta > 0.0 && c.saturation_delta < 1.0, s.key("saturation_delta"),
            "0 < saturation_delta < 1");
  }
  if (top.has("init")) {
    const json& node = top.child("init");
    if (!node.is_object()) throw ConfigError("init: expected an object");
    const std::string preset =
        node.contains("preset") && node.at("preset").is_string() ? node.at("preset").get<std::string>()
                                                                 : "bump";
    InitConfig& in = cfg.init;
    if (preset == "uniform") {
      Section s(node, "init", {"preset", "r0"});
      in.preset = Preset::uniform;
      in.r0 = s.number("r0", in.r0);
      require(in.r0 >= 0.0, s.key("r0"), "r0 >= 0");
    } else if (preset == "bump") {
      Section s(node, "init", {"preset", "amplitude", "center", "width"});
      in.preset = Preset::bump;
      in.amplitude = s.number("amplitude", in.amplitude);
      require(in.amplitude >= 0.0, s.key("amplitude"), "amplitude >= 0");
      in.center = s.optional_number("center");
      require(!in.center || (*in.center >= 0.0 && *in.center <= cfg.length), s.key("center"),
              "0 <= center <= length");
      in.width = s.optional_number("width");
      require(!in.width || *in.width > 0.0, s.key("width"), "width > 0");
    } else if (preset == "plateau") {
      Section s(node, "init", {"preset", "r_in", "r_out", "center", "half_width"});
      in.preset = Preset::plateau;
      in.r_in = s.number("r_in", in.r_in);
      require(in.r_in >= 0.0, s.key("r_in"), "r_in >= 0");
      in.r_out = s.number("r_out", in.r_out);
      require(in.r_out >= 0.0, s.key("r_out"), "r_out >= 0");
      in.center = s.optional_number("center");
      require(!in.center || (*in.center >= 0.0 && *in.center <= cfg.length), s.key("center"),
              "0 <= center <= length");
      in.half_width = s.optional_number("half_width");
      require(!in.half_width || *in.half_width > 0.0, s.key("half_width"), "half_width > 0");
    } else if (preset == "riemann") {
      Section s(node, "init", {"preset", "rho_l", "u_l", "rho_r", "u_r", "x0"});
      in.preset = Preset::riemann;
      in.rho_l = s.number("rho_l", in.rho_l);
      require(in.rho_l >= 0.0, s.key("rho_l"), "rho_l >= 0");
      in.u_l = s.number("u_l", in.u_l);
      in.rho_r = s.number("rho_r", in.rho_r);
      require(in.rho_r >= 0.0, s.key("rho_r"), "rho_r >= 0");
      in.u_r = s.number("u_r", in.u_r);
      in.x0 = s.optional_number("x0");
      require(!in.x0 || (*in.x0 > 0.0 && *in.x0 < cfg.length), s.key("x0"), "0 < x0 < length");
    } else {
      throw ConfigError("init.preset: expected one of uniform, bump, plateau, riemann");
    }
  }
  if (top.has("sweep")) {
    Section s(top.child("sweep"), "sweep", {"axis", "values"});
    SweepSpec sw;
    const std::string axis = s.string("axis", "gamma");
    if (axis == "gamma") {
      sw.axis = SweepAxis::gamma;
    } else if (axis == "eps") {
      sw.axis = SweepAxis::eps;
    } else {
      throw ConfigError("sweep.axis: expected gamma or eps");
    }
    if (s.has("values")) sw.values = s.numbers("values");
    cfg.sweep = sw;
  }
  if (top.has("compactness")) {
    Section s(top.child("compactness"), "compactness", {"h_list", "required_decay"});
    KernelSpec k;
    if (s.has("h_list")) k.h_list = s.numbers("h_list");
    k.required_decay = s.number("required_decay", k.required_decay);
    try {
      validate(k);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("compactness: ") + e.what());
    }
    cfg.compactness = k;
  }
  cfg.seed = top.unsigned_integer("seed", cfg.seed);
  return cfg;
}

/// Canonical JSON form: fixed key order, two-space indent, trailing newline.
inline std::string serialize_config(const RunConfig& cfg) {
  using ojson = nlohmann::ordered_json;
  ojson root;
  root["grid"] = {{"length", cfg.length}, {"n_cells", cfg.n_cells}};
  const ModelParams& p = cfg.params;
  root["params"] = {{"gamma", p.gamma}, {"mu", p.mu}, {"xi", p.xi},  {"g0", p.g0},
                    {"pm", p.pm},       {"eps", p.eps}, {"nu0", p.nu0}};
  ojson init;
  const InitConfig& in = cfg.init;
  init["preset"] = to_string(in.preset);
  switch (in.preset) {
    case Preset::uniform: init["r0"] = in.r0; break;
    case Preset::bump:
      init["amplitude"] = in.amplitude;
      if (in.center) init["center"] = *in.center;
      if (in.width) init["width"] = *in.width;
      break;
    case Preset::plateau:
      init["r_in"] = in.r_in;
      init["r_out"] = in.r_out;
      if (in.center) init["center"] = *in.center;
      if (in.half_width) init["half_width"] = *in.half_width;
      break;
    case Preset::riemann:
      init["rho_l"] = in.rho_l;
      init["u_l"] = in.u_l;
      init["rho_r"] = in.rho_r;
      init["u_r"] = in.u_r;
      if (in.x0) init["x0"] = *in.x0;
      break;
  }
  root["init"] = init;
  const SolverConfig& c = cfg.solver;
  root["time"] = {{"t_end", c.t_end},
                  {"cfl", c.cfl},
                  {"output_every", c.output_every},
                  {"dt_max", c.dt_max},
                  {"dt_min", c.dt_min}};
  root["solver"] = {
      {"rho_floor", c.rho_floor}, {"strict", c.strict}, {"saturation_delta", c.saturation_delta}};
  if (cfg.sweep) {
    root["sweep"] = {{"axis", to_string(cfg.sweep->axis)}, {"values", cfg.sweep->values}};
  }
  if (cfg.compactness) {
    root["compactness"] = {{"h_list", cfg.compactness->h_list},
                           {"required_decay", cfg.compactness->required_decay}};
  }
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

struct InitialData {
  FluidState state;
  std::vector<std::string> warnings;
};

/// Build the initial state of a preset. Warns when the density exceeds 1 or
/// is not negligible (>= 1e-8) in the outer 5% of cells next to each wall.
inline InitialData build_initial(const RunConfig& cfg) {
  const Grid1D grid = cfg.grid();
  const double L = grid.length();
  const std::size_t n = grid.n_cells();
  const InitConfig& in = cfg.init;
  InitialData out{FluidState(grid), {}};
  FluidState& s = out.state;

  switch (in.preset) {
    case Preset::uniform:
      if (!(in.r0 >= 0.0)) throw ConfigError("init.r0: r0 >= 0");
      std::fill(s.rho.begin(), s.rho.end(), in.r0);
      break;
    case Preset::bump: {
      const double c = in.center.value_or(0.5 * L);
      const double w = in.width.value_or(0.1 * L);
      if (!(w > 0.0)) throw ConfigError("init.width: width > 0");
      for (std::size_t i = 0; i < n; ++i) {
        const double z = (grid.center(i) - c) / w;
        s.rho[i] = std::clamp(in.amplitude * std::exp(-z * z), 0.0, 1.0);
      }
      break;
    }
    case Preset::plateau: {
      const double c = in.center.value_or(0.5 * L);
      const double hw = in.half_width.value_or(0.1 * L);
      if (!(hw > 0.0)) throw ConfigError("init.half_width: half_width > 0");
      std::vector<double> sharp(n);
      for (std::size_t i = 0; i < n; ++i) {
        sharp[i] = std::abs(grid.center(i) - c) <= hw ? in.r_in : in.r_out;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double l = sharp[i == 0 ? 0 : i - 1];
        const double r = sharp[i + 1 == n ? n - 1 : i + 1];
        s.rho[i] = (l + sharp[i] + r) / 3.0;
      }
      break;
    }
    case Preset::riemann: {
      const double x0 = in.x0.value_or(0.5 * L);
      for (std::size_t i = 0; i < n; ++i) s.rho[i] = grid.center(i) < x0 ? in.rho_l : in.rho_r;
      for (std::size_t f = 1; f < n; ++f) {
        const double xf = grid.face(f);
        s.u[f] = xf < x0 ? in.u_l : (xf > x0 ? in.u_r : 0.5 * (in.u_l + in.u_r));
      }
      break;
    }
  }

  double peak = 0.0;
  for (double r : s.rho) peak = std::max(peak, r);
  if (peak > 1.0) {
    std::ostringstream msg;
    msg << "initial density exceeds 1 (max " << peak
        << "); bounds uniform in gamma assume 0 <= rho0 <= 1";
    out.warnings.push_back(msg.str());
  }
  const std::size_t band = std::max<std::size_t>(1, n / 20);
  double wall_peak = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    wall_peak = std::max({wall_peak, s.rho[i], s.rho[n - 1 - i]});
  }
  if (wall_peak >= 1e-8) {
    std::ostringstream msg;
    msg << "initial density not negligible near the walls (max " << wall_peak
        << " in the outer 5% of cells); the bounded box may not represent the whole line";
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace nsgrowth
