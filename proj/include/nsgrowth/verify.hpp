#pragma once

/// \file
/// Seeded invariant battery: randomized-amplitude variants of every preset,
/// each run and checked against the a priori bounds.

#include <cstdint>
#include <filesystem>
#include <future>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsgrowth/config.hpp"
#include "nsgrowth/limit_lab.hpp"
#include "nsgrowth/ns_solver.hpp"
#include "nsgrowth/output.hpp"

namespace nsgrowth {

struct VerifyCase {
  std::string name;
  RunConfig config;
};

/// Uniform draw on [lo, hi) from the top 53 bits, so the sequence does not
/// depend on the standard library's distribution implementation.
inline double draw(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline std::vector<VerifyCase> verify_cases(const RunConfig& base, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<VerifyCase> cases;
  auto with = [&](Preset p) {
    RunConfig c = base;
    c.sweep.reset();
    c.compactness.reset();
    c.seed = seed;
    c.init = InitConfig{};
    c.init.preset = p;
    return c;
  };
  {
    RunConfig c = with(Preset::uniform);
    c.init.r0 = draw(rng, 0.2, 0.9);
    cases.push_back({"uniform", c});
  }
  {
    RunConfig c = with(Preset::bump);
    c.init.amplitude = draw(rng, 0.5, 0.95);
    cases.push_back({"bump", c});
  }
  {
    RunConfig c = with(Preset::plateau);
    c.init.r_in = draw(rng, 0.5, 0.95);
    cases.push_back({"plateau", c});
  }
  {
    RunConfig c = with(Preset::riemann);
    c.init.rho_l = draw(rng, 0.5, 0.95);
    c.init.rho_r = draw(rng, 0.05, 0.4);
    cases.push_back({"riemann", c});
  }
  return cases;
}

struct VerifyOutcome {
  int exit_status = 0;
  std::vector<std::string> case_dirs;
};

/// Runs the cases concurrently and writes case_<k>_<preset>/ directories
/// plus an aggregated verdict.json and manifest.json under out_dir.
inline VerifyOutcome run_verify(const RunConfig& base, std::uint64_t seed,
                                const std::filesystem::path& out_dir) {
  const auto cases = verify_cases(base, seed);
  std::vector<std::future<Trajectory>> jobs;
  for (const auto& c : cases) {
    jobs.push_back(std::async(std::launch::async, [cfg = c.config]() { return run_member(cfg); }));
  }
  std::vector<Trajectory> trajs;
  for (auto& j : jobs) trajs.push_back(j.get());

  RunConfig echo = base;
  echo.seed = seed;
  OutputWriter top(out_dir, echo);
  VerifyOutcome outcome;
  nlohmann::ordered_json agg;
  agg["schema_version"] = kOutputSchemaVersion;
  agg["seed"] = seed;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  bool numerical_failure = false;
  bool check_failure = false;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string dir = "case_" + std::to_string(k) + "_" + cases[k].name;
    const OutputManifest m = emit_outputs(trajs[k], cases[k].config, out_dir / dir);
    outcome.case_dirs.push_back(dir);
    numerical_failure = numerical_failure || m.exit_status == 2;
    check_failure = check_failure || m.exit_status == 3;
    const auto checks = run_checks(trajs[k]);
    nlohmann::ordered_json cj = nlohmann::ordered_json::array();
    for (const auto& c : checks) cj.push_back(to_json(c));
    arr.push_back({{"case", dir},
                   {"run_id", m.run_id},
                   {"init", nlohmann::ordered_json::parse(serialize_config(cases[k].config))["init"]},
                   {"pass", m.exit_status == 0},
                   {"checks", cj}});
  }
  outcome.exit_status = numerical_failure ? 2 : (check_failure ? 3 : 0);
  agg["pass"] = outcome.exit_status == 0;
  agg["cases"] = arr;
  top.add("verdict.json", "verdict", agg.dump(2) + "\n");
  top.finish(outcome.exit_status);
  return outcome;
}

}  // namespace nsgrowth
