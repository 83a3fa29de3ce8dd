#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nsgrowth/core_model.hpp"
#include "nsgrowth/diagnostics.hpp"

namespace nsgrowth {

enum class FailureKind { stall, non_finite, negative_density };

inline const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::stall: return "stall";
    case FailureKind::non_finite: return "non_finite";
    case FailureKind::negative_density: return "negative_density";
  }
  return "unknown";
}

struct RunFailure {
  FailureKind kind = FailureKind::stall;
  double t = 0.0;
  std::string message;
};

struct StepStats {
  std::vector<double> dt_history;
  std::size_t floor_activations = 0;
  std::size_t overflow_flags = 0;
  /// Largest |mass change| of a transport substep relative to the mass before it.
  double max_transport_mass_defect = 0.0;
};

/// Snapshots at output times (the first is the initial state), the matching
/// diagnostics rows, and step statistics. A failed run keeps everything up to
/// the failure.
struct Trajectory {
  ModelParams params;
  std::vector<FluidState> snapshots;
  std::vector<DiagnosticsRecord> records;
  StepStats step_stats;
  std::optional<RunFailure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
  const FluidState& final_state() const { return snapshots.back(); }
};

}  // namespace nsgrowth
