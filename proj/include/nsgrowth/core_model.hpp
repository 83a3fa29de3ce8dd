#pragma once

/// \file
/// Constitutive laws, model parameters, the staggered 1D grid and the fluid
/// state shared by the solver and every diagnostic.
///
/// Density lives at cell centers, velocity at faces. All powers of the
/// density are evaluated in the log domain so that exponents in the hundreds
/// neither overflow nor underflow prematurely.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nsgrowth/errors.hpp"

namespace nsgrowth {

/// Physical and asymptotic constants of the growth Navier-Stokes system.
struct ModelParams {
  double gamma = 40.0;  ///< adiabatic exponent, >= 1
  double mu = 1.0;      ///< shear viscosity, > 0
  double xi = 0.0;      ///< bulk-type viscosity, mu + xi > 0
  double g0 = 4.0;      ///< growth rate
  double pm = 2.0;      ///< homeostatic pressure
  double eps = 0.0;     ///< artificial density diffusion, >= 0
  double nu0 = 1.0;     ///< Darcy friction (Hele-Shaw reference only)

  /// Effective 1D viscosity; Laplacian and grad-div coincide in one dimension.
  double viscosity() const noexcept { return mu + xi; }

  bool operator==(const ModelParams&) const = default;
};

inline void validate(const ModelParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(p.gamma) && finite(p.mu) && finite(p.xi) && finite(p.g0) && finite(p.pm) &&
        finite(p.eps) && finite(p.nu0))) {
    throw DomainError("model parameters must be finite");
  }
  if (!(p.gamma >= 1.0)) throw DomainError("gamma >= 1 required");
  if (!(p.mu > 0.0)) throw DomainError("mu > 0 required");
  if (!(p.mu + p.xi > 0.0)) throw DomainError("mu + xi > 0 required");
  if (!(p.g0 > 0.0)) throw DomainError("g0 > 0 required");
  if (!(p.pm > 0.0)) throw DomainError("pm > 0 required");
  if (!(p.eps >= 0.0)) throw DomainError("eps >= 0 required");
  if (!(p.nu0 > 0.0)) throw DomainError("nu0 > 0 required");
}

/// Uniform grid on [0, length] with n_cells cells and n_cells + 1 faces.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double length, std::size_t n_cells) : length_(length), n_cells_(n_cells) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be > 0");
    if (n_cells < 3) throw DomainError("grid needs at least 3 cells");
  }

  double length() const noexcept { return length_; }
  std::size_t n_cells() const noexcept { return n_cells_; }
  std::size_t n_faces() const noexcept { return n_cells_ + 1; }
  double dx() const noexcept { return length_ / static_cast<double>(n_cells_); }
  double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx(); }
  double face(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }

  std::vector<double> centers() const {
    std::vector<double> x(n_cells_);
    for (std::size_t i = 0; i < n_cells_; ++i) x[i] = center(i);
    return x;
  }

  bool operator==(const Grid1D&) const = default;

 private:
  double length_ = 1.0;
  std::size_t n_cells_ = 3;
};

/// Density per cell, velocity per face, and the current time. Momentum is
/// always derived, never stored.
struct FluidState {
  Grid1D grid;
  std::vector<double> rho;
  std::vector<double> u;
  double t = 0.0;

  FluidState() = default;
  explicit FluidState(const Grid1D& g, double time = 0.0)
      : grid(g), rho(g.n_cells(), 0.0), u(g.n_faces(), 0.0), t(time) {}

  std::size_t size() const noexcept { return rho.size(); }
};

/// Structural checks: field sizes, nonnegative finite density, finite
/// velocity, and zero wall velocities.
inline void validate(const FluidState& s) {
  if (s.rho.size() != s.grid.n_cells() || s.u.size() != s.grid.n_faces()) {
    throw ShapeError("state fields do not match the grid");
  }
  for (double r : s.rho) {
    if (!std::isfinite(r)) throw NonFiniteError("non-finite density");
    if (r < 0.0) throw DomainError("negative density");
  }
  for (double v : s.u) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite velocity");
  }
  if (s.u.front() != 0.0 || s.u.back() != 0.0) throw DomainError("wall velocity must vanish");
}

inline bool all_finite(const FluidState& s) {
  for (double r : s.rho) {
    if (!std::isfinite(r)) return false;
  }
  for (double v : s.u) {
    if (!std::isfinite(v)) return false;
  }
  return std::isfinite(s.t);
}

/// Total mass: midpoint sum of the density.
inline double mass(const FluidState& s) {
  double m = 0.0;
  for (double r : s.rho) m += r;
  return m * s.grid.dx();
}

// ---------------------------------------------------------------------------
// Log-domain powers

inline constexpr double kLogMaxDouble = 709.782712893384;  // ln(DBL_MAX)

struct PowerResult {
  double value = 0.0;
  bool overflow = false;
};

/// base^exponent for base >= 0 via exp(exponent * ln base). Results beyond the
/// double range are clamped to DBL_MAX and flagged.
inline PowerResult checked_pow(double base, double exponent) {
  if (!(base >= 0.0)) throw DomainError("power of a negative density");
  if (base == 0.0) {
    if (exponent > 0.0) return {0.0, false};
    if (exponent == 0.0) return {1.0, false};
    return {std::numeric_limits<double>::max(), true};
  }
  const double log_value = exponent * std::log(base);
  if (log_value > kLogMaxDouble) return {std::numeric_limits<double>::max(), true};
  return {std::exp(log_value), false};
}

inline PowerResult pressure_checked(double rho, double gamma) { return checked_pow(rho, gamma); }

/// Barotropic law p = rho^gamma.
inline double pressure(double rho, double gamma) { return checked_pow(rho, gamma).value; }

/// G(p) = G0 (P_M - p); negative above the homeostatic pressure.
inline double growth_rate(double p, const ModelParams& params) {
  return params.g0 * (params.pm - p);
}

/// sqrt(gamma rho^(gamma-1)), zero at vacuum.
inline double sound_speed(double rho, double gamma) {
  if (!(rho >= 0.0)) throw DomainError("sound speed of a negative density");
  if (rho == 0.0) return 0.0;
  const double log_c2 = std::log(gamma) + (gamma - 1.0) * std::log(rho);
  if (log_c2 > kLogMaxDouble) return std::sqrt(std::numeric_limits<double>::max());
  return std::exp(0.5 * log_c2);
}

/// Uniform equilibrium density P_M^(1/gamma), where growth stops.
inline double homeostatic_density(const ModelParams& params) {
  return std::exp(std::log(params.pm) / params.gamma);
}

/// Pressure field at cell centers; overflow_count is incremented per clamped cell.
inline std::vector<double> pressure_field(const std::vector<double>& rho, double gamma,
                                          std::size_t* overflow_count = nullptr) {
  std::vector<double> p(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const PowerResult r = pressure_checked(rho[i], gamma);
    p[i] = r.value;
    if (r.overflow && overflow_count != nullptr) ++*overflow_count;
  }
  return p;
}

}  // namespace nsgrowth
