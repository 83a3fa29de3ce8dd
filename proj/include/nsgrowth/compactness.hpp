#pragma once

/// \file
/// Discrete counterparts of the compactness machinery for density families:
/// the kernel family K_h, its L1 normalization, the kernel-weighted
/// oscillation functional, the maximal operator, and transported weights.
///
/// Everything is specialized to one space dimension, where
/// K_h(x) = zeta(|x|) / sqrt(x^2 + h^2) with a smooth cutoff zeta that equals
/// 1 on [0,1] and vanishes on [2, inf).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nsgrowth/core_model.hpp"
#include "nsgrowth/errors.hpp"

namespace nsgrowth {

/// C-infinity cutoff: 1 on [0,1], 0 on [2,inf), monotone in between.
inline double kernel_cutoff(double r) {
  r = std::abs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double a = f(2.0 - r);
  const double b = f(r - 1.0);
  return a / (a + b);
}

inline double kernel_value(double x, double h) {
  if (!(h > 0.0 && h <= 1.0)) throw DomainError("kernel scale h must lie in (0,1]");
  const double r = std::abs(x);
  if (r >= 2.0) return 0.0;
  return kernel_cutoff(r) / std::sqrt(x * x + h * h);
}

/// ||K_h||_{L^1(R)} = 2 asinh(1/h) + 2 int_1^2 zeta(x)/sqrt(x^2+h^2) dx.
inline double kernel_l1_norm(double h) {
  if (!(h > 0.0 && h <= 1.0)) throw DomainError("kernel scale h must lie in (0,1]");
  using boost::math::quadrature::gauss_kronrod;
  const double tail = gauss_kronrod<double, 61>::integrate(
      [h](double x) { return kernel_cutoff(x) / std::sqrt(x * x + h * h); }, 1.0, 2.0, 10, 1e-14);
  return 2.0 * std::asinh(1.0 / h) + 2.0 * tail;
}

/// L1 mass of the scale-averaged kernel int_{h0}^1 Kbar_h dh/h. Each Kbar_h has
/// unit mass, so this is exactly -ln h0.
inline double normalized_kernel_mass(double h0) {
  if (!(h0 > 0.0 && h0 <= 1.0)) throw DomainError("h0 must lie in (0,1]");
  return -std::log(h0);
}

/// (1/||K_h||_1) sum_ij dx^2 K_h(x_i - x_j) (rho_i - rho_j)^2 W_ij with
/// W_ij = 1 when no weight is given and (w_i + w_j)/2 otherwise.
inline double oscillation_functional(std::span<const double> rho, const Grid1D& grid, double h,
                                     std::optional<std::span<const double>> weight = {}) {
  const std::size_t n = rho.size();
  if (n != grid.n_cells()) throw ShapeError("field does not match grid");
  if (weight && weight->size() != n) throw ShapeError("weight does not match grid");
  const double dx = grid.dx();

  std::vector<double> k_of_offset;
  for (std::size_t d = 0; d < n && static_cast<double>(d) * dx < 2.0; ++d) {
    k_of_offset.push_back(kernel_value(static_cast<double>(d) * dx, h));
  }
  const std::size_t reach = k_of_offset.size();

  // Row sums first, then a fixed-order reduction.
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const std::size_t lo = i + 1 >= reach ? i + 1 - reach : 0;
    const std::size_t hi = std::min(n - 1, i + reach - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double diff = rho[i] - rho[j];
      if (diff == 0.0) continue;
      const std::size_t d = i > j ? i - j : j - i;
      const double w = weight ? 0.5 * ((*weight)[i] + (*weight)[j]) : 1.0;
      acc += k_of_offset[d] * diff * diff * w;
    }
    row[i] = acc;
  }
  double total = 0.0;
  for (double r : row) total += r;
  return total * dx * dx / kernel_l1_norm(h);
}

/// Window-mean supremum: max over radii r = k dx (k = 0..N/2) of the mean of
/// f over the cells with centers in [x_i - r, x_i + r], clipped to the domain.
inline std::vector<double> maximal_operator(std::span<const double> f) {
  const std::size_t n = f.size();
  for (double v : f) {
    if (!(v >= 0.0)) throw DomainError("maximal operator needs a nonnegative field");
  }
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + f[i];
  const std::size_t kmax = n / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = f[i];
    for (std::size_t k = 1; k <= kmax; ++k) {
      const std::size_t lo = i >= k ? i - k : 0;
      const std::size_t hi = std::min(n - 1, i + k);
      const double mean = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
      best = std::max(best, mean);
    }
    out[i] = best;
  }
  return out;
}

/// |du/dx| per cell from face velocities.
inline std::vector<double> velocity_gradient_magnitude(std::span<const double> u, double dx) {
  std::vector<double> g(u.size() - 1);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) g[i] = std::abs(u[i + 1] - u[i]) / dx;
  return g;
}

/// Transported damping weight, initially 1.
struct WeightField {
  std::vector<double> w;
  double lambda = 1.0;
  std::vector<double> B;  ///< last M|du/dx| used

  WeightField() = default;
  WeightField(std::size_t n, double lam) : w(n, 1.0), lambda(lam), B(n, 0.0) {}
};

/// Advance the weight with the current B: upwind advection by the cell
/// velocity, explicit eps diffusion with zero-Neumann walls, and implicit
/// decay w / (1 + lambda B dt). The explicit part is a convex combination
/// (substepping when needed), so [0,1] is preserved without clamping.
inline WeightField evolve_weight_with_rate(WeightField wf, std::span<const double> u,
                                           const Grid1D& grid, double eps, double dt) {
  const std::size_t n = wf.w.size();
  if (n != grid.n_cells() || u.size() != grid.n_faces() || wf.B.size() != n) {
    throw ShapeError("weight, velocity and grid disagree");
  }
  const double dx = grid.dx();
  std::vector<double> ubar(n);
  double umax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ubar[i] = 0.5 * (u[i] + u[i + 1]);
    umax = std::max(umax, std::abs(ubar[i]));
  }
  const double courant = umax * dt / dx + 2.0 * eps * dt / (dx * dx);
  const std::size_t substeps = courant > 1.0 ? static_cast<std::size_t>(std::ceil(courant)) : 1;
  const double h = dt / static_cast<double>(substeps);
  const double a = h / dx;
  const double d = eps * h / (dx * dx);

  std::vector<double> next(n);
  for (std::size_t s = 0; s < substeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double wl = wf.w[i == 0 ? 0 : i - 1];
      const double wr = wf.w[i + 1 == n ? n - 1 : i + 1];
      const double wc = wf.w[i];
      const double up = ubar[i] >= 0.0 ? ubar[i] * (wc - wl) : ubar[i] * (wr - wc);
      const double moved = wc - a * up + d * (wl - 2.0 * wc + wr);
      next[i] = moved / (1.0 + wf.lambda * wf.B[i] * h);
    }
    wf.w.swap(next);
  }
  return wf;
}

/// Weight update along a velocity field with B = M|du/dx|.
inline WeightField evolve_weight(WeightField wf, std::span<const double> u, const Grid1D& grid,
                                 const ModelParams& params, double dt) {
  wf.B = maximal_operator(velocity_gradient_magnitude(u, grid.dx()));
  return evolve_weight_with_rate(std::move(wf), u, grid, params.eps, dt);
}

struct WeightMass {
  double value = 0.0;
  bool saturated = false;  ///< some cell had w = 0 and was capped
};

inline constexpr double kLogWeightCap = 700.0;

/// sum dx rho_i |ln w_i|, with |ln w| capped at 700.
inline WeightMass weight_mass_check(std::span<const double> rho, std::span<const double> w,
                                    double dx) {
  if (rho.size() != w.size()) throw ShapeError("density and weight sizes differ");
  WeightMass out;
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (w[i] < 0.0 || w[i] > 1.0) throw DomainError("weight outside [0,1]");
    double lw = w[i] > 0.0 ? -std::log(w[i]) : kLogWeightCap;
    if (lw > kLogWeightCap) lw = kLogWeightCap;
    if (lw == kLogWeightCap) out.saturated = true;
    acc += rho[i] * lw;
  }
  out.value = acc * dx;
  return out;
}

struct KernelSpec {
  std::vector<double> h_list{0.2, 0.1, 0.05, 0.025, 0.0125};
  double required_decay = 3.0;  ///< sup(h_max) / sup(h_min) needed to pass

  double h0() const { return h_list.empty() ? 1.0 : h_list.back(); }
};

inline void validate(const KernelSpec& spec) {
  if (spec.h_list.size() < 2) throw DomainError("kernel spec needs at least two scales");
  for (std::size_t k = 0; k < spec.h_list.size(); ++k) {
    const double h = spec.h_list[k];
    if (!(h > 0.0 && h <= 1.0)) throw DomainError("kernel scales must lie in (0,1]");
    if (k > 0 && !(h < spec.h_list[k - 1])) throw DomainError("h_list must be strictly descending");
  }
  if (!(spec.required_decay > 0.0)) throw DomainError("required_decay must be positive");
}

struct CompactnessReport {
  std::vector<double> h;
  std::vector<double> sup_value;             ///< sup over the family, per h
  std::vector<std::vector<double>> values;   ///< [member][h]
  double slope = 0.0;         ///< least-squares d log(sup) / d log(h)
  double decay_factor = 0.0;  ///< sup at largest h over sup at smallest h
  double required_decay = 0.0;
  bool pass = false;
};

/// Sup over the family of the unweighted oscillation functional per scale,
/// and whether it decays by the required factor from the largest to the
/// smallest scale.
inline CompactnessReport criterion_sweep(std::span<const FluidState> family,
                                         const KernelSpec& spec) {
  validate(spec);
  if (family.size() < 2) throw DomainError("compactness criterion needs at least two fields");
  const Grid1D& grid = family.front().grid;
  for (const FluidState& s : family) {
    if (!(s.grid == grid) || s.rho.size() != grid.n_cells()) {
      throw ShapeError("family members do not share a grid");
    }
  }
  CompactnessReport rep;
  rep.h = spec.h_list;
  rep.required_decay = spec.required_decay;
  rep.sup_value.assign(spec.h_list.size(), 0.0);
  for (const FluidState& s : family) {
    std::vector<double> row;
    for (std::size_t k = 0; k < spec.h_list.size(); ++k) {
      const double v = oscillation_functional(s.rho, grid, spec.h_list[k]);
      row.push_back(v);
      rep.sup_value[k] = std::max(rep.sup_value[k], v);
    }
    rep.values.push_back(std::move(row));
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < rep.h.size(); ++k) {
    if (!(rep.sup_value[k] > 0.0)) continue;
    const double x = std::log(rep.h[k]);
    const double y = std::log(rep.sup_value[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double mm = static_cast<double>(m);
    rep.slope = (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
  }
  const double first = rep.sup_value.front();
  const double last = rep.sup_value.back();
  if (last > 0.0) {
    rep.decay_factor = first / last;
  } else {
    rep.decay_factor = first > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  rep.pass = rep.decay_factor >= spec.required_decay;
  return rep;
}

}  // namespace nsgrowth
