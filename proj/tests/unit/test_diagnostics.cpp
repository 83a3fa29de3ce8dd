#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nsgrowth/bound_checks.hpp"
#include "nsgrowth/diagnostics.hpp"
#include "nsgrowth/ns_solver.hpp"

using namespace nsgrowth;

namespace {

FluidState filled(std::size_t n, double rho, double length = 1.0) {
  FluidState s(Grid1D(length, n));
  std::fill(s.rho.begin(), s.rho.end(), rho);
  return s;
}

}  // namespace

TEST(Energy, VacuumIsZero) {
  ModelParams p;
  EXPECT_EQ(energy(filled(10, 0.0), p), 0.0);
}

TEST(Energy, UniformAtRest) {
  ModelParams p;
  p.gamma = 2.0;
  EXPECT_NEAR(energy(filled(10, 1.0), p), 1.0, 1e-15);
}

TEST(Energy, KineticPlusInternal) {
  // functional evaluation only, so the wall faces may carry u = 2 as well
  ModelParams p;
  p.gamma = 3.0;
  FluidState s = filled(10, 1.0);
  std::fill(s.u.begin(), s.u.end(), 2.0);
  EXPECT_NEAR(energy(s, p), 2.5, 1e-14);
}

TEST(Energy, RejectsGammaOne) {
  ModelParams p;
  p.gamma = 1.0;
  EXPECT_THROW(energy(filled(4, 1.0), p), DomainError);
}

TEST(Dissipation, RestIsZero) { EXPECT_EQ(dissipation(filled(8, 1.0), ModelParams{}), 0.0); }

TEST(Dissipation, LinearVelocity) {
  // u = x sampled at faces (walls excluded from the Dirichlet rule for this
  // functional check); (mu + xi) int 1 = 1.5
  FluidState s = filled(20, 1.0);
  for (std::size_t f = 0; f <= 20; ++f) s.u[f] = s.grid.face(f);
  ModelParams p;
  p.mu = 1.0;
  p.xi = 0.5;
  EXPECT_NEAR(dissipation(s, p), 1.5, 1e-13);
  for (double& v : s.u) v *= 2.0;
  EXPECT_NEAR(dissipation(s, p), 6.0, 1e-12);
}

TEST(Norms, LqAndExcess) {
  FluidState s = filled(10, 1.5);
  EXPECT_NEAR(lq_norm(s, 2.0), 1.5, 1e-15);
  EXPECT_NEAR(excess_norm(s, 2.0), 0.5, 1e-15);
  EXPECT_EQ(excess_norm(filled(10, 0.99), 2.0), 0.0);
}

TEST(Norms, ExcessOnSineProfileMatchesDirectSum) {
  FluidState s(Grid1D(1.0, 100));
  double acc = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const double v = std::max(0.0, std::sin(2.0 * M_PI * s.grid.center(i)));
    s.rho[i] = 1.0 + 0.1 * v;
    acc += 0.01 * v * v * 0.01;
  }
  EXPECT_NEAR(excess_norm(s, 2.0), std::sqrt(acc), 1e-15);
  // continuum value 0.1 * sqrt(1/4)
  EXPECT_NEAR(excess_norm(s, 2.0), 0.05, 1e-4);
}

TEST(Complementarity, Examples) {
  ModelParams p;
  p.gamma = 2.0;
  EXPECT_EQ(complementarity_integrand(filled(8, 1.0), p), 0.0);
  EXPECT_EQ(complementarity_integrand(filled(8, 0.0), p), 0.0);
  EXPECT_NEAR(complementarity_integrand(filled(8, 0.5), p), 0.125, 1e-15);
}

TEST(Consistency, ExactRelationGivesZero) {
  // rho = 1 so p = 1 and G = g0 (pm - 1); u linear with that slope
  ModelParams p;
  FluidState s = filled(10, 1.0);
  const double slope = growth_rate(1.0, p);
  for (std::size_t f = 0; f <= 10; ++f) s.u[f] = slope * s.grid.face(f);
  const auto r = consistency_residual(s, p);
  EXPECT_EQ(r.cells, 10u);
  EXPECT_NEAR(r.rms, 0.0, 1e-12);
}

TEST(Consistency, EmptySaturatedSet) {
  const auto r = consistency_residual(filled(10, 0.5), ModelParams{});
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.rms, 0.0);
}

TEST(Consistency, ManufacturedState) {
  // rho = 1 on the left half, 0.5 on the right; u = x; only left cells count
  ModelParams p;
  p.g0 = 1.0;
  p.pm = 2.0;
  FluidState s = filled(10, 1.0);
  for (std::size_t i = 5; i < 10; ++i) s.rho[i] = 0.5;
  for (std::size_t f = 0; f <= 10; ++f) s.u[f] = s.grid.face(f);
  const auto r = consistency_residual(s, p);
  EXPECT_EQ(r.cells, 5u);
  // du/dx = 1, G(1) = 1 -> residual 0 ; change pm to 3 -> G = 2, residual -1
  EXPECT_NEAR(r.rms, 0.0, 1e-12);
  p.pm = 3.0;
  EXPECT_NEAR(consistency_residual(s, p).rms, 1.0, 1e-12);
}

TEST(EpsTerms, ZeroCases) {
  ModelParams p;
  FluidState s(Grid1D(1.0, 10));
  for (std::size_t i = 0; i < 10; ++i) s.rho[i] = 0.1 * i;
  EXPECT_EQ(eps_integrands(s, p), std::make_pair(0.0, 0.0));
  p.eps = 0.1;
  EXPECT_EQ(eps_integrands(filled(10, 0.4), p), std::make_pair(0.0, 0.0));
}

TEST(EpsTerms, LinearProfile) {
  // rho = x at centers, slope 1; centered gradient is 1 inside and 1/2 at the
  // two Neumann end cells
  ModelParams p;
  p.eps = 0.1;
  p.gamma = 2.0;
  FluidState s(Grid1D(1.0, 10));
  for (std::size_t i = 0; i < 10; ++i) s.rho[i] = s.grid.center(i);
  const double grad_sq = 0.1 * (8.0 * 1.0 + 2.0 * 0.25);
  const auto [a, b] = eps_integrands(s, p);
  EXPECT_NEAR(a, 0.1 * grad_sq, 1e-15);
  // gamma = 2 makes the density weight rho^0 = 1
  EXPECT_NEAR(b, 0.1 * 2.0 * grad_sq, 1e-15);
}

TEST(Record, TrapezoidAccumulation) {
  ModelParams p;
  p.gamma = 2.0;
  FluidState a = filled(4, 1.0);
  FluidState b = filled(4, 2.0);
  b.t = 0.5;
  const DiagnosticsRecord r0 = make_record(a, p, nullptr);
  const DiagnosticsRecord r1 = make_record(b, p, &r0);
  // int p^2: trapezoid of 1 and 16 over 0.5
  EXPECT_NEAR(r1.pressure_l2_cum, 0.25 * (1.0 + 16.0), 1e-14);
  EXPECT_NEAR(r1.complementarity_cum, 0.25 * (0.0 + 4.0 * -1.0), 1e-14);
  ASSERT_TRUE(r1.energy.has_value());
  p.gamma = 1.0;
  EXPECT_FALSE(make_record(a, p, nullptr).energy.has_value());
}

TEST(BoundChecks, VacuumPasses) {
  FluidState s(Grid1D(1.0, 16));
  SolverConfig c;
  c.t_end = 0.05;
  ModelParams p;
  const Trajectory tr = run(s, p, c);
  const auto m = mass_bound_check(tr, p);
  const auto e = gronwall_energy_check(tr, p);
  EXPECT_TRUE(m.pass);
  EXPECT_TRUE(e.pass);
  EXPECT_GE(e.worst_margin, 0.0);
}

TEST(BoundChecks, UniformLogisticPassesAndEnergyMatchesClosedForm) {
  FluidState s = filled(16, 0.5);
  ModelParams p;
  p.gamma = 3.0;
  p.g0 = 1.0;
  p.pm = 1.0;
  SolverConfig c;
  c.t_end = 1.0;
  c.output_every = 0.1;
  const Trajectory tr = run(s, p, c);
  EXPECT_TRUE(mass_bound_check(tr, p).pass);
  EXPECT_TRUE(gronwall_energy_check(tr, p).pass);
  for (const auto& r : tr.records) {
    const double y0 = 0.125;
    const double y = y0 / (y0 + (1.0 - y0) * std::exp(-3.0 * r.t));
    EXPECT_NEAR(*r.energy, y / 2.0, 1e-9);
    EXPECT_EQ(r.dissipation, 0.0);
  }
}

TEST(BoundChecks, GronwallConstant) {
  ModelParams p;
  p.gamma = 2.0;
  p.g0 = 1.0;
  p.pm = 4.0;
  // 2 * 1 * 4^(1.5) * e^0 * 3
  EXPECT_NEAR(gronwall_constant(p, 3.0, 0.0), 48.0, 1e-12);
  p.gamma = 1.0;
  EXPECT_THROW(gronwall_constant(p, 1.0, 1.0), DomainError);
}

TEST(BoundChecks, ViolationIsReported) {
  Trajectory tr;
  tr.params = ModelParams{};
  DiagnosticsRecord a, b;
  a.mass = 1.0;
  b.t = 0.1;
  b.mass = 10.0;
  tr.records = {a, b};
  const auto r = mass_bound_check(tr, tr.params);
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.worst_margin, 0.0);
  EXPECT_DOUBLE_EQ(r.t_worst, 0.1);
}

TEST(RunIntegrals, PressureAndEps) {
  FluidState s(Grid1D(1.0, 40));
  for (std::size_t i = 0; i < 40; ++i) s.rho[i] = 0.4 + 0.2 * std::sin(0.2 * i);
  ModelParams p;
  p.gamma = 2.0;
  p.eps = 1e-3;
  SolverConfig c;
  c.t_end = 0.05;
  const Trajectory tr = run(s, p, c);
  EXPECT_NEAR(pressure_l2(tr), std::sqrt(tr.records.back().pressure_l2_cum), 0.0);
  const auto [g, w] = eps_terms(tr);
  EXPECT_GT(g, 0.0);
  EXPECT_GT(w, 0.0);
  EXPECT_LT(complementarity_residual(tr), 0.05);
}
