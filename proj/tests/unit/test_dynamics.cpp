#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectral_flrw/action.hpp"
#include "spectral_flrw/eom.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/integrator.hpp"

using namespace sflrw;

TEST(Eom, ClassicalDeSitterResidualsVanish) {
  const double lambda = 6.0;
  const Jet2 a{std::exp(0.4), std::exp(0.4), std::exp(0.4)};
  const ClassicalResiduals r = classical_residuals(a, lambda);
  EXPECT_NEAR(r.constraint, 0.0, 1e-12);
  EXPECT_NEAR(r.evolution, 0.0, 1e-12);
  EXPECT_THROW((void)classical_residuals(Jet2{0.0, 0.0, 0.0}, 1.0), DomainError);
}

TEST(Eom, InteractionForcesAreGradients) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 100; ++k) {
    const double a1 = u(rng), a2 = u(rng);
    const auto [g1, g2] = oracle::potential_gradient(a1, a2);
    EXPECT_NEAR(interaction_force_1(a1, a2), g1, 1e-9 * std::max(1.0, std::abs(g1)));
    EXPECT_NEAR(interaction_force_2(a1, a2), g2, 1e-9 * std::max(1.0, std::abs(g2)));
  }
}

TEST(Eom, AccelerationsZeroTheEvolutionResiduals) {
  const CosmoParams p = CosmoParams::effective(1.5, 0.7);
  const PhaseState s{0.0, 1.3, 0.2, 0.6, -0.4};
  const Accelerations acc = accelerations(s, p);
  const BimetricResiduals r = bimetric_residuals(s, acc, p);
  EXPECT_NEAR(r.r1, 0.0, 1e-13);
  EXPECT_NEAR(r.r2, 0.0, 1e-13);
  EXPECT_NEAR(r.r0, constraint_residual(s, p), 1e-14);
  EXPECT_THROW((void)accelerations(PhaseState{0.0, 1e-9, 0.0, 1.0, 0.0}, p), CollapseError);
}

TEST(Eom, VariationalConsistency) {
  const CosmoParams p = CosmoParams::effective(2.0, 1.3);
  const TrialPair trial{
      [](double s) { return Jet2{1.2 + 0.3 * std::sin(2 * s), 0.6 * std::cos(2 * s), -1.2 * std::sin(2 * s)}; },
      [](double s) { return Jet2{0.8 + 0.1 * s * s, 0.2 * s, 0.2}; }};
  const ElReport r = el_consistency(p, trial, 0.7);
  EXPECT_LT(r.max_rel_dev, 1e-5);
  EXPECT_NEAR(r.normalization, -1.0, 1e-5);
}

TEST(Integrator, ConfigValidation) {
  IntegratorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.step = -1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.t1 = c.t0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.output_stride = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(method_from_string("rk45"), Method::rk45);
  EXPECT_THROW((void)method_from_string("euler"), std::invalid_argument);
}

TEST(Integrator, ConstraintInitialConditions) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  const PhaseState s = solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p);
  EXPECT_NEAR(s.v1, 1.0, 1e-15);
  EXPECT_NEAR(solve_constraint_ic(1.0, 1.0, 1.0, Branch::minus, p).v1, -1.0, 1e-15);
  // 6 a1 v1^2 = Lambda (a1^3 + a2^3) + alpha W - 6 a2 v2^2 with a1 = 1, a2 = 2, v2 = 0.5
  const CosmoParams q = CosmoParams::effective(1.0, 0.0);
  EXPECT_NEAR(solve_constraint_ic(1.0, 2.0, 0.5, Branch::plus, q).v1, std::sqrt((9.0 - 3.0) / 6.0), 1e-15);
  const CosmoParams r = CosmoParams::effective(1.0, 1.0);
  const double w = static_cast<double>(oracle::potential_W(1.0, 2.0));
  EXPECT_NEAR(solve_constraint_ic(1.0, 2.0, 0.0, Branch::plus, r).v1, std::sqrt((9.0 + w) / 6.0), 1e-15);
  EXPECT_NEAR(w, 7.0 / 3.0, 1e-15);
  EXPECT_THROW((void)solve_constraint_ic(1.0, 1.0, 2.0, Branch::plus, CosmoParams::effective(0.0, 0.0)),
               DomainError);
  EXPECT_THROW((void)solve_constraint_ic(-1.0, 1.0, 0.0, Branch::plus, p), DomainError);
}

TEST(Integrator, DeSitterRk4) {
  const CosmoParams p = CosmoParams::effective(6.0, 2.5);
  const Trajectory tr = integrate(solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p), p, {});
  ASSERT_EQ(tr.termination, Termination::completed);
  EXPECT_EQ(tr.samples.size(), 1001u);
  for (const auto& s : tr.samples) {
    EXPECT_NEAR(s.state.a1 / std::exp(s.state.t), 1.0, 1e-8);
    EXPECT_NEAR(s.state.a1, s.state.a2, 1e-14);
  }
  EXPECT_LT(tr.max_constraint(), 1e-9);
  EXPECT_DOUBLE_EQ(tr.final_state().t, 1.0);
}

TEST(Integrator, DeSitterRk45) {
  const CosmoParams p = CosmoParams::effective(6.0, 0.0);
  IntegratorConfig c;
  c.method = Method::rk45;
  c.step = 0.1;
  const Trajectory tr = integrate(solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p), p, c);
  ASSERT_EQ(tr.termination, Termination::completed);
  EXPECT_EQ(tr.samples.size(), 11u);
  EXPECT_NEAR(tr.final_state().a1 / std::exp(1.0), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(tr.final_state().t, 1.0);
}

TEST(Integrator, StaticSolution) {
  const CosmoParams p = CosmoParams::effective(0.0, 3.0);
  const Trajectory tr = integrate(PhaseState{0.0, 1.0, 0.0, 1.0, 0.0}, p, {});
  EXPECT_EQ(tr.final_state().a1, 1.0);
  EXPECT_EQ(tr.final_state().v2, 0.0);
}

TEST(Integrator, TimeReversal) {
  const CosmoParams p = CosmoParams::effective(1.0, 0.5);
  const PhaseState ic = solve_constraint_ic(1.2, 0.9, 0.3, Branch::plus, p);
  IntegratorConfig c;
  c.t1 = 0.5;
  const PhaseState f = integrate(ic, p, c).final_state();
  const PhaseState back = integrate(PhaseState{0.0, f.a1, -f.v1, f.a2, -f.v2}, p, c).final_state();
  EXPECT_NEAR(back.a1, ic.a1, 1e-11);
  EXPECT_NEAR(back.a2, ic.a2, 1e-11);
  EXPECT_NEAR(back.v1, -ic.v1, 1e-11);
}

TEST(Integrator, DeterministicAndStrided) {
  const CosmoParams p = CosmoParams::effective(1.0, 0.5);
  const PhaseState ic = solve_constraint_ic(1.2, 0.9, 0.3, Branch::plus, p);
  IntegratorConfig c;
  c.output_stride = 10;
  const Trajectory a = integrate(ic, p, c);
  const Trajectory b = integrate(ic, p, c);
  ASSERT_EQ(a.samples.size(), 101u);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].state, b.samples[i].state);
  std::ostringstream out;
  write_csv(a, out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,a1,v1,a2,v2,constraint");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 102);
}

TEST(Integrator, Rk45AgreesWithRk4) {
  const CosmoParams p = CosmoParams::effective(1.0, 2.0);
  const PhaseState ic = solve_constraint_ic(1.3, 0.8, -0.2, Branch::plus, p);
  IntegratorConfig c;
  const PhaseState x = integrate(ic, p, c).final_state();
  c.method = Method::rk45;
  const PhaseState y = integrate(ic, p, c).final_state();
  EXPECT_NEAR(x.a1, y.a1, 1e-9);
  EXPECT_NEAR(x.a2, y.a2, 1e-9);
}

TEST(Integrator, CollapseEndsRun) {
  // contracting sheet with Lambda < 0 runs into a -> 0
  const CosmoParams p = CosmoParams::effective(-6.0, 0.0);
  IntegratorConfig c;
  c.t1 = 5.0;
  c.collapse_eps = 1e-3;
  const Trajectory tr = integrate(PhaseState{0.0, 1.0, -1.0, 1.0, -1.0}, p, c);
  EXPECT_EQ(tr.termination, Termination::collapse);
  EXPECT_LT(tr.final_state().t, 5.0);
  EXPECT_FALSE(tr.note.empty());
}

TEST(Integrator, StepBudget) {
  IntegratorConfig c;
  c.max_steps = 10;
  EXPECT_THROW((void)integrate(PhaseState{}, CosmoParams::effective(0.0, 0.0), c), IntegrationError);
}

TEST(Integrator, ConvergenceOrder) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  const PhaseState ic = solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p);
  const std::vector<double> steps{0.02, 0.01, 0.005};
  const OrderEstimate o = convergence_order(ic, p, {}, steps);
  EXPECT_TRUE(o.conclusive);
  EXPECT_NEAR(o.order, 4.0, 0.2);
  EXPECT_THROW((void)convergence_order(ic, p, {}, std::vector<double>{0.1, 0.05}), std::invalid_argument);
  EXPECT_THROW((void)convergence_order(ic, p, {}, std::vector<double>{0.1, 0.05, 0.01}), std::invalid_argument);
}

TEST(Integrator, ConvergenceInconclusiveAtRoundingFloor) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  const PhaseState ic = solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p);
  IntegratorConfig c;
  c.t1 = 1e-6;
  const std::vector<double> steps{1e-7, 5e-8, 2.5e-8};
  const OrderEstimate o = convergence_order(ic, p, c, steps);
  EXPECT_FALSE(o.conclusive);
  EXPECT_FALSE(o.note.empty());
}

TEST(Integrator, ActionAlongTrajectory) {
  // static Lambda = 0, alpha = 0 solution: L = 0
  const Trajectory tr = integrate(PhaseState{0.0, 1.0, 0.0, 1.0, 0.0}, CosmoParams::effective(0.0, 0.0), {});
  EXPECT_EQ(total_action(tr, tr.params), 0.0);
  // de Sitter with Lambda = 6: L = 24 e^{3t}
  const CosmoParams p = CosmoParams::effective(6.0, 0.0);
  const Trajectory ds = integrate(solve_constraint_ic(1.0, 1.0, 1.0, Branch::plus, p), p, {});
  EXPECT_NEAR(total_action(ds, p), 8.0 * (std::exp(3.0) - 1.0), 1e-8);
}
