#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectral_flrw/bessel.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/integrator.hpp"
#include "spectral_flrw/perturbation.hpp"

using namespace sflrw;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

oracle::Jet to_oracle(const Jet2& j) { return {j.value, j.d1, j.d2}; }

}  // namespace

TEST(Bessel, MatchesBoost) {
  for (double nu : {0.0, 0.25, 0.5, std::sqrt(5.0) / 4.0, 1.0, 2.5, 4.9}) {
    for (double x : {0.01, 0.3, 1.0, 4.7, 12.0, 24.9, 25.1, 40.0, 150.0}) {
      const double ref = oracle::bessel_j(nu, x);
      EXPECT_NEAR(bessel_j(nu, x), ref, 1e-12 * std::max(1e-3, std::abs(ref))) << nu << " " << x;
    }
  }
}

TEST(Bessel, MatchesHighPrecisionSeries) {
  for (double nu : {0.3, std::sqrt(5.0) / 4.0, 3.0}) {
    for (double x : {0.05, 1.0, 6.0, 15.0}) {
      EXPECT_LT(rel(bessel_j(nu, x), oracle::bessel_j_series(nu, x)), 1e-12) << nu << " " << x;
    }
  }
}

TEST(Bessel, NegativeOrder) {
  for (double nu : {0.25, std::sqrt(5.0) / 4.0, 1.5, 3.7}) {
    for (double x : {0.2, 2.0, 9.0, 30.0}) {
      const double ref = oracle::bessel_j(-nu, x);
      EXPECT_NEAR(bessel_j_negative(nu, x), ref, 1e-11 * std::max(1.0, std::abs(ref))) << nu << " " << x;
    }
  }
  EXPECT_THROW((void)bessel_j_negative(2.0, 1.0), DomainError);
}

TEST(Bessel, HalfOrderClosedForm) {
  for (double x : {0.1, 1.0, 3.0, 10.0, 30.0}) {
    EXPECT_NEAR(bessel_j(0.5, x), oracle::bessel_half(x), 1e-12 * std::max(1e-2, std::abs(oracle::bessel_half(x))));
  }
}

TEST(Bessel, JetSatisfiesBesselEquation) {
  const double mu = -std::sqrt(5.0) / 4.0;
  for (double x : {0.5, 3.0, 26.0}) {
    const BesselJet j = bessel_j_jet(mu, x);
    const double lhs = x * x * j.d2 + x * j.d1 + (x * x - mu * mu) * j.value;
    EXPECT_NEAR(lhs, 0.0, 1e-12 * x * x);
    const double h = 1e-5;
    EXPECT_NEAR(j.d1, (oracle::bessel_j(mu, x + h) - oracle::bessel_j(mu, x - h)) / (2 * h), 1e-8);
  }
}

TEST(Bessel, DomainErrors) {
  EXPECT_THROW((void)bessel_j(6.0, 1.0), DomainError);
  EXPECT_THROW((void)bessel_j(1.0, 0.0), DomainError);
  EXPECT_THROW((void)bessel_j(-0.5, 1.0), DomainError);
}

TEST(Perturbation, ModelConsistency) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  EXPECT_NO_THROW((void)PerturbationModel::make(ModelKind::empty, p));
  EXPECT_THROW(PerturbationModel(ModelKind::empty, Profile::exponential(1.0, 2.0), p), ValidationError);
  EXPECT_THROW(PerturbationModel(ModelKind::matter, Profile::power_law(1.0, 0.5), p), ValidationError);
  EXPECT_THROW((void)PerturbationModel::make(ModelKind::empty, CosmoParams::effective(-1.0, 0.0)), ValidationError);
  EXPECT_EQ(model_kind_from_string("radiation"), ModelKind::radiation);
  EXPECT_THROW((void)model_kind_from_string("dust"), std::invalid_argument);
}

TEST(Perturbation, LinearizedResidualMatchesDualNumberOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const Jet2 a{1.0 + std::abs(u(rng)), u(rng), u(rng)};
    const Jet2 r{u(rng), u(rng), u(rng)};
    const CosmoParams p = CosmoParams::effective(3 * u(rng), 3 * u(rng));
    const oracle::Linearized o = oracle::linearized(to_oracle(a), to_oracle(r), p.lambda_eff, p.alpha);
    EXPECT_NEAR(linearized_residual(a, r, p), o.value, 1e-12 * o.scale);
  }
}

TEST(Perturbation, EmptyExponents) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lam(0.0, 10.0), al(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const double l = lam(rng), a = al(rng);
    const ExponentPair e = empty_exponents(l, a);
    const auto [p, m] = oracle::empty_exponents(l, a);
    EXPECT_LT(std::abs(e.plus - p), 1e-12 * std::max(1.0, std::abs(p)));
    EXPECT_LT(std::abs(e.minus - m), 1e-12 * std::max(1.0, std::abs(m)));
    EXPECT_EQ(e.real(), 6 * l + 8 * a >= 0);
  }
  EXPECT_THROW((void)empty_exponents(-1.0, 0.0), DomainError);
}

TEST(Perturbation, ClosedFormsSolveTheLinearizedEquation) {
  struct Case {
    ModelKind kind;
    CosmoParams params;
    double c1, c2;
  };
  const Case cases[] = {
      {ModelKind::empty, CosmoParams::effective(6.0, 1.0), 1.0, 0.4},
      {ModelKind::empty, CosmoParams::effective(2.0, -1.5), 0.7, -0.2},  // complex pair
      {ModelKind::empty, CosmoParams::effective(6.0, -4.5), 1.0, 1.0},   // double root
      {ModelKind::radiation, CosmoParams::effective(-1.0, -1.5), 0.2, 1.0},
      {ModelKind::matter, CosmoParams::effective(-1.0, -1.0), 1.0, 0.3},
  };
  for (const Case& c : cases) {
    const PerturbationModel m = PerturbationModel::make(c.kind, c.params, 1.3);
    double worst = 0.0;
    for (double t = 0.5; t <= 20.0; t += 0.25) {
      const Jet2 r = closed_form_solution(m, t, c.c1, c.c2);
      const Jet2 a = jet_eval(m.background(), t);
      const oracle::Linearized o = oracle::linearized(to_oracle(a), to_oracle(r), c.params.lambda_eff, c.params.alpha);
      worst = std::max(worst, std::abs(o.value) / o.scale);
    }
    EXPECT_LT(worst, 1e-10) << to_string(c.kind);
  }
}

TEST(Perturbation, ReductionPrefactors) {
  const CosmoParams p = CosmoParams::effective(-1.0, -1.5);
  for (ModelKind kind : {ModelKind::radiation, ModelKind::matter}) {
    const PerturbationModel m = PerturbationModel::make(kind, p, 1.7);
    for (double t : {0.5, 2.0, 9.0}) {
      const Jet2 r{0.3, -0.2, 0.7};
      const Jet2 a = jet_eval(m.background(), t);
      const double lhs = linearized_residual(a, r, p);
      const double rhs = reduction_prefactor(m, t) * reduce_model(m, t, r);
      EXPECT_NEAR(lhs, rhs, 1e-12 * linearized_scale(a, r, p));
    }
  }
  EXPECT_NEAR(reduction_prefactor(PerturbationModel::make(ModelKind::radiation, p, 2.0), 4.0), 6.0 / 8.0, 1e-15);
  EXPECT_NEAR(reduction_prefactor(PerturbationModel::make(ModelKind::matter, p, 3.0), 8.0), 2.0 / 16.0, 1e-15);
}

TEST(Perturbation, RadiationArgumentScan) {
  const ArgumentScan s = scan_radiation_argument(CosmoParams::effective(-2.0, 0.5));
  EXPECT_NEAR(s.b_reduced, 0.5 * std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(s.b_printed, std::sqrt(3.0), 1e-15);
  EXPECT_TRUE(s.reduced_passes());
  EXPECT_FALSE(s.printed_passes());
  EXPECT_THROW((void)oscillation_rate(CosmoParams::effective(1.0, 0.0)), DomainError);
}

TEST(Perturbation, RadiationWronskian) {
  const CosmoParams p = CosmoParams::effective(-1.0, -1.0);
  const PerturbationModel m = PerturbationModel::make(ModelKind::radiation, p);
  const double nu = std::sqrt(5.0) / 4.0;
  for (double t : {0.5, 1.0, 4.0}) {
    EXPECT_NEAR(radiation_wronskian(m, t), -2.0 * std::sin(nu * M_PI) / (M_PI * std::sqrt(t)), 1e-12);
  }
  EXPECT_NEAR(radiation_order(), nu, 1e-16);
}

TEST(Perturbation, NumericalSolutionTracksClosedForm) {
  const CosmoParams p = CosmoParams::effective(-1.0, -1.0);
  const PerturbationModel m = PerturbationModel::make(ModelKind::matter, p);
  const Jet2 r0 = closed_form_solution(m, 0.5, 1.0, 0.0);
  const LinearSolution s = solve_linear(m, 0.5, 10.0, 1e-3, r0.value, r0.d1);
  ASSERT_FALSE(s.t.empty());
  EXPECT_DOUBLE_EQ(s.t.back(), 10.0);
  for (std::size_t i = 0; i < s.t.size(); i += 500) {
    EXPECT_NEAR(s.r[i], closed_form_solution(m, s.t[i], 1.0, 0.0).value, 1e-10);
  }
}

TEST(Perturbation, SplitCompare) {
  const CosmoParams q = CosmoParams::effective(6.0, 1.0);
  const PerturbationModel em = PerturbationModel::make(ModelKind::empty, q);
  const double eps = 0.05;
  const Jet2 r0 = closed_form_solution(em, 0.0, 1.0, 0.0);
  const PhaseState ic{0.0, 1 + eps * r0.value, 1 + eps * r0.d1, 1 - eps * r0.value, 1 - eps * r0.d1};
  IntegratorConfig c;
  c.output_stride = 10;
  const Trajectory tr = integrate(ic, q, c);
  std::vector<double> ts, rs;
  for (const auto& s : tr.samples) {
    ts.push_back(s.state.t);
    rs.push_back(closed_form_solution(em, s.state.t, 1.0, 0.0).value);
  }
  EXPECT_LT(split_compare(em.background(), ts, rs, eps, tr), 0.01);
  rs.pop_back();
  EXPECT_THROW((void)split_compare(em.background(), ts, rs, eps, tr), std::invalid_argument);
}
