#include "spectral_flrw/eom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "spectral_flrw/action.hpp"
#include "spectral_flrw/cosphere.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/integrator.hpp"

namespace sflrw {

ClassicalResiduals classical_residuals(const Jet2& a, double lambda) {
  if (!(a.value > 0.0)) throw DomainError("classical residuals need a > 0");
  const double x = a.value;
  return {6.0 * x * a.d1 * a.d1 - lambda * x * x * x,
          12.0 * a.d2 * x + 6.0 * a.d1 * a.d1 - 3.0 * lambda * x * x};
}

double interaction_force_1(double a1, double a2) {
  const double s = a1 + a2;
  return (a1 - a2) *
         (2.0 * a2 * a2 * a2 + 2.0 * a2 * a2 * a1 + 5.0 * a1 * a1 * a2 + 3.0 * a1 * a1 * a1) /
         (s * s);
}

double interaction_force_2(double a1, double a2) {
  const double s = a1 + a2;
  return (a2 - a1) *
         (3.0 * a2 * a2 * a2 + 5.0 * a2 * a2 * a1 + 2.0 * a1 * a1 * a2 + 2.0 * a1 * a1 * a1) /
         (s * s);
}

double constraint_residual(const PhaseState& s, const CosmoParams& params) {
  if (!(s.a1 + s.a2 > 0.0)) throw DomainError("bimetric residuals need a1 + a2 > 0");
  return 6.0 * (s.a1 * s.v1 * s.v1 + s.a2 * s.v2 * s.v2) -
         params.lambda_eff * (s.a1 * s.a1 * s.a1 + s.a2 * s.a2 * s.a2) -
         params.alpha * potential_W(s.a1, s.a2);
}

BimetricResiduals bimetric_residuals(const PhaseState& s, const Accelerations& acc,
                                     const CosmoParams& params) {
  const double lam = params.lambda_eff;
  BimetricResiduals r;
  r.r0 = constraint_residual(s, params);
  r.r1 = 12.0 * acc.a1 * s.a1 + 6.0 * s.v1 * s.v1 - 3.0 * lam * s.a1 * s.a1 -
         params.alpha * interaction_force_1(s.a1, s.a2);
  r.r2 = 12.0 * acc.a2 * s.a2 + 6.0 * s.v2 * s.v2 - 3.0 * lam * s.a2 * s.a2 -
         params.alpha * interaction_force_2(s.a1, s.a2);
  return r;
}

Accelerations accelerations(const PhaseState& s, const CosmoParams& params, double collapse_eps) {
  if (!(s.a1 > collapse_eps) || !(s.a2 > collapse_eps)) {
    throw CollapseError(fmt::format("scale factor collapse at t = {}: a1 = {}, a2 = {}", s.t,
                                    s.a1, s.a2));
  }
  const double lam = params.lambda_eff;
  const double alpha = params.alpha;
  return {(3.0 * lam * s.a1 * s.a1 + alpha * interaction_force_1(s.a1, s.a2) - 6.0 * s.v1 * s.v1) /
              (12.0 * s.a1),
          (3.0 * lam * s.a2 * s.a2 + alpha * interaction_force_2(s.a1, s.a2) - 6.0 * s.v2 * s.v2) /
              (12.0 * s.a2)};
}

namespace {

constexpr int kGaussNodes = 12;

struct GaussRule {
  std::vector<double> x, w;
  GaussRule() { gauss_legendre(kGaussNodes, x, w); }
};

const GaussRule& gauss() {
  static const GaussRule rule;
  return rule;
}

// Action restricted to [t - w, t + w] with a_sheet perturbed by
// delta * hat((s - t) / w).
double local_action(const TrialPair& trial, const CosmoParams& params, int sheet, double t,
                    double w, double delta) {
  const GaussRule& g = gauss();
  double sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double lo = side == 0 ? t - w : t;
    const double hi = side == 0 ? t : t + w;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double s = mid + half * g.x[k];
      const double bump = 1.0 - std::abs(s - t) / w;
      const double bump_d = (s < t ? 1.0 : -1.0) / w;
      Jet2 a1 = trial.a1(s);
      Jet2 a2 = trial.a2(s);
      Jet2& target = sheet == 1 ? a1 : a2;
      target.value += delta * bump;
      target.d1 += delta * bump_d;
      sum += half * g.w[k] * lagrangian_density({a1, a2}, params);
    }
  }
  return sum;
}

// (1/w) d/d(delta) of the local action, by a fourth-order central stencil.
double bump_average(const TrialPair& trial, const CosmoParams& params, int sheet, double t,
                    double w, double delta) {
  const auto S = [&](double d) { return local_action(trial, params, sheet, t, w, d); };
  const double dS = (-S(2.0 * delta) + 8.0 * S(delta) - 8.0 * S(-delta) + S(-2.0 * delta)) /
                    (12.0 * delta);
  return dS / w;
}

double residual_scale(const PhaseState& s, const Accelerations& acc, const CosmoParams& p,
                      int sheet) {
  const double a = sheet == 1 ? s.a1 : s.a2;
  const double v = sheet == 1 ? s.v1 : s.v2;
  const double ad = sheet == 1 ? acc.a1 : acc.a2;
  const double force =
      sheet == 1 ? interaction_force_1(s.a1, s.a2) : interaction_force_2(s.a1, s.a2);
  return std::max({std::abs(12.0 * ad * a), 6.0 * v * v, std::abs(3.0 * p.lambda_eff * a * a),
                   std::abs(p.alpha * force)});
}

}  // namespace

double functional_derivative(const TrialPair& trial, const CosmoParams& params, int sheet,
                             double t, const ElOptions& options) {
  if (sheet != 1 && sheet != 2) throw std::invalid_argument("sheet must be 1 or 2");
  const double h = options.step;
  if (!(h > 1e-8 * std::max(1.0, std::abs(t)))) {
    throw std::invalid_argument(fmt::format("variational step {} underflows at t = {}", h, t));
  }
  const double a = sheet == 1 ? trial.a1(t).value : trial.a2(t).value;
  const double delta = options.eta * std::max(1.0, std::abs(a));
  const double w = 5.0 * h;
  const double coarse = bump_average(trial, params, sheet, t, w, delta);
  const double fine = bump_average(trial, params, sheet, t, 0.5 * w, delta);
  return (4.0 * fine - coarse) / 3.0;
}

ElReport el_consistency(const CosmoParams& params, const TrialPair& trial, double t,
                        const ElOptions& options) {
  // Normalization from the decoupled classical limit on a fixed off-shell trial.
  const auto calib = [](double s) {
    return Jet2{1.5 + 0.2 * std::sin(s) + 0.1 * s, 0.2 * std::cos(s) + 0.1, -0.2 * std::sin(s)};
  };
  const TrialPair calib_pair{calib, calib};
  CosmoParams decoupled = params;
  decoupled.alpha = 0.0;
  const double classical = classical_residuals(calib(t), params.lambda_eff).evolution;
  const double classical_var = functional_derivative(calib_pair, decoupled, 1, t, options);

  ElReport rep;
  rep.normalization = classical / classical_var;

  const Jet2 a1 = trial.a1(t);
  const Jet2 a2 = trial.a2(t);
  const PhaseState s{t, a1.value, a1.d1, a2.value, a2.d1};
  const Accelerations acc{a1.d2, a2.d2};
  const BimetricResiduals r = bimetric_residuals(s, acc, params);
  rep.r1 = r.r1;
  rep.r2 = r.r2;
  rep.variation_1 = functional_derivative(trial, params, 1, t, options);
  rep.variation_2 = functional_derivative(trial, params, 2, t, options);

  const double dev1 = std::abs(rep.normalization * rep.variation_1 - r.r1) /
                      std::max(std::abs(r.r1), residual_scale(s, acc, params, 1));
  const double dev2 = std::abs(rep.normalization * rep.variation_2 - r.r2) /
                      std::max(std::abs(r.r2), residual_scale(s, acc, params, 2));
  rep.max_rel_dev = std::max(dev1, dev2);
  return rep;
}

double constraint_consistency(const Trajectory& traj, const CosmoParams& params) {
  double drift = 0.0;
  for (const auto& sample : traj.samples) {
    const PhaseState& s = sample.state;
    const double norm =
        std::abs(params.lambda_eff) * (s.a1 * s.a1 * s.a1 + s.a2 * s.a2 * s.a2) + 1.0;
    drift = std::max(drift, std::abs(constraint_residual(s, params)) / norm);
  }
  return drift;
}

}  // namespace sflrw
