#include "spectral_flrw/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spectral_flrw/bessel.hpp"
#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/integrator.hpp"
#include "spectral_flrw/ode.hpp"

namespace sflrw {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::empty: return "empty";
    case ModelKind::radiation: return "radiation";
    case ModelKind::matter: return "matter";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "empty") return ModelKind::empty;
  if (name == "radiation") return ModelKind::radiation;
  if (name == "matter") return ModelKind::matter;
  throw std::invalid_argument(
      fmt::format("unknown model '{}' (expected empty, radiation or matter)", name));
}

double radiation_order() { return std::sqrt(5.0) / 4.0; }

namespace {

void require_empty_lambda(double lambda) {
  if (lambda < 0.0) {
    throw DomainError(fmt::format(
        "empty model needs Lambda >= 0 (got {}); for Lambda < 0 the background is oscillatory "
        "and only the exponent pair is available",
        lambda));
  }
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw DomainError(fmt::format("power-law backgrounds need t > 0 (got {})", t));
}

}  // namespace

PerturbationModel::PerturbationModel(ModelKind kind, Profile background, CosmoParams params)
    : kind_(kind), background_(background), params_(params) {
  if (!std::isfinite(params.lambda_eff) || !std::isfinite(params.alpha)) {
    throw ValidationError("perturbation model needs finite lambda_eff and alpha");
  }
  if (!(background.coefficient() > 0.0)) {
    throw ValidationError(fmt::format("background coefficient a0 = {} must be > 0",
                                      background.coefficient()));
  }
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  switch (kind) {
    case ModelKind::empty: {
      if (params.lambda_eff < 0.0) {
        throw ValidationError(fmt::format("empty model needs Lambda >= 0 (got {})", params.lambda_eff));
      }
      const double h = std::sqrt(params.lambda_eff / 6.0);
      const bool ok = (background.kind() == Profile::Kind::exponential && near(background.rate(), h)) ||
                      (h == 0.0 && background.kind() == Profile::Kind::constant);
      if (!ok) {
        throw ValidationError(fmt::format(
            "empty model needs the background a0 exp(sqrt(Lambda/6) t) with rate {}", h));
      }
      break;
    }
    case ModelKind::radiation:
      if (background.kind() != Profile::Kind::power_law || !near(background.rate(), 0.5)) {
        throw ValidationError("radiation model needs the background a0 t^(1/2)");
      }
      break;
    case ModelKind::matter:
      if (background.kind() != Profile::Kind::power_law || !near(background.rate(), 2.0 / 3.0)) {
        throw ValidationError("matter model needs the background a0 t^(2/3)");
      }
      break;
  }
}

PerturbationModel PerturbationModel::make(ModelKind kind, const CosmoParams& params, double a0) {
  switch (kind) {
    case ModelKind::empty:
      if (params.lambda_eff < 0.0) {
        throw ValidationError(fmt::format("empty model needs Lambda >= 0 (got {})", params.lambda_eff));
      }
      return {kind, Profile::exponential(a0, std::sqrt(params.lambda_eff / 6.0)), params};
    case ModelKind::radiation: return {kind, Profile::power_law(a0, 0.5), params};
    case ModelKind::matter: return {kind, Profile::power_law(a0, 2.0 / 3.0), params};
  }
  throw std::invalid_argument("unknown model kind");
}

double linearized_residual(const Jet2& a, const Jet2& r, const CosmoParams& p) {
  if (!(a.value > 0.0)) throw DomainError("linearized residual needs a background a > 0");
  return 12.0 * a.d2 * r.value + 12.0 * r.d2 * a.value + 12.0 * a.d1 * r.d1 -
         6.0 * p.lambda_eff * a.value * r.value - 6.0 * p.alpha * a.value * r.value;
}

double linearized_scale(const Jet2& a, const Jet2& r, const CosmoParams& p) {
  return std::max({std::abs(12.0 * a.d2 * r.value), std::abs(12.0 * r.d2 * a.value),
                   std::abs(12.0 * a.d1 * r.d1), std::abs(6.0 * p.lambda_eff * a.value * r.value),
                   std::abs(6.0 * p.alpha * a.value * r.value)});
}

namespace {

// Coefficients (c2, c1, c0) of c2 r'' + c1 r' + c0 r for the model at t.
struct Coefficients {
  double c2, c1, c0;
};

Coefficients model_coefficients(const PerturbationModel& m, double t) {
  const double lam = m.params().lambda_eff;
  const double s = lam + m.params().alpha;
  switch (m.kind()) {
    case ModelKind::empty:
      require_empty_lambda(lam);
      return {6.0, std::sqrt(6.0 * lam), -(2.0 * lam + 3.0 * m.params().alpha)};
    case ModelKind::radiation:
      require_positive_t(t);
      return {4.0 * t * t, 2.0 * t, -(1.0 + 2.0 * s * t * t)};
    case ModelKind::matter:
      require_positive_t(t);
      return {18.0 * t * t, 12.0 * t, -(4.0 + 9.0 * s * t * t)};
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace

double reduce_model(const PerturbationModel& model, double t, const Jet2& r) {
  const Coefficients c = model_coefficients(model, t);
  return c.c2 * r.d2 + c.c1 * r.d1 + c.c0 * r.value;
}

double reduce_model_scale(const PerturbationModel& model, double t, const Jet2& r) {
  const double lam = model.params().lambda_eff;
  const double s = lam + model.params().alpha;
  const Coefficients c = model_coefficients(model, t);
  double worst = std::max(std::abs(c.c2 * r.d2), std::abs(c.c1 * r.d1));
  // the constant coefficient splits into separately printed terms
  switch (model.kind()) {
    case ModelKind::empty:
      worst = std::max({worst, std::abs(2.0 * lam * r.value), std::abs(3.0 * model.params().alpha * r.value)});
      break;
    case ModelKind::radiation:
      worst = std::max({worst, std::abs(r.value), std::abs(2.0 * s * t * t * r.value)});
      break;
    case ModelKind::matter:
      worst = std::max({worst, std::abs(4.0 * r.value), std::abs(9.0 * s * t * t * r.value)});
      break;
  }
  return worst;
}

double reduction_prefactor(const PerturbationModel& model, double t) {
  const double a0 = model.a0();
  switch (model.kind()) {
    case ModelKind::empty: return 2.0 * jet_eval(model.background(), t).value;
    case ModelKind::radiation: require_positive_t(t); return 3.0 * a0 / std::pow(t, 1.5);
    case ModelKind::matter: require_positive_t(t); return 2.0 * a0 / (3.0 * std::pow(t, 4.0 / 3.0));
  }
  throw std::invalid_argument("unknown model kind");
}

ExponentPair empty_exponents(double lambda, double alpha) {
  require_empty_lambda(lambda);
  if (!std::isfinite(alpha)) throw DomainError("empty_exponents needs finite alpha");
  const double centre = -std::sqrt(lambda / 24.0);
  const double disc = 6.0 * lambda + 8.0 * alpha;
  if (disc >= 0.0) {
    const double w = 0.25 * std::sqrt(disc);
    return {{centre + w, 0.0}, {centre - w, 0.0}};
  }
  const double w = 0.25 * std::sqrt(-disc);
  return {{centre, w}, {centre, -w}};
}

std::string to_string(BesselArgument a) {
  return a == BesselArgument::reduced ? "reduced" : "printed";
}

double oscillation_rate(const CosmoParams& params, BesselArgument arg) {
  const double s = params.lambda_eff + params.alpha;
  if (!(s < 0.0)) {
    throw DomainError(fmt::format("oscillating solutions need Lambda + alpha < 0 (got {})", s));
  }
  const double full = std::sqrt(-2.0 * s);
  return arg == BesselArgument::reduced ? 0.5 * full : full;
}

namespace {

Jet2 exp_jet(double mu, double t) {
  const double e = std::exp(mu * t);
  return {e, mu * e, mu * mu * e};
}

Jet2 empty_solution(const PerturbationModel& m, double t, double c1, double c2) {
  const ExponentPair mu = empty_exponents(m.params().lambda_eff, m.params().alpha);
  if (!mu.real()) {
    const double re = mu.plus.real();
    const double im = mu.plus.imag();
    const Jet2 e = exp_jet(re, t);
    const Jet2 osc{c1 * std::cos(im * t) + c2 * std::sin(im * t),
                   im * (-c1 * std::sin(im * t) + c2 * std::cos(im * t)),
                   -im * im * (c1 * std::cos(im * t) + c2 * std::sin(im * t))};
    return e * osc;
  }
  const double mp = mu.plus.real();
  const double mm = mu.minus.real();
  if (mp == mm) {
    return c1 * exp_jet(mp, t) + c2 * (Jet2{t, 1.0, 0.0} * exp_jet(mp, t));
  }
  return c1 * exp_jet(mp, t) + c2 * exp_jet(mm, t);
}

Jet2 power_jet(double p, double t) {
  const double v = std::pow(t, p);
  return {v, p * v / t, p * (p - 1.0) * v / (t * t)};
}

Jet2 bessel_scaled(double mu, double b, double t) {
  const BesselJet j = bessel_j_jet(mu, b * t);
  return {j.value, b * j.d1, b * b * j.d2};
}

Jet2 radiation_solution(const PerturbationModel& m, double t, double c1, double c2,
                        BesselArgument arg) {
  require_positive_t(t);
  const double b = oscillation_rate(m.params(), arg);
  const double nu = radiation_order();
  Jet2 sum{};
  if (c1 != 0.0) sum = sum + c1 * bessel_scaled(nu, b, t);
  if (c2 != 0.0) sum = sum + c2 * bessel_scaled(-nu, b, t);
  return power_jet(0.25, t) * sum;
}

Jet2 matter_solution(const PerturbationModel& m, double t, double c1, double c2) {
  require_positive_t(t);
  const double b = oscillation_rate(m.params());
  const double s = std::sin(b * t);
  const double c = std::cos(b * t);
  const Jet2 osc{c1 * s + c2 * c, b * (c1 * c - c2 * s), -b * b * (c1 * s + c2 * c)};
  return power_jet(-1.0 / 3.0, t) * osc;
}

}  // namespace

Jet2 closed_form_solution(const PerturbationModel& model, double t, double c1, double c2,
                          BesselArgument arg) {
  if (c1 == 0.0 && c2 == 0.0) {
    // still enforce the sign conditions
    if (model.kind() == ModelKind::empty) {
      require_empty_lambda(model.params().lambda_eff);
    } else {
      require_positive_t(t);
      (void)oscillation_rate(model.params(), arg);
    }
    return {};
  }
  switch (model.kind()) {
    case ModelKind::empty: return empty_solution(model, t, c1, c2);
    case ModelKind::radiation: return radiation_solution(model, t, c1, c2, arg);
    case ModelKind::matter: return matter_solution(model, t, c1, c2);
  }
  throw std::invalid_argument("unknown model kind");
}

double radiation_wronskian(const PerturbationModel& model, double t) {
  if (model.kind() != ModelKind::radiation) {
    throw std::invalid_argument("radiation_wronskian needs the radiation model");
  }
  const Jet2 r1 = closed_form_solution(model, t, 1.0, 0.0);
  const Jet2 r2 = closed_form_solution(model, t, 0.0, 1.0);
  return r1.value * r2.d1 - r1.d1 * r2.value;
}

ArgumentScan scan_radiation_argument(const CosmoParams& params, double t_lo, double t_hi,
                                     int samples, double tolerance) {
  if (samples < 2 || !(t_hi > t_lo) || !(t_lo > 0.0)) {
    throw std::invalid_argument("argument scan needs 0 < t_lo < t_hi and >= 2 samples");
  }
  const PerturbationModel model = PerturbationModel::make(ModelKind::radiation, params);
  ArgumentScan scan;
  scan.b_reduced = oscillation_rate(params, BesselArgument::reduced);
  scan.b_printed = oscillation_rate(params, BesselArgument::printed);
  scan.tolerance = tolerance;
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    for (const BesselArgument arg : {BesselArgument::reduced, BesselArgument::printed}) {
      const Jet2 r = closed_form_solution(model, t, 1.0, 0.0, arg);
      const double rel = std::abs(reduce_model(model, t, r)) / reduce_model_scale(model, t, r);
      double& slot = arg == BesselArgument::reduced ? scan.residual_reduced : scan.residual_printed;
      slot = std::max(slot, rel);
    }
  }
  return scan;
}

double split_compare(const Profile& background, std::span<const double> times,
                     std::span<const double> r, double eps, const Trajectory& traj) {
  const auto& s = traj.samples;
  if (times.size() != s.size() || r.size() != s.size()) {
    throw std::invalid_argument(fmt::format(
        "split_compare grid mismatch: {} trajectory samples, {} times, {} r values", s.size(),
        times.size(), r.size()));
  }
  if (s.empty()) throw std::invalid_argument("split_compare needs a non-empty trajectory");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(times[i] - s[i].state.t) > 1e-12 * std::max(1.0, std::abs(times[i]))) {
      throw std::invalid_argument(fmt::format(
          "split_compare grid mismatch at sample {}: t = {} vs {}", i, times[i], s[i].state.t));
    }
  }
  const double a_start = jet_eval(background, s.front().state.t).value;
  const double centre = 0.5 * (s.front().state.a1 + s.front().state.a2);
  if (std::abs(centre - a_start) > 1e-9 * std::max(1.0, std::abs(a_start))) {
    throw std::invalid_argument(fmt::format(
        "trajectory does not start centred on the background ((a1+a2)/2 = {}, a = {})", centre,
        a_start));
  }
  if (eps == 0.0) return 0.0;
  double r_max = 0.0;
  for (double v : r) r_max = std::max(r_max, std::abs(v));
  if (r_max == 0.0) throw std::invalid_argument("split_compare needs a nonzero r");
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double half_diff = 0.5 * (s[i].state.a1 - s[i].state.a2);
    worst = std::max(worst, std::abs(half_diff - eps * r[i]));
  }
  return worst / (std::abs(eps) * r_max);
}

LinearSolution solve_linear(const PerturbationModel& model, double t0, double t1, double step,
                            double r0, double dr0) {
  if (!(step > 0.0) || !(t1 > t0)) throw std::invalid_argument("solve_linear needs step > 0 and t1 > t0");
  using V2 = ode::Vec<2>;
  const auto rhs = [&model](double t, const V2& y) {
    const Coefficients c = model_coefficients(model, t);
    return V2{y[1], -(c.c1 * y[1] + c.c0 * y[0]) / c.c2};
  };
  const auto n = static_cast<long>(std::ceil((t1 - t0) / step * (1.0 - 1e-12)));
  LinearSolution out;
  V2 y{r0, dr0};
  out.t.push_back(t0);
  out.r.push_back(r0);
  out.dr.push_back(dr0);
  for (long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * step;
    const double t_next = k + 1 == n ? t1 : t0 + static_cast<double>(k + 1) * step;
    y = ode::rk4_step<2>(rhs, t, y, t_next - t);
    out.t.push_back(t_next);
    out.r.push_back(y[0]);
    out.dr.push_back(y[1]);
  }
  return out;
}

}  // namespace sflrw
