#include "spectral_flrw/profiles.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "spectral_flrw/errors.hpp"

namespace sflrw {

bool Jet2::finite() const noexcept {
  return std::isfinite(value) && std::isfinite(d1) && std::isfinite(d2);
}

Profile Profile::constant(double c0) { return {Kind::constant, c0, 0.0}; }

Profile Profile::exponential(double c0, double rate) { return {Kind::exponential, c0, rate}; }

Profile Profile::power_law(double c0, double exponent) {
  return {Kind::power_law, c0, exponent};
}

bool Profile::in_domain(double t) const noexcept {
  if (!std::isfinite(t)) return false;
  return kind_ != Kind::power_law || t > 0.0;
}

bool Profile::identically_zero() const noexcept {
  return kind_ == Kind::zero || c0_ == 0.0;
}

std::string to_string(Profile::Kind kind) {
  switch (kind) {
    case Profile::Kind::zero: return "zero";
    case Profile::Kind::constant: return "constant";
    case Profile::Kind::exponential: return "exponential";
    case Profile::Kind::power_law: return "power_law";
  }
  return "unknown";
}

Profile::Kind profile_kind_from_string(const std::string& name) {
  if (name == "zero") return Profile::Kind::zero;
  if (name == "constant") return Profile::Kind::constant;
  if (name == "exponential") return Profile::Kind::exponential;
  if (name == "power_law") return Profile::Kind::power_law;
  throw std::invalid_argument(fmt::format("unknown profile kind '{}'", name));
}

Jet2 jet_eval(const Profile& p, double t) {
  if (!p.in_domain(t)) {
    throw DomainError(fmt::format("{} profile evaluated outside its domain at t = {}",
                                  to_string(p.kind()), t));
  }
  const double c = p.coefficient();
  const double k = p.rate();
  Jet2 j;
  switch (p.kind()) {
    case Profile::Kind::zero:
      break;
    case Profile::Kind::constant:
      j.value = c;
      break;
    case Profile::Kind::exponential: {
      const double v = c * std::exp(k * t);
      j = {v, k * v, k * k * v};
      break;
    }
    case Profile::Kind::power_law: {
      const double v = c * std::pow(t, k);
      j = {v, k * v / t, k * (k - 1.0) * v / (t * t)};
      break;
    }
  }
  if (!j.finite()) {
    throw DomainError(fmt::format("{} profile is not finite at t = {}", to_string(p.kind()), t));
  }
  return j;
}

ComplexJet2 HiggsField::jet(double t) const {
  const Jet2 s = jet_eval(shape, t);
  return {amplitude * s.value, amplitude * s.d1, amplitude * s.d2};
}

bool HiggsField::is_constant() const noexcept {
  return amplitude == std::complex<double>{} || shape.kind() == Profile::Kind::constant ||
         shape.identically_zero();
}

void SheetGeometry::validate_at(double t) const {
  const double v1 = jet_eval(a1, t).value;
  const double v2 = jet_eval(a2, t).value;
  if (!(v1 > 0.0) || !(v2 > 0.0)) {
    throw DomainError(
        fmt::format("scale factors must be positive: a1({}) = {}, a2({}) = {}", t, v1, t, v2));
  }
  (void)jet_eval(h1, t);
  (void)jet_eval(h2, t);
  (void)phi.jet(t);
}

bool SheetGeometry::torsion_free() const noexcept {
  return h1.identically_zero() && h2.identically_zero();
}

SheetGeometry SheetGeometry::swapped() const {
  SheetGeometry s = *this;
  std::swap(s.a1, s.a2);
  std::swap(s.h1, s.h2);
  s.phi.amplitude = std::conj(phi.amplitude);
  return s;
}

CosmoParams validate_params(const CosmoParams& raw) {
  CosmoParams out = raw;
  std::vector<std::string> problems;

  const auto check_finite = [&](const char* name, const std::optional<double>& v) {
    if (v && !std::isfinite(*v)) problems.push_back(fmt::format("{} is not finite", name));
  };
  check_finite("raw_lambda", raw.raw_lambda);
  check_finite("raw_c", raw.raw_c);
  check_finite("phi_modulus", raw.phi_modulus);

  const bool has_raw = raw.raw_lambda || raw.raw_c;
  const bool lambda_given = !std::isnan(raw.lambda_eff);
  const bool alpha_given = !std::isnan(raw.alpha);
  if (lambda_given && !std::isfinite(raw.lambda_eff)) problems.emplace_back("lambda_eff is not finite");
  if (alpha_given && !std::isfinite(raw.alpha)) problems.emplace_back("alpha is not finite");

  if (has_raw) {
    if (!raw.raw_lambda || !raw.raw_c) {
      problems.emplace_back("raw constants need both raw_lambda and raw_c");
    } else if (!raw.phi_modulus) {
      problems.emplace_back("raw constants need phi_modulus (|Phi|)");
    } else if (problems.empty()) {
      const double lam = *raw.raw_lambda;
      const double c = *raw.raw_c;
      const double phi2 = *raw.phi_modulus * *raw.phi_modulus;
      if (!(lam > 0.0)) problems.emplace_back("raw_lambda must be positive");
      if (c == 0.0) problems.emplace_back("raw_c must be nonzero");
      if (problems.empty()) {
        const double lambda_derived = 6.0 * (lam * lam / c - phi2);
        const double alpha_derived = 6.0 * phi2;
        const auto consistent = [](double given, double derived) {
          return std::abs(given - derived) <= 1e-12 * std::max(1.0, std::abs(derived));
        };
        if (lambda_given && std::isfinite(raw.lambda_eff) &&
            !consistent(raw.lambda_eff, lambda_derived)) {
          problems.push_back(fmt::format(
              "lambda_eff = {} conflicts with raw constants (which give {})", raw.lambda_eff,
              lambda_derived));
        }
        if (alpha_given && std::isfinite(raw.alpha) && !consistent(raw.alpha, alpha_derived)) {
          problems.push_back(fmt::format("alpha = {} conflicts with raw constants (which give {})",
                                         raw.alpha, alpha_derived));
        }
        out.lambda_eff = lambda_derived;
        out.alpha = alpha_derived;
      }
    }
  } else {
    if (!lambda_given) problems.emplace_back("lambda_eff is missing or NaN");
    if (!alpha_given) problems.emplace_back("alpha is missing or NaN");
  }

  if (!problems.empty()) {
    std::string msg = "invalid cosmological parameters:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
  return out;
}

}  // namespace sflrw
