#include "spectral_flrw/action.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "spectral_flrw/errors.hpp"
#include "spectral_flrw/integrator.hpp"

namespace sflrw {

double potential_V(double a1, double a2) {
  const double s = a1 + a2;
  if (!(s > 0.0)) throw DomainError(fmt::format("potential needs a1 + a2 > 0 (got {})", s));
  const double d = a1 - a2;
  return d * d * (a1 * a1 + a1 * a2 + a2 * a2) / s;
}

double potential_W(double a1, double a2) {
  const double s = a1 + a2;
  if (s == 0.0) throw DomainError("potential needs a1 + a2 != 0");
  const double d = a1 - a2;
  return d * d * (a2 * a2 * a2 + 2.0 * a2 * a2 * a1 + 2.0 * a1 * a1 * a2 + a1 * a1 * a1) /
         (s * s);
}

double potential_identity_check(double a1, double a2) {
  const double s = a1 + a2;
  if (s == 0.0) throw DomainError("potential identity needs a1 + a2 != 0");
  const double d = a1 - a2;
  const double v = d * d * (a1 * a1 + a1 * a2 + a2 * a2) / s;
  return std::abs(v - potential_W(a1, a2)) / std::max(1.0, std::abs(v));
}

double lagrangian_density(const BimetricState& state, const CosmoParams& params, Lapse lapse,
                          Signature signature) {
  if (!(lapse.b > 0.0)) throw DomainError("lapse b must be positive");
  const double a1 = state.a1.value;
  const double a2 = state.a2.value;
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("scale factors must be positive");
  const double b = lapse.b;
  const double kinetic_sign = signature == Signature::lorentzian ? 1.0 : -1.0;
  const double cosmological = params.lambda_eff * b * (a1 * a1 * a1 + a2 * a2 * a2);
  const double kinetic =
      6.0 * (state.a1.d1 * state.a1.d1 * a1 + state.a2.d1 * state.a2.d1 * a2) / b;
  const double interaction = params.alpha * b * potential_V(a1, a2);
  return cosmological + kinetic_sign * kinetic + interaction;
}

double simpson_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("Simpson quadrature needs at least 3 samples");
  const std::size_t intervals = n - 1;
  double sum = 0.0;
  std::size_t simpson_end = intervals;
  if (intervals % 2 == 1) {
    if (intervals < 3) throw std::invalid_argument("Simpson quadrature needs 3 samples or 4+");
    simpson_end = intervals - 3;
    // 3/8 rule on the last three intervals
    const std::size_t k = simpson_end;
    sum += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) {
    sum += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  }
  return sum;
}

double total_action(const Trajectory& traj, const CosmoParams& params) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw std::invalid_argument("total_action needs at least 3 samples");
  const double h = s[1].state.t - s[0].state.t;
  std::vector<double> density;
  density.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) {
      const double dt = s[i].state.t - s[i - 1].state.t;
      if (std::abs(dt - h) > 1e-9 * std::max(1.0, std::abs(h))) {
        throw std::invalid_argument("total_action needs uniformly spaced samples");
      }
    }
    const PhaseState& p = s[i].state;
    density.push_back(lagrangian_density({{p.a1, p.v1, 0.0}, {p.a2, p.v2, 0.0}}, params));
  }
  return simpson_uniform(density, h);
}

namespace closed_form {

double volume_term(double a1, double a2) {
  return 2.0 * std::numbers::pi * std::numbers::pi * (a1 * a1 * a1 + a2 * a2 * a2);
}

double kinetic_term(const Jet2& a) {
  const double A = 1.0 / a.value;
  const double Ad = -a.d1 / (a.value * a.value);
  const double Add = -a.d2 / (a.value * a.value) + 2.0 * a.d1 * a.d1 / (a.value * a.value * a.value);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return pi2 / std::pow(A, 5) * (3.0 * Ad * Ad - A * Add);
}

double potential_term(double a1, double a2, double phi_modulus) {
  const double d = a1 - a2;
  return 2.0 * std::numbers::pi * std::numbers::pi * phi_modulus * phi_modulus * d * d *
         (a1 * a1 + a1 * a2 + a2 * a2) / (a1 + a2);
}

double mass_term(double a1, double a2, double phi_modulus) {
  return -phi_modulus * phi_modulus * volume_term(a1, a2);
}

double scalar_curvature_density(const Jet2& a) {
  const double A = 1.0 / a.value;
  const double Ad = -a.d1 / (a.value * a.value);
  const double Add = -a.d2 / (a.value * a.value) + 2.0 * a.d1 * a.d1 / (a.value * a.value * a.value);
  return 6.0 * (-3.0 * Ad * Ad / std::pow(A, 5) + Add / std::pow(A, 4));
}

}  // namespace closed_form

}  // namespace sflrw
