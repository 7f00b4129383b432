#include "spectral_flrw/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "spectral_flrw/errors.hpp"

namespace sflrw {

namespace {

// Miller's algorithm: recur J_{mu-1} = (2 mu / x) J_mu - J_{mu+1} downward from
// an order far above x, then normalize with
//   sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(x) = (x / 2)^nu.
double miller(double nu, double x) {
  const int top = 2 * static_cast<int>(std::ceil((x + 40.0 + 8.0 * std::cbrt(x)) / 2.0));
  std::vector<double> f(static_cast<std::size_t>(top) + 2, 0.0);
  f[static_cast<std::size_t>(top) + 1] = 0.0;
  f[static_cast<std::size_t>(top)] = 1e-300;
  for (int k = top; k >= 1; --k) {
    const auto i = static_cast<std::size_t>(k);
    f[i - 1] = 2.0 * (nu + k) / x * f[i] - f[i + 1];
    if (std::abs(f[i - 1]) > 1e250) {
      for (std::size_t j = i - 1; j < f.size(); ++j) f[j] *= 1e-250;
    }
  }
  // f[k] is proportional to J_{nu+k}
  double norm = std::tgamma(nu + 1.0) * f[0];
  double g = std::tgamma(nu + 1.0);  // Gamma(nu + k) / k! at k = 1
  for (int k = 1; 2 * k <= top; ++k) {
    if (k > 1) g *= (nu + k - 1.0) / k;
    norm += (nu + 2.0 * k) * g * f[static_cast<std::size_t>(2 * k)];
  }
  return f[0] / norm * std::pow(0.5 * x, nu);
}

double hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    const double signed_term = (k / 2) % 2 == 0 ? term : -term;
    if (k % 2 == 0) {
      p += signed_term;
    } else {
      q += signed_term;
    }
    if (mag < 1e-17 * std::abs(p)) break;
    last = mag;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_nonneg(double nu, double x) {
  return x > kBesselAsymptoticFrom ? hankel(nu, x) : miller(nu, x);
}

bool is_integer(double nu) { return std::abs(nu - std::round(nu)) < 1e-12; }

double bessel_neg_unchecked(double nu, double x) {
  // J_{m-nu} and J_{m+1-nu} with m = ceil(nu) have non-negative orders.
  const int m = static_cast<int>(std::ceil(nu));
  double hi = bessel_nonneg(m + 1.0 - nu, x);
  double lo = bessel_nonneg(m - nu, x);
  for (int k = m; k > 0; --k) {
    const double order = k - nu;  // lo = J_order, hi = J_{order+1}
    const double next = 2.0 * order / x * lo - hi;
    hi = lo;
    lo = next;
  }
  return lo;
}

double bessel_any(double mu, double x) {
  return mu >= 0.0 ? bessel_nonneg(mu, x) : bessel_neg_unchecked(-mu, x);
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(nu >= 0.0 && nu <= kBesselMaxOrder) || !(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("bessel_j needs 0 <= nu <= {} and finite x > 0 (nu = {}, x = {})",
                                  kBesselMaxOrder, nu, x));
  }
  return bessel_nonneg(nu, x);
}

double bessel_j_negative(double nu, double x) {
  if (!(nu > 0.0 && nu <= kBesselMaxOrder) || !(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format(
        "bessel_j_negative needs 0 < nu <= {} and finite x > 0 (nu = {}, x = {})",
        kBesselMaxOrder, nu, x));
  }
  if (is_integer(nu)) {
    throw DomainError(fmt::format("J_-nu is dependent on J_nu for integer nu = {}", nu));
  }
  return bessel_neg_unchecked(nu, x);
}

BesselJet bessel_j_jet(double mu, double x) {
  if (!(std::abs(mu) <= kBesselMaxOrder) || !(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("bessel_j_jet needs |mu| <= {} and finite x > 0 (mu = {}, x = {})",
                                  kBesselMaxOrder, mu, x));
  }
  if (mu < 0.0 && is_integer(mu)) {
    throw DomainError(fmt::format("negative integer order {} is not supported", mu));
  }
  BesselJet j;
  j.value = bessel_any(mu, x);
  j.d1 = mu / x * j.value - bessel_any(mu + 1.0, x);
  j.d2 = -j.d1 / x - (1.0 - mu * mu / (x * x)) * j.value;
  return j;
}

}  // namespace sflrw
