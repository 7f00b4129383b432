#include "spectral_flrw/cosphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace sflrw {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = -z;
    x[hi] = z;
    w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

CosphereRule::CosphereRule(int hyperspherical, int polar, int azimuthal)
    : n_psi_(hyperspherical), n_theta_(polar), n_phi_(azimuthal) {
  if (n_psi_ < kMinNodes || n_theta_ < kMinNodes || n_phi_ < kMinNodes) {
    throw std::invalid_argument(fmt::format(
        "cosphere rule needs at least {} nodes per angle (got {} x {} x {})", kMinNodes, n_psi_,
        n_theta_, n_phi_));
  }
  const double pi = std::numbers::pi;
  std::vector<double> ct, wt;
  gauss_legendre(n_theta_, ct, wt);

  nodes_.reserve(static_cast<std::size_t>(n_psi_ * n_theta_ * n_phi_));
  const double w_phi = 2.0 * pi / n_phi_;
  for (int k = 1; k <= n_psi_; ++k) {
    const double psi = k * pi / (n_psi_ + 1);
    const double s = std::sin(psi);
    const double w_psi = pi / (n_psi_ + 1) * s * s;
    const double c = std::cos(psi);
    for (int j = 0; j < n_theta_; ++j) {
      const double cth = ct[static_cast<std::size_t>(j)];
      const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
      for (int m = 0; m < n_phi_; ++m) {
        const double ph = (m + 0.5) * w_phi;
        Node node;
        node.xi = {c, {s * sth * std::cos(ph), s * sth * std::sin(ph), s * cth}};
        node.weight = w_psi * wt[static_cast<std::size_t>(j)] * w_phi;
        nodes_.push_back(node);
      }
    }
  }
}

std::complex<double> cosphere_integrate(const CosphereIntegrand& f, const CosphereRule& rule) {
  std::complex<double> sum{};
  for (const auto& node : rule.nodes()) sum += node.weight * f(node.xi);
  return sum;
}

std::complex<double> cosphere_integrate(const CosphereIntegrand& f, int n) {
  return cosphere_integrate(f, CosphereRule(n));
}

}  // namespace sflrw
