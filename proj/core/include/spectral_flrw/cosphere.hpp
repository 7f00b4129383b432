#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "spectral_flrw/symbol.hpp"

namespace sflrw {

/// Product quadrature on the unit 3-sphere in hyperspherical angles
///   xi = (cos psi, sin psi sin th cos ph, sin psi sin th sin ph, sin psi cos th),
///   d sigma = sin^2 psi sin th d psi d th d ph.
///
/// psi: Gauss rule for the weight sin^2 psi on [0, pi] (Gauss-Chebyshev of the
/// second kind in cos psi, nodes k pi / (n + 1)); exact for polynomials in xi0
/// of degree <= 2n - 1 and geometrically convergent for integrands analytic in
/// a strip around the real psi axis.
/// th: Gauss-Legendre in cos th. ph: uniform (trapezoidal) rule.
///
/// The spinor-traced integrands of the engine are polynomials of degree <= 2
/// in the spatial direction, so the default 6 x 8 inner grid integrates them
/// exactly and the hyperspherical count alone controls accuracy.
class CosphereRule {
 public:
  static constexpr int kMinNodes = 4;
  static constexpr int kDefaultNodes = 96;

  struct Node {
    Covector xi;
    double weight;
  };

  /// Throws std::invalid_argument if any count is below kMinNodes.
  explicit CosphereRule(int hyperspherical = kDefaultNodes, int polar = 6, int azimuthal = 8);

  [[nodiscard]] int hyperspherical() const noexcept { return n_psi_; }
  [[nodiscard]] int polar() const noexcept { return n_theta_; }
  [[nodiscard]] int azimuthal() const noexcept { return n_phi_; }
  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  int n_psi_;
  int n_theta_;
  int n_phi_;
  std::vector<Node> nodes_;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

using CosphereIntegrand = std::function<std::complex<double>(const Covector&)>;

/// Sum over rule nodes in a fixed order (deterministic).
[[nodiscard]] std::complex<double> cosphere_integrate(const CosphereIntegrand& f,
                                                      const CosphereRule& rule);
/// Convenience: rule with `n` hyperspherical nodes and the default inner grid.
[[nodiscard]] std::complex<double> cosphere_integrate(const CosphereIntegrand& f, int n);

}  // namespace sflrw
