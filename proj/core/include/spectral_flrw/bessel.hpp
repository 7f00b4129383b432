#pragma once

namespace sflrw {

inline constexpr double kBesselMaxOrder = 5.0;
/// Backward recurrence below this argument, Hankel asymptotic expansion above.
inline constexpr double kBesselAsymptoticFrom = 25.0;

/// J_nu(x) for 0 <= nu <= 5 and x > 0, relative error ~1e-13 away from zeros.
/// Throws DomainError outside that range.
[[nodiscard]] double bessel_j(double nu, double x);

/// J_{-nu}(x) for non-integer 0 < nu <= 5 and x > 0, by downward recurrence
/// from two non-negative orders. Throws DomainError for integer nu (where
/// J_{-nu} is not independent of J_nu) and outside the range.
[[nodiscard]] double bessel_j_negative(double nu, double x);

/// J_mu(x), J_mu'(x), J_mu''(x) for any real mu with |mu| <= 5 (negative mu
/// non-integer); derivatives from J_mu' = (mu / x) J_mu - J_{mu+1} and the
/// Bessel equation.
struct BesselJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
[[nodiscard]] BesselJet bessel_j_jet(double mu, double x);

}  // namespace sflrw
