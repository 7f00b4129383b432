#pragma once

#include <span>

#include "spectral_flrw/profiles.hpp"

namespace sflrw {

struct Trajectory;

/// Scale factors of both sheets with their time derivatives.
struct BimetricState {
  Jet2 a1;
  Jet2 a2;
};

/// Auxiliary time-scale factor whose variation yields the constraint.
struct Lapse {
  double b = 1.0;
};

/// Sign convention of the dynamical (kinetic and potential) part.
/// `lorentzian` is the physical form whose Euler-Lagrange equations are the
/// bimetric Friedmann system; `euclidean` flips the kinetic sign.
enum class Signature { lorentzian, euclidean };

/// V = (a1 - a2)^2 (a1^2 + a1 a2 + a2^2) / (a1 + a2). Throws DomainError if a1 + a2 <= 0.
[[nodiscard]] double potential_V(double a1, double a2);

/// The lapse-scaled form (a1 - a2)^2 (a1^3 + 2 a1^2 a2 + 2 a1 a2^2 + a2^3) / (a1 + a2)^2,
/// algebraically identical to potential_V.
[[nodiscard]] double potential_W(double a1, double a2);

/// |V - W| / max(1, |V|). Throws DomainError if a1 + a2 == 0.
[[nodiscard]] double potential_identity_check(double a1, double a2);

/// Lambda b (a1^3 + a2^3) + s 6 (a1'^2 a1 + a2'^2 a2) / b + alpha b V(a1, a2),
/// s = +1 (lorentzian) or -1 (euclidean).
[[nodiscard]] double lagrangian_density(const BimetricState& state, const CosmoParams& params,
                                        Lapse lapse = {},
                                        Signature signature = Signature::lorentzian);

/// Composite Simpson quadrature (3/8 rule on the last panel for an odd
/// number of intervals) of uniformly spaced samples. Throws
/// std::invalid_argument for fewer than 3 samples or non-uniform spacing.
[[nodiscard]] double simpson_uniform(std::span<const double> values, double spacing);

/// Time integral of the density (b = 1, lorentzian) along a trajectory with
/// uniformly spaced samples.
[[nodiscard]] double total_action(const Trajectory& traj, const CosmoParams& params);

/// Closed forms of the two leading spectral-action terms at one instant.
namespace closed_form {

/// 2 pi^2 (a1^3 + a2^3)
[[nodiscard]] double volume_term(double a1, double a2);
/// tr(pi^2 / A^5 (3 A'^2 - A A'')) for one sheet with A = 1/a;
/// equals pi^2 (a'^2 a + a'' a^2).
[[nodiscard]] double kinetic_term(const Jet2& a);
/// 2 pi^2 |Phi|^2 (a1 - a2)^2 (a1^2 + a1 a2 + a2^2) / (a1 + a2)
[[nodiscard]] double potential_term(double a1, double a2, double phi_modulus);
/// -2 pi^2 |Phi|^2 (a1^3 + a2^3)
[[nodiscard]] double mass_term(double a1, double a2, double phi_modulus);
/// Scalar curvature density 6(-3 A'^2 / A^5 + A'' / A^4), A = 1/a.
[[nodiscard]] double scalar_curvature_density(const Jet2& a);

}  // namespace closed_form

}  // namespace sflrw
