#pragma once

#include <functional>

#include "spectral_flrw/profiles.hpp"

namespace sflrw {

struct Trajectory;

/// Phase-space point of the two-sheet system.
struct PhaseState {
  double t = 0.0;
  double a1 = 1.0;
  double v1 = 0.0;
  double a2 = 1.0;
  double v2 = 0.0;

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

struct Accelerations {
  double a1 = 0.0;
  double a2 = 0.0;
};

struct ClassicalResiduals {
  double constraint = 0.0;  ///< 6 a a'^2 - Lambda a^3
  double evolution = 0.0;   ///< 12 a'' a + 6 a'^2 - 3 Lambda a^2
};

struct BimetricResiduals {
  double r0 = 0.0;  ///< constraint (lapse variation)
  double r1 = 0.0;  ///< sheet-1 evolution
  double r2 = 0.0;  ///< sheet-2 evolution
};

inline constexpr double kCollapseThreshold = 1e-8;

/// Single-sheet Friedmann residuals. Throws DomainError unless a.value > 0.
[[nodiscard]] ClassicalResiduals classical_residuals(const Jet2& a, double lambda);

/// dV/da1 = (a1 - a2)(2 a2^3 + 2 a2^2 a1 + 5 a1^2 a2 + 3 a1^3) / (a1 + a2)^2
[[nodiscard]] double interaction_force_1(double a1, double a2);
/// dV/da2 = (a2 - a1)(3 a2^3 + 5 a2^2 a1 + 2 a1^2 a2 + 2 a1^3) / (a1 + a2)^2
[[nodiscard]] double interaction_force_2(double a1, double a2);

/// r0 = 6 (a1 a1'^2 + a2 a2'^2) - Lambda (a1^3 + a2^3) - alpha W(a1, a2)
/// r1 = 12 a1'' a1 + 6 a1'^2 - 3 Lambda a1^2 - alpha P1(a1, a2)
/// r2 = 12 a2'' a2 + 6 a2'^2 - 3 Lambda a2^2 - alpha P2(a1, a2)
[[nodiscard]] BimetricResiduals bimetric_residuals(const PhaseState& s, const Accelerations& acc,
                                                   const CosmoParams& params);

/// Constraint residual r0 alone (independent of the accelerations).
[[nodiscard]] double constraint_residual(const PhaseState& s, const CosmoParams& params);

/// The (a1'', a2'') that make r1 = r2 = 0. Throws CollapseError when a scale
/// factor is at or below `collapse_eps`.
[[nodiscard]] Accelerations accelerations(const PhaseState& s, const CosmoParams& params,
                                          double collapse_eps = kCollapseThreshold);

/// Smooth trial functions for the variational check.
struct TrialPair {
  std::function<Jet2(double)> a1;
  std::function<Jet2(double)> a2;
};

struct ElOptions {
  /// Grid step h; the hat bumps have total width 10 h, with Richardson
  /// extrapolation between h and h/2.
  double step = 1e-2;
  /// Relative amplitude of the functional perturbation.
  double eta = 1e-4;
};

struct ElReport {
  double max_rel_dev = 0.0;
  double variation_1 = 0.0;  ///< finite-difference dS/da1
  double variation_2 = 0.0;  ///< finite-difference dS/da2
  double r1 = 0.0;
  double r2 = 0.0;
  /// Factor mapping dS/da onto the residuals, fixed by the alpha = 0 limit.
  double normalization = 0.0;
};

/// Variational derivative of S = int L dt by finite-difference functional
/// variation, evaluated at t. Throws std::invalid_argument when the step
/// underflows.
[[nodiscard]] double functional_derivative(const TrialPair& trial, const CosmoParams& params,
                                           int sheet, double t, const ElOptions& options = {});

/// Compares the finite-difference variational derivatives with r1, r2 of
/// the trial pair at t and returns the worst relative deviation (relative
/// to the largest term of each residual).
[[nodiscard]] ElReport el_consistency(const CosmoParams& params, const TrialPair& trial, double t,
                                      const ElOptions& options = {});

/// max |r0| / (|Lambda| (a1^3 + a2^3) + 1) over the trajectory samples.
[[nodiscard]] double constraint_consistency(const Trajectory& traj, const CosmoParams& params);

}  // namespace sflrw
