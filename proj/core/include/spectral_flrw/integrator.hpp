#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spectral_flrw/eom.hpp"
#include "spectral_flrw/profiles.hpp"

namespace sflrw {

enum class Method { rk4, rk45 };

[[nodiscard]] std::string to_string(Method m);
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] Method method_from_string(const std::string& name);

struct IntegratorConfig {
  Method method = Method::rk4;
  /// Fixed step (rk4) or initial step and output spacing unit (rk45).
  double step = 1e-3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double t0 = 0.0;
  double t1 = 1.0;
  /// Record every n-th step (rk4) or every n-th multiple of `step` (rk45).
  int output_stride = 1;
  double collapse_eps = kCollapseThreshold;
  long max_steps = 50'000'000;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

enum class Termination { completed, collapse, non_finite };

[[nodiscard]] std::string to_string(Termination t);

struct TrajectorySample {
  PhaseState state;
  double constraint = 0.0;  ///< r0 at the sample
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  IntegratorConfig config;
  CosmoParams params;
  Termination termination = Termination::completed;
  std::string note;

  [[nodiscard]] const PhaseState& final_state() const { return samples.back().state; }
  /// max |r0| over the samples.
  [[nodiscard]] double max_constraint() const;
};

enum class Branch { plus, minus };

/// Initial velocity of sheet 1 from the constraint:
///   6 a1 v1^2 = Lambda (a1^3 + a2^3) + alpha W(a1, a2) - 6 a2 v2^2.
/// Throws DomainError naming the right-hand side when it is negative, and
/// for non-positive scale factors.
[[nodiscard]] PhaseState solve_constraint_ic(double a1, double a2, double v2, Branch branch,
                                             const CosmoParams& params, double t0 = 0.0);

/// Integrates the bimetric system from `ic` (whose t is replaced by cfg.t0).
/// Collapse and non-finite states end the run early with the cause in
/// `termination`; adaptive step underflow throws IntegrationError.
[[nodiscard]] Trajectory integrate(const PhaseState& ic, const CosmoParams& params,
                                   const IntegratorConfig& cfg);

/// CSV with header t,a1,v1,a2,v2,constraint and 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

struct OrderEstimate {
  double order = 0.0;
  bool conclusive = false;
  /// |y(h_k) - y(h_{k+1})| at t1 (max norm over the state).
  std::vector<double> differences;
  std::string note;
};

/// Global order from successive differences of the final state,
///   p = log(d_k / d_{k+1}) / log(q),
/// using the finest pair. Needs >= 3 steps in geometric progression
/// (std::invalid_argument otherwise). Inconclusive when the differences do
/// not decrease or sit at the rounding floor.
[[nodiscard]] OrderEstimate convergence_order(const PhaseState& ic, const CosmoParams& params,
                                              const IntegratorConfig& cfg,
                                              std::span<const double> steps);

}  // namespace sflrw
