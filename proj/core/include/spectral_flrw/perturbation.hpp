#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spectral_flrw/profiles.hpp"

namespace sflrw {

struct Trajectory;

enum class ModelKind { empty, radiation, matter };

[[nodiscard]] std::string to_string(ModelKind k);
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] ModelKind model_kind_from_string(const std::string& name);

/// Order of the radiation Bessel solution, sqrt(5) / 4.
[[nodiscard]] double radiation_order();

/// One of the three linearized models with its (consistent) background:
///   empty      a0 exp(sqrt(Lambda / 6) t)
///   radiation  a0 sqrt(t)
///   matter     a0 t^(2/3)
class PerturbationModel {
 public:
  /// Throws ValidationError if the background does not belong to the kind
  /// (or the params are not finite, or Lambda < 0 for the empty model).
  PerturbationModel(ModelKind kind, Profile background, CosmoParams params);

  [[nodiscard]] static PerturbationModel make(ModelKind kind, const CosmoParams& params,
                                              double a0 = 1.0);

  [[nodiscard]] ModelKind kind() const noexcept { return kind_; }
  [[nodiscard]] const Profile& background() const noexcept { return background_; }
  [[nodiscard]] const CosmoParams& params() const noexcept { return params_; }
  [[nodiscard]] double a0() const noexcept { return background_.coefficient(); }

 private:
  ModelKind kind_;
  Profile background_;
  CosmoParams params_;
};

/// 12 a'' r + 12 r'' a + 12 a' r' - 6 Lambda a r - 6 alpha a r.
/// Throws DomainError unless a_bg.value > 0.
[[nodiscard]] double linearized_residual(const Jet2& a_bg, const Jet2& r, const CosmoParams& params);

/// Largest magnitude among the terms of linearized_residual.
[[nodiscard]] double linearized_scale(const Jet2& a_bg, const Jet2& r, const CosmoParams& params);

/// Model ODE residual:
///   empty      6 r'' + sqrt(6 Lambda) r' - (2 Lambda + 3 alpha) r
///   radiation  4 t^2 r'' + 2 t r' - (1 + 2 (Lambda + alpha) t^2) r
///   matter     18 t^2 r'' + 12 t r' - (4 + 9 (Lambda + alpha) t^2) r
/// Throws DomainError for t <= 0 (radiation, matter) or Lambda < 0 (empty).
[[nodiscard]] double reduce_model(const PerturbationModel& model, double t, const Jet2& r);

/// Largest magnitude among the terms of reduce_model.
[[nodiscard]] double reduce_model_scale(const PerturbationModel& model, double t, const Jet2& r);

/// Positive factor with linearized_residual = prefactor * reduce_model on
/// the model background: 2 a(t), 3 a0 / t^(3/2), 2 a0 / (3 t^(4/3)).
[[nodiscard]] double reduction_prefactor(const PerturbationModel& model, double t);

struct ExponentPair {
  std::complex<double> plus;
  std::complex<double> minus;
  [[nodiscard]] bool real() const noexcept { return plus.imag() == 0.0; }
};

/// Roots of 6 mu^2 + sqrt(6 Lambda) mu - (2 Lambda + 3 alpha) = 0, that is
/// -sqrt(Lambda / 24) +- sqrt(6 Lambda + 8 alpha) / 4. Throws DomainError for
/// Lambda < 0.
[[nodiscard]] ExponentPair empty_exponents(double lambda, double alpha);

/// Candidate arguments of the radiation Bessel solution J_nu(b t).
enum class BesselArgument {
  reduced,  ///< b = sqrt(-2 (Lambda + alpha)) / 2, from the standard Bessel form
  printed,  ///< b = sqrt(-2 (Lambda + alpha)) as printed
};

[[nodiscard]] std::string to_string(BesselArgument a);
/// b for the radiation and matter solutions. Throws DomainError unless Lambda + alpha < 0.
[[nodiscard]] double oscillation_rate(const CosmoParams& params,
                                      BesselArgument arg = BesselArgument::reduced);

/// General closed-form solution and its first two derivatives:
///   empty      c1 e^{mu+ t} + c2 e^{mu- t}  (c1 t e^{mu t} partner for a double
///              root; e^{Re t}(c1 cos + c2 sin)(Im t) for a complex pair)
///   radiation  t^{1/4} (c1 J_nu(b t) + c2 J_{-nu}(b t))
///   matter     t^{-1/3} (c1 sin(b t) + c2 cos(b t))
/// Throws DomainError when the sign conditions fail (empty: Lambda >= 0;
/// radiation, matter: Lambda + alpha < 0 and t > 0).
[[nodiscard]] Jet2 closed_form_solution(const PerturbationModel& model, double t, double c1,
                                        double c2,
                                        BesselArgument arg = BesselArgument::reduced);

/// Radiation Wronskian r_1 r_2' - r_1' r_2 of the two closed-form solutions.
[[nodiscard]] double radiation_wronskian(const PerturbationModel& model, double t);

struct ArgumentScan {
  double b_reduced = 0.0;
  double b_printed = 0.0;
  /// max over the grid of |reduce_model| / reduce_model_scale.
  double residual_reduced = 0.0;
  double residual_printed = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool reduced_passes() const { return residual_reduced < tolerance; }
  [[nodiscard]] bool printed_passes() const { return residual_printed < tolerance; }
};

/// Evaluates both candidate arguments on `samples` uniform points of
/// [t_lo, t_hi] with c1 = 1, c2 = 0.
[[nodiscard]] ArgumentScan scan_radiation_argument(const CosmoParams& params, double t_lo = 0.5,
                                                   double t_hi = 20.0, int samples = 400,
                                                   double tolerance = 1e-8);

/// max_i |(a1 - a2)/2 - eps r_i| / (eps max|r|) over trajectory samples, with
/// r given at the sample times. Throws std::invalid_argument if the grids
/// differ or the first sample is not centred on the background.
[[nodiscard]] double split_compare(const Profile& background, std::span<const double> times,
                                   std::span<const double> r, double eps,
                                   const Trajectory& full_traj);

/// Numerical solution of the model ODE (classical RK4 on (r, r')) from
/// r(t0) = r0, r'(t0) = dr0, sampled every `step`.
struct LinearSolution {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> dr;
};
[[nodiscard]] LinearSolution solve_linear(const PerturbationModel& model, double t0, double t1,
                                          double step, double r0, double dr0);

}  // namespace sflrw
