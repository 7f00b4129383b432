#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>

namespace sflrw {

/// Value of a time-dependent quantity together with its first and second
/// time derivatives.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  [[nodiscard]] bool finite() const noexcept;

  friend Jet2 operator+(const Jet2& x, const Jet2& y) noexcept {
    return {x.value + y.value, x.d1 + y.d1, x.d2 + y.d2};
  }
  friend Jet2 operator-(const Jet2& x, const Jet2& y) noexcept {
    return {x.value - y.value, x.d1 - y.d1, x.d2 - y.d2};
  }
  friend Jet2 operator-(const Jet2& x) noexcept { return {-x.value, -x.d1, -x.d2}; }
  friend Jet2 operator*(double s, const Jet2& x) noexcept {
    return {s * x.value, s * x.d1, s * x.d2};
  }
  friend Jet2 operator*(const Jet2& x, const Jet2& y) noexcept {
    return {x.value * y.value, x.d1 * y.value + x.value * y.d1,
            x.d2 * y.value + 2.0 * x.d1 * y.d1 + x.value * y.d2};
  }
};

/// Closed-form scalar profile of time.
class Profile {
 public:
  enum class Kind { zero, constant, exponential, power_law };

  Profile() = default;  // zero profile

  static Profile zero() { return {}; }
  static Profile constant(double c0);
  /// c0 * exp(rate * t)
  static Profile exponential(double c0, double rate);
  /// c0 * t^exponent, defined for t > 0 only
  static Profile power_law(double c0, double exponent);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double coefficient() const noexcept { return c0_; }
  /// Exponential rate or power-law exponent; 0 for the other kinds.
  [[nodiscard]] double rate() const noexcept { return rate_; }

  [[nodiscard]] bool in_domain(double t) const noexcept;
  /// True when value and both derivatives vanish identically.
  [[nodiscard]] bool identically_zero() const noexcept;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Profile(Kind kind, double c0, double rate) : kind_(kind), c0_(c0), rate_(rate) {}

  Kind kind_ = Kind::zero;
  double c0_ = 0.0;
  double rate_ = 0.0;
};

[[nodiscard]] std::string to_string(Profile::Kind kind);
[[nodiscard]] Profile::Kind profile_kind_from_string(const std::string& name);

/// Exact (p(t), p'(t), p''(t)). Throws DomainError outside the profile's domain.
[[nodiscard]] Jet2 jet_eval(const Profile& p, double t);

/// Complex jet, used for the Higgs field.
struct ComplexJet2 {
  std::complex<double> value;
  std::complex<double> d1;
  std::complex<double> d2;
};

/// Phi(t) = amplitude * shape(t). The default is the constant vacuum value.
struct HiggsField {
  std::complex<double> amplitude{0.0, 0.0};
  Profile shape = Profile::constant(1.0);

  [[nodiscard]] ComplexJet2 jet(double t) const;
  [[nodiscard]] bool is_constant() const noexcept;

  friend bool operator==(const HiggsField&, const HiggsField&) = default;
};

/// Per-sheet scale factors, torsion profiles and the Higgs field of the
/// two-sheeted geometry.
struct SheetGeometry {
  Profile a1 = Profile::constant(1.0);
  Profile a2 = Profile::constant(1.0);
  HiggsField phi;
  Profile h1;
  Profile h2;

  /// Throws DomainError unless both scale factors are strictly positive at t.
  void validate_at(double t) const;
  [[nodiscard]] bool torsion_free() const noexcept;
  /// (a1, h1, Phi) <-> (a2, h2, conj(Phi)).
  [[nodiscard]] SheetGeometry swapped() const;

  friend bool operator==(const SheetGeometry&, const SheetGeometry&) = default;
};

/// Effective constants of the physical action plus the optional raw
/// cutoff constants they derive from.
///
/// The raw -> effective map reads the action off the two leading Wodzicki
/// terms, flips the sign of the kinetic term (Wick rotation) and rescales
/// so that the kinetic coefficient is 6:
///
///   lambda_eff = 6 (raw_lambda^2 / raw_c - |Phi|^2)
///   alpha      = 6 |Phi|^2          (|Phi|^2 folded into alpha)
struct CosmoParams {
  double lambda_eff = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> raw_lambda;
  std::optional<double> raw_c;
  std::optional<double> phi_modulus;

  static CosmoParams effective(double lambda, double alpha) {
    CosmoParams p;
    p.lambda_eff = lambda;
    p.alpha = alpha;
    return p;
  }

  friend bool operator==(const CosmoParams&, const CosmoParams&) = default;
};

/// Populates lambda_eff / alpha (from the raw constants when present) and
/// rejects non-finite or inconsistent input with ValidationError.
[[nodiscard]] CosmoParams validate_params(const CosmoParams& raw);

}  // namespace sflrw
