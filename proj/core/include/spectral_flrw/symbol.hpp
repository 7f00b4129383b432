#pragma once

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "spectral_flrw/profiles.hpp"

namespace sflrw {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;
/// Operators on (sheet) x (spinor); row index = 4 * sheet + spinor.
using Mat8 = Eigen::Matrix<Complex, 8, 8>;

inline constexpr int kSpinorDim = 4;

/// Antihermitian Euclidean gamma matrices and the grading
/// gamma5 = g0 g1 g2 g3 (no extra phase: gamma5 is hermitian and squares to Id).
struct GammaSet {
  std::array<Mat4, 4> g;
  Mat4 gamma5;
};

/// Fixed chiral representation; computed once.
[[nodiscard]] const GammaSet& gamma_basis();

[[nodiscard]] Mat8 kron(const Mat2& sheet, const Mat4& spinor);

/// Cotangent coordinates (xi0; xi1, xi2, xi3).
struct Covector {
  double xi0 = 0.0;
  std::array<double, 3> xi{};

  [[nodiscard]] double spatial_norm2() const noexcept {
    return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  }
  [[nodiscard]] double norm2() const noexcept { return xi0 * xi0 + spatial_norm2(); }
  [[nodiscard]] Covector scaled(double s) const noexcept {
    return {s * xi0, {s * xi[0], s * xi[1], s * xi[2]}};
  }
};

/// Truncated Taylor jet of a matrix-valued function along xi0:
/// value, d/dxi0 and d^2/dxi0^2. `order` says how many derivatives are valid.
struct XiJet {
  Mat8 v = Mat8::Zero();
  Mat8 d = Mat8::Zero();
  Mat8 dd = Mat8::Zero();
  int order = 2;

  static XiJet constant(const Mat8& m) { return {m, Mat8::Zero(), Mat8::Zero(), 2}; }
};

[[nodiscard]] XiJet operator+(const XiJet& x, const XiJet& y);
[[nodiscard]] XiJet operator-(const XiJet& x, const XiJet& y);
[[nodiscard]] XiJet operator*(const XiJet& x, const XiJet& y);
[[nodiscard]] XiJet operator*(Complex s, const XiJet& x);
/// Jet of x^{-1}; throws DomainError when the value is singular.
[[nodiscard]] XiJet inverse(const XiJet& x);
/// d/dxi0, one order lower.
[[nodiscard]] XiJet derivative(const XiJet& x);

/// A symbol evaluated at one cotangent point: its xi0-jet and the jets of
/// its first and second t-derivatives. `t_order` is the number of valid
/// t-derivatives (2 for a2, 1 for a1, 0 for a0 given 2-jet profiles).
struct SymbolSample {
  XiJet value;
  XiJet dt;
  XiJet dtt;
  int t_order = 2;
};

/// Matrix-valued symbol homogeneous of degree `degree` in xi, frozen at a
/// time t.
class MatrixSymbol {
 public:
  using Evaluator = std::function<SymbolSample(const Covector&)>;

  MatrixSymbol(int degree, Evaluator eval) : degree_(degree), eval_(std::move(eval)) {}

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] SymbolSample sample(const Covector& xi) const { return eval_(xi); }
  [[nodiscard]] Mat8 operator()(const Covector& xi) const { return eval_(xi).value.v; }

 private:
  int degree_;
  Evaluator eval_;
};

/// Sheet matrices A, H, F and their time derivatives at a fixed t.
struct SheetData {
  Mat2 A, A_d1, A_d2;
  Mat2 H, H_d1;
  Mat2 F, F_d1, F_d2;
};

[[nodiscard]] SheetData sheet_data(const SheetGeometry& geom, double t);

/// Homogeneous parts of the symbol of D^2:
///   a2 = xi0^2 + A^2 |xi|^2
///   a1 = i(-2 H xi0 + dA/dt g0 (g.xi) + [F, A] gamma5 (g.xi))
///   a0 = -H^2 - dH/dt + F^2 - gamma5 g0 (dF/dt + [H, F])
struct SymbolSet {
  MatrixSymbol a2;
  MatrixSymbol a1;
  MatrixSymbol a0;
  SheetData sheets;
};

/// Throws DomainError for non-positive scale factors.
[[nodiscard]] SymbolSet build_symbols(const SheetGeometry& geom, double t);

/// Symbol of D itself, degree 1 and degree 0 parts (used to cross-check
/// build_symbols against the composition sigma(D) o sigma(D)).
struct DiracSymbol {
  XiJet d1, d1_dt;
  XiJet d0, d0_dt;
};
[[nodiscard]] DiracSymbol dirac_symbol(const SheetData& s, const Covector& xi);

/// Convention for the derivative factors of the symbol composition
///   sigma(PQ) = sum_alpha c^|alpha| / alpha! (d_xi^alpha p)(d_x^alpha q).
/// `standard` uses c = -i (symbols built with d_x -> i xi); `printed` uses
/// c = 1, which is how the recursion is sometimes written without the
/// factors of i.
enum class Composition { standard, printed };

/// b0, b1, b2 of the parametrix of D^2 (left inverse, b o a = Id + O(-3)).
struct ParametrixTerms {
  Mat8 b0;
  Mat8 b1;
  Mat8 b2;
};

/// Throws DomainError when xi = 0 or a2 is singular.
[[nodiscard]] ParametrixTerms parametrix(const SymbolSet& symbols, const Covector& xi,
                                         Composition conv = Composition::standard);

/// Graded components of sigma(b) o sigma(D^2) - Id of degree 0, -1, -2.
[[nodiscard]] std::array<Mat8, 3> composition_defect(const SymbolSet& symbols,
                                                     const Covector& xi,
                                                     Composition conv = Composition::standard);

}  // namespace sflrw
