#include "spectral_flrw/symbol.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spectral_flrw/errors.hpp"

namespace sflrw {
namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 pauli(int k) {
  Mat2 m;
  switch (k) {
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -kI, kI, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: m = Mat2::Identity(); break;
  }
  return m;
}

Mat4 kron22(const Mat2& x, const Mat2& y) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return out;
}

GammaSet make_gammas() {
  GammaSet g;
  // Hermitian chiral gammas times i.
  g.g[0] = kI * kron22(pauli(1), pauli(0));
  for (int k = 1; k <= 3; ++k) g.g[static_cast<std::size_t>(k)] = kI * kron22(pauli(2), pauli(k));
  g.gamma5 = g.g[0] * g.g[1] * g.g[2] * g.g[3];
  return g;
}

Mat2 diag2(double x, double y) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

Mat2 offdiag(Complex phi) {
  Mat2 m = Mat2::Zero();
  m(0, 1) = phi;
  m(1, 0) = std::conj(phi);
  return m;
}

Mat4 slash_spatial(const GammaSet& g, const Covector& xi) {
  return xi.xi[0] * g.g[1] + xi.xi[1] * g.g[2] + xi.xi[2] * g.g[3];
}

const Mat8& id8() {
  static const Mat8 id = Mat8::Identity();
  return id;
}

}  // namespace

const GammaSet& gamma_basis() {
  static const GammaSet g = make_gammas();
  return g;
}

Mat8 kron(const Mat2& sheet, const Mat4& spinor) {
  Mat8 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<4, 4>(4 * i, 4 * j) = sheet(i, j) * spinor;
  return out;
}

XiJet operator+(const XiJet& x, const XiJet& y) {
  XiJet r;
  r.order = std::min(x.order, y.order);
  r.v = x.v + y.v;
  if (r.order >= 1) r.d = x.d + y.d;
  if (r.order >= 2) r.dd = x.dd + y.dd;
  return r;
}

XiJet operator-(const XiJet& x, const XiJet& y) { return x + Complex{-1.0} * y; }

XiJet operator*(Complex s, const XiJet& x) {
  XiJet r;
  r.order = x.order;
  r.v = s * x.v;
  if (r.order >= 1) r.d = s * x.d;
  if (r.order >= 2) r.dd = s * x.dd;
  return r;
}

XiJet operator*(const XiJet& x, const XiJet& y) {
  XiJet r;
  r.order = std::min(x.order, y.order);
  r.v.noalias() = x.v * y.v;
  if (r.order >= 1) {
    r.d.noalias() = x.d * y.v;
    r.d.noalias() += x.v * y.d;
  }
  if (r.order >= 2) {
    r.dd.noalias() = x.dd * y.v;
    r.dd.noalias() += 2.0 * (x.d * y.d);
    r.dd.noalias() += x.v * y.dd;
  }
  return r;
}

XiJet inverse(const XiJet& x) {
  const Eigen::PartialPivLU<Mat8> lu(x.v);
  if (!(x.v.cwiseAbs().maxCoeff() > 0.0) || !(lu.rcond() > 1e-14)) {
    throw DomainError("singular principal symbol: a2 is not invertible");
  }
  XiJet r;
  r.order = x.order;
  r.v = lu.inverse();
  if (r.order >= 1) {
    const Mat8 bd = r.v * x.d;  // b a'
    r.d.noalias() = -(bd * r.v);
    if (r.order >= 2) {
      // (a^-1)'' = 2 b a' b a' b - b a'' b
      r.dd.noalias() = 2.0 * (bd * (bd * r.v));
      r.dd.noalias() -= r.v * (x.dd * r.v);
    }
  }
  return r;
}

XiJet derivative(const XiJet& x) {
  if (x.order < 1) throw std::logic_error("derivative of an order-0 jet");
  XiJet r;
  r.order = x.order - 1;
  r.v = x.d;
  if (r.order >= 1) r.d = x.dd;
  return r;
}

SheetData sheet_data(const SheetGeometry& geom, double t) {
  geom.validate_at(t);
  const Jet2 a1 = jet_eval(geom.a1, t);
  const Jet2 a2 = jet_eval(geom.a2, t);
  const Jet2 h1 = jet_eval(geom.h1, t);
  const Jet2 h2 = jet_eval(geom.h2, t);
  const ComplexJet2 phi = geom.phi.jet(t);

  // A = 1/a: A' = -a'/a^2, A'' = -a''/a^2 + 2 a'^2/a^3
  const auto inv_jet = [](const Jet2& a) {
    return Jet2{1.0 / a.value, -a.d1 / (a.value * a.value),
                -a.d2 / (a.value * a.value) + 2.0 * a.d1 * a.d1 / (a.value * a.value * a.value)};
  };
  const Jet2 A1 = inv_jet(a1);
  const Jet2 A2 = inv_jet(a2);

  SheetData s;
  s.A = diag2(A1.value, A2.value);
  s.A_d1 = diag2(A1.d1, A2.d1);
  s.A_d2 = diag2(A1.d2, A2.d2);
  s.H = diag2(h1.value, h2.value);
  s.H_d1 = diag2(h1.d1, h2.d1);
  s.F = offdiag(phi.value);
  s.F_d1 = offdiag(phi.d1);
  s.F_d2 = offdiag(phi.d2);
  return s;
}

SymbolSet build_symbols(const SheetGeometry& geom, double t) {
  const SheetData s = sheet_data(geom, t);
  const GammaSet& g = gamma_basis();
  const Mat4 id4 = Mat4::Identity();

  // a2 = xi0^2 + A^2 |xi|^2
  const Mat8 A2sq = kron(s.A * s.A, id4);
  const Mat8 A2sq_d1 = kron(s.A_d1 * s.A + s.A * s.A_d1, id4);
  const Mat8 A2sq_d2 = kron(s.A_d2 * s.A + 2.0 * s.A_d1 * s.A_d1 + s.A * s.A_d2, id4);
  MatrixSymbol a2(2, [=](const Covector& xi) {
    const double q = xi.spatial_norm2();
    SymbolSample out;
    out.value = {xi.xi0 * xi.xi0 * id8() + q * A2sq, 2.0 * xi.xi0 * id8(), 2.0 * id8(), 2};
    out.dt = XiJet::constant(q * A2sq_d1);
    out.dtt = XiJet::constant(q * A2sq_d2);
    out.t_order = 2;
    return out;
  });

  // a1 = i(-2 H xi0 + A' g0 (g.xi) + [F, A] gamma5 (g.xi))
  const Mat2 C = s.F * s.A - s.A * s.F;
  const Mat2 C_d1 = s.F_d1 * s.A + s.F * s.A_d1 - s.A_d1 * s.F - s.A * s.F_d1;
  const Mat8 H8 = kron(s.H, id4);
  const Mat8 H8_d1 = kron(s.H_d1, id4);
  const Mat2 A_d1 = s.A_d1;
  const Mat2 A_d2 = s.A_d2;
  MatrixSymbol a1(1, [=, &g](const Covector& xi) {
    const Mat4 gs = slash_spatial(g, xi);
    const Mat4 g0gs = g.g[0] * gs;
    const Mat4 g5gs = g.gamma5 * gs;
    SymbolSample out;
    out.value.v = kI * (-2.0 * xi.xi0 * H8 + kron(A_d1, g0gs) + kron(C, g5gs));
    out.value.d = -2.0 * kI * H8;
    out.value.dd.setZero();
    out.value.order = 2;
    out.dt.v = kI * (-2.0 * xi.xi0 * H8_d1 + kron(A_d2, g0gs) + kron(C_d1, g5gs));
    out.dt.d = -2.0 * kI * H8_d1;
    out.dt.dd.setZero();
    out.dt.order = 2;
    out.t_order = 1;
    return out;
  });

  // a0 = -H^2 - H' + F^2 - gamma5 g0 (F' + [H, F])
  const Mat8 a0v = kron(-s.H * s.H - s.H_d1 + s.F * s.F, id4) -
                   kron(s.F_d1 + s.H * s.F - s.F * s.H, g.gamma5 * g.g[0]);
  MatrixSymbol a0(0, [=](const Covector&) {
    SymbolSample out;
    out.value = XiJet::constant(a0v);
    out.t_order = 0;
    return out;
  });

  return SymbolSet{std::move(a2), std::move(a1), std::move(a0), s};
}

DiracSymbol dirac_symbol(const SheetData& s, const Covector& xi) {
  // sigma(D) = i (g0 xi0 + A g.xi) + g0 H + gamma5 F
  const GammaSet& g = gamma_basis();
  const Mat4 gs = slash_spatial(g, xi);
  const Mat2 id2 = Mat2::Identity();
  DiracSymbol d;
  d.d1.v = kI * (xi.xi0 * kron(id2, g.g[0]) + kron(s.A, gs));
  d.d1.d = kI * kron(id2, g.g[0]);
  d.d1.dd.setZero();
  d.d1_dt = XiJet::constant(kI * kron(s.A_d1, gs));
  d.d0 = XiJet::constant(kron(s.H, g.g[0]) + kron(s.F, g.gamma5));
  d.d0_dt = XiJet::constant(kron(s.H_d1, g.g[0]) + kron(s.F_d1, g.gamma5));
  return d;
}

namespace {

struct Factors {
  Complex c1;
  Complex c2;
};

Factors factors(Composition conv) {
  if (conv == Composition::standard) return {Complex{0.0, -1.0}, Complex{-1.0, 0.0}};
  return {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
}

struct Recursion {
  SymbolSample a2, a1, a0;
  XiJet b0, b1;
  Mat8 b2;
};

Recursion run_recursion(const SymbolSet& sym, const Covector& xi, Composition conv) {
  if (!(xi.norm2() > 0.0)) throw DomainError("parametrix evaluated at xi = 0");
  const auto [c1, c2] = factors(conv);
  Recursion r{sym.a2.sample(xi), sym.a1.sample(xi), sym.a0.sample(xi), {}, {}, {}};
  const XiJet& a2 = r.a2.value;

  r.b0 = inverse(a2);
  const XiJet db0 = derivative(r.b0);
  // b1 = -(b0 a1 + c d_xi(b0) d_t(a2)) b0
  r.b1 = Complex{-1.0} * ((r.b0 * r.a1.value + c1 * (db0 * r.a2.dt)) * r.b0);

  // b2 = -(b1 a1 + b0 a0 + c d_xi(b0) d_t(a1) + c d_xi(b1) d_t(a2)
  //        + c^2/2 d_xi^2(b0) d_t^2(a2)) b0
  const XiJet db1 = derivative(r.b1);
  const XiJet ddb0 = derivative(db0);
  Mat8 inner = r.b1.v * r.a1.value.v;
  inner.noalias() += r.b0.v * r.a0.value.v;
  inner.noalias() += c1 * (db0.v * r.a1.dt.v);
  inner.noalias() += c1 * (db1.v * r.a2.dt.v);
  inner.noalias() += (0.5 * c2) * (ddb0.v * r.a2.dtt.v);
  r.b2.noalias() = -(inner * r.b0.v);
  return r;
}

}  // namespace

ParametrixTerms parametrix(const SymbolSet& symbols, const Covector& xi, Composition conv) {
  const Recursion r = run_recursion(symbols, xi, conv);
  return {r.b0.v, r.b1.v, r.b2};
}

std::array<Mat8, 3> composition_defect(const SymbolSet& symbols, const Covector& xi,
                                       Composition conv) {
  const Recursion r = run_recursion(symbols, xi, conv);
  const auto [c1, c2] = factors(conv);
  const XiJet db0 = derivative(r.b0);
  const XiJet db1 = derivative(r.b1);
  const XiJet ddb0 = derivative(db0);

  std::array<Mat8, 3> out;
  out[0] = r.b0.v * r.a2.value.v - id8();
  out[1] = r.b0.v * r.a1.value.v + r.b1.v * r.a2.value.v + c1 * (db0.v * r.a2.dt.v);
  out[2] = r.b0.v * r.a0.value.v + r.b1.v * r.a1.value.v + r.b2 * r.a2.value.v +
           c1 * (db0.v * r.a1.dt.v) + c1 * (db1.v * r.a2.dt.v) +
           (0.5 * c2) * (ddb0.v * r.a2.dtt.v);
  return out;
}

}  // namespace sflrw
