#pragma once

#include <array>

#include "spectral_flrw/cosphere.hpp"
#include "spectral_flrw/symbol.hpp"

namespace sflrw {

/// Normalization of the cosphere trace integrals: the spinor trace is
/// divided by its dimension, which makes the flat geometry a1 = a2 = 1
/// produce 4 pi^2 for the volume term.
inline constexpr double kTraceNormalization = 1.0 / kSpinorDim;

/// kappa * int_{|xi|=1} tr(b0^2); equals 2 pi^2 (a1^3 + a2^3) up to quadrature error.
[[nodiscard]] double wres_volume_term(const SheetGeometry& geom, double t,
                                      const CosphereRule& rule = CosphereRule{});

struct B2Options {
  /// Integrate torsion (H != 0) contributions instead of rejecting them.
  bool allow_torsion = false;
  Composition composition = Composition::standard;
};

/// Cosphere integral of kappa tr(b2), split by its dependence on the Higgs field.
struct B2Terms {
  /// Phi-independent part (b2 with Phi = 0): the kinetic term.
  double kinetic = 0.0;
  std::array<double, 2> kinetic_per_sheet{};
  /// Part quadratic in the commutator [F, A]: the interaction potential.
  double potential = 0.0;
  /// -kappa tr(b0 F^2 b0) piece: a Phi-dependent shift of the volume term.
  double mass = 0.0;
  /// Full integral (kinetic + potential + mass).
  double total = 0.0;
  /// Imaginary part of the full integral (quadrature noise only).
  double imaginary = 0.0;
};

/// Throws DomainError if the geometry carries torsion and
/// `options.allow_torsion` is false.
[[nodiscard]] B2Terms wres_b2_term(const SheetGeometry& geom, double t,
                                   const CosphereRule& rule = CosphereRule{},
                                   const B2Options& options = {});

}  // namespace sflrw
