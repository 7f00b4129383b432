#include "spectral_flrw/wodzicki.hpp"

#include "spectral_flrw/errors.hpp"

namespace sflrw {

double wres_volume_term(const SheetGeometry& geom, double t, const CosphereRule& rule) {
  const SymbolSet sym = build_symbols(geom, t);
  double sum = 0.0;
  for (const auto& node : rule.nodes()) {
    const Mat8 a2 = sym.a2(node.xi);
    const Mat8 b0 = a2.partialPivLu().inverse();
    sum += node.weight * (b0 * b0).trace().real();
  }
  return kTraceNormalization * sum;
}

B2Terms wres_b2_term(const SheetGeometry& geom, double t, const CosphereRule& rule,
                     const B2Options& options) {
  if (!geom.torsion_free() && !options.allow_torsion) {
    throw DomainError("torsion profiles are nonzero; pass allow_torsion to integrate them");
  }
  SheetGeometry free_geom = geom;
  free_geom.phi.amplitude = Complex{};

  const SymbolSet full = build_symbols(geom, t);
  const SymbolSet free = build_symbols(free_geom, t);
  const Covector probe{1.0, {0.0, 0.0, 0.0}};
  const Mat8 a0_phi = full.a0(probe) - free.a0(probe);

  B2Terms out;
  for (const auto& node : rule.nodes()) {
    const ParametrixTerms pf = parametrix(full, node.xi, options.composition);
    const ParametrixTerms p0 = parametrix(free, node.xi, options.composition);

    const Complex tr_full = kTraceNormalization * pf.b2.trace();
    const Complex tr_free = kTraceNormalization * p0.b2.trace();
    const double mass = -kTraceNormalization * (p0.b0 * a0_phi * p0.b0).trace().real();
    const double w = node.weight;

    out.kinetic += w * tr_free.real();
    out.kinetic_per_sheet[0] += w * kTraceNormalization * p0.b2.block<4, 4>(0, 0).trace().real();
    out.kinetic_per_sheet[1] += w * kTraceNormalization * p0.b2.block<4, 4>(4, 4).trace().real();
    out.mass += w * mass;
    out.potential += w * (tr_full.real() - tr_free.real() - mass);
    out.total += w * tr_full.real();
    out.imaginary += w * tr_full.imag();
  }
  return out;
}

}  // namespace sflrw
