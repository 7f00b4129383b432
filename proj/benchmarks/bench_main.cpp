#include <benchmark/benchmark.h>

#include "spectral_flrw/bessel.hpp"
#include "spectral_flrw/integrator.hpp"
#include "spectral_flrw/perturbation.hpp"
#include "spectral_flrw/symbol.hpp"
#include "spectral_flrw/wodzicki.hpp"

using namespace sflrw;

namespace {

SheetGeometry geometry() {
  SheetGeometry g;
  g.a1 = Profile::exponential(1.3, 0.4);
  g.a2 = Profile::power_law(0.7, 0.5);
  g.phi.amplitude = {0.6, 0.3};
  return g;
}

void BM_Parametrix(benchmark::State& state) {
  const SymbolSet sym = build_symbols(geometry(), 1.1);
  const Covector xi{0.3, {0.5, -0.2, 0.7}};
  for (auto _ : state) benchmark::DoNotOptimize(parametrix(sym, xi));
}
BENCHMARK(BM_Parametrix);

void BM_VolumeTerm(benchmark::State& state) {
  const CosphereRule rule(static_cast<int>(state.range(0)));
  const SheetGeometry g = geometry();
  for (auto _ : state) benchmark::DoNotOptimize(wres_volume_term(g, 1.1, rule));
}
BENCHMARK(BM_VolumeTerm)->Arg(32)->Arg(96)->Unit(benchmark::kMicrosecond);

void BM_B2Term(benchmark::State& state) {
  const CosphereRule rule(static_cast<int>(state.range(0)));
  const SheetGeometry g = geometry();
  for (auto _ : state) benchmark::DoNotOptimize(wres_b2_term(g, 1.1, rule));
  state.counters["nodes"] = static_cast<double>(rule.nodes().size());
}
BENCHMARK(BM_B2Term)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_IntegrateRk4(benchmark::State& state) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  const PhaseState ic = solve_constraint_ic(1.1, 0.9, 1.0, Branch::plus, p);
  IntegratorConfig c;
  c.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(ic, p, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateRk4)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_IntegrateRk45(benchmark::State& state) {
  const CosmoParams p = CosmoParams::effective(6.0, 1.0);
  const PhaseState ic = solve_constraint_ic(1.1, 0.9, 1.0, Branch::plus, p);
  IntegratorConfig c;
  c.method = Method::rk45;
  c.step = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(ic, p, c));
}
BENCHMARK(BM_IntegrateRk45)->Unit(benchmark::kMicrosecond);

void BM_Bessel(benchmark::State& state) {
  const double nu = radiation_order();
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j(nu, x));
}
BENCHMARK(BM_Bessel)->Arg(5)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
