#include <benchmark/benchmark.h>

#include <memory>

#include "emi/assembly.hpp"
#include "emi/krylov.hpp"
#include "emi/multigrid.hpp"
#include "emi/preconditioners.hpp"
#include "emi/spectra.hpp"

using namespace emi;

namespace {

EmiSystem system_for(benchmark::State& state, double tau = 0.01) {
  return assemble_system(build_grid({static_cast<int>(state.range(0))}), {tau});
}

void BM_Assemble(benchmark::State& state) {
  const auto dofs = build_grid({static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(dofs, {0.01}));
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SpMV(benchmark::State& state) {
  const auto sys = system_for(state);
  std::vector<double> y(sys.size());
  for (auto _ : state) {
    sys.matrix.multiply(sys.rhs, y);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * sys.matrix.nnz()));
}
BENCHMARK(BM_SpMV)->Arg(128)->Arg(512);

void BM_Cg(benchmark::State& state) {
  const auto sys = system_for(state);
  const IdentityPreconditioner m;
  SolveConfig cfg;
  cfg.record_history = false;
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(sys.matrix, sys.rhs, m, cfg));
}
BENCHMARK(BM_Cg)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Ilu0Setup(benchmark::State& state) {
  const auto sys = system_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(Ilu0Preconditioner(sys.matrix));
}
BENCHMARK(BM_Ilu0Setup)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_VCycle(benchmark::State& state) {
  const auto sys = system_for(state);
  const auto h = build_hierarchy(sys);
  std::vector<double> x(sys.size());
  for (auto _ : state) {
    h.v_cycle(sys.rhs, x);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_VCycle)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DenseSpectrum(benchmark::State& state) {
  const auto sys = system_for(state, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dense_spectrum(sys.matrix));
}
BENCHMARK(BM_DenseSpectrum)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
