#include <benchmark/benchmark.h>

#include "snb/gingham.hpp"
#include "snb/lattice.hpp"
#include "snb/lyapunov.hpp"

using namespace snb;

namespace {

const ModelParams kBulk{2.0, 0.6, 0.8, Neighborhood::EightCell, Boundary::Toroidal};

void BM_LatticeStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    LatticeStepper stepper(n, n, kBulk);
    LatticeState s = seed_random(n, n, kBulk, 0.05, 1);
    for (auto _ : state) {
        stepper.advance(s);
        benchmark::DoNotOptimize(s.cells.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_LatticeStep)->Arg(64)->Arg(256)->Arg(768);

void BM_SubgridAssemble(benchmark::State& state) {
    const auto w = static_cast<std::size_t>(state.range(0));
    const LatticeState s = seed_random(64, 64, kBulk, 0.05, 1);
    const SubgridJacobian jac(64, 64, kBulk, {8, 8, w, w});
    SparseMatrix out;
    for (auto _ : state) {
        jac.assemble(s, out);
        benchmark::DoNotOptimize(out.valuePtr());
    }
}
BENCHMARK(BM_SubgridAssemble)->Arg(16)->Arg(32);

// One cocycle iterate: J*Q followed by the QR update.
void BM_CocycleAccumulate(benchmark::State& state) {
    const auto w = static_cast<std::size_t>(state.range(0));
    const LatticeState s = relax(seed_random(64, 64, kBulk, 0.05, 1), kBulk, 500);
    const SparseMatrix j = SubgridJacobian(64, 64, kBulk, {8, 8, w, w}).assemble(s);
    CocycleAccumulator acc(2 * w * w);
    for (auto _ : state) acc.accumulate(j);
    state.counters["dim"] = static_cast<double>(2 * w * w);
}
BENCHMARK(BM_CocycleAccumulate)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GinghamNewton(benchmark::State& state) {
    const ModelParams p{2.0, 0.05, 0.99, Neighborhood::EightCell, Boundary::Toroidal};
    for (auto _ : state) benchmark::DoNotOptimize(find_fixed_point(crystal_seed(2.0), p));
}
BENCHMARK(BM_GinghamNewton);

}  // namespace
BENCHMARK_MAIN();
