// Serial vs OpenMP-parallel residual assembly on a shared workload: the
// log-spiral tensor against the disk blow-up solution.

#include <benchmark/benchmark.h>

#include "qcf/exact_solutions.hpp"
#include "qcf/verifier.hpp"

using namespace qcf;

namespace {

GridSpec workload(double h) {
    GridSpec g;
    g.domain = DomainDescriptor::unit_disk();
    g.h = h;
    g.margin = 0.1;
    g.singular_distance = [](Complex z) { return std::abs(z); };
    return g;
}

void bench_residual(benchmark::State& state, ExecutionPolicy policy) {
    const GridSpec g = workload(1.0 / state.range(0));
    const auto u = lb_disk_field();
    const auto A = ConductivityTensor::log_spiral();
    const auto f = Nonlinearity::exp();
    for (auto _ : state) {
        auto rep = strong_residual(u, A, f, g, policy);
        benchmark::DoNotOptimize(rep.linf);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(g.interior_points().size()));
}

void BM_StrongResidualSerial(benchmark::State& state) {
    bench_residual(state, ExecutionPolicy::Serial);
}

void BM_StrongResidualParallel(benchmark::State& state) {
    bench_residual(state, ExecutionPolicy::Parallel);
}

}  // namespace

BENCHMARK(BM_StrongResidualSerial)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_StrongResidualParallel)->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
