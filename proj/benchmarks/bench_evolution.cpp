// Microbenchmarks for the hot paths: single operator steps, full evolutions,
// the poissonized mixture and the weighted inner product.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "bllt/environment.hpp"
#include "bllt/evolution.hpp"
#include "bllt/lattice_function.hpp"
#include "bllt/markov.hpp"

namespace {

using namespace bllt;

Environment bench_env(Site half) {
    return Environment::generate(LawDescriptor::parse("uniform:0.1,0.5"), -half,
                                 half, 42);
}

LatticeFunction wide_indicator_mix(Site half) {
    std::vector<double> vals(static_cast<std::size_t>(2 * half + 1), 0.0);
    for (Site k = -half; k <= half; ++k) {
        vals[static_cast<std::size_t>(k + half)] =
            1.0 / (1.0 + static_cast<double>(k > 0 ? k : -k));
    }
    return {-half, std::move(vals)};
}

void BM_AdjointStep(benchmark::State& state) {
    const auto half = static_cast<Site>(state.range(0));
    const Environment env = bench_env(half + 2);
    const LatticeFunction u = wide_indicator_mix(half);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_P_adjoint(env, u));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(2 * half + 1));
}
BENCHMARK(BM_AdjointStep)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 15);

void BM_OperatorStep(benchmark::State& state) {
    const auto half = static_cast<Site>(state.range(0));
    const Environment env = bench_env(half + 2);
    const LatticeFunction u = wide_indicator_mix(half);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_P(env, u));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(2 * half + 1));
}
BENCHMARK(BM_OperatorStep)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 15);

void BM_ForwardEvolution(benchmark::State& state) {
    const auto n = static_cast<long long>(state.range(0));
    const Environment env = bench_env(static_cast<Site>(n) + 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_pmf(env, n));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ForwardEvolution)->Arg(256)->Arg(1024)->Arg(4096);

void BM_Poissonized(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    const Environment env = bench_env(512);
    for (auto _ : state) {
        benchmark::DoNotOptimize(poissonized(env, t, 1e-9));
    }
}
BENCHMARK(BM_Poissonized)->Arg(10)->Arg(100);

void BM_InnerPi(benchmark::State& state) {
    const auto half = static_cast<Site>(state.range(0));
    const Environment env = bench_env(half + 2);
    const LatticeFunction u = wide_indicator_mix(half);
    for (auto _ : state) {
        benchmark::DoNotOptimize(inner_pi(env, u, u));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(2 * half + 1));
}
BENCHMARK(BM_InnerPi)->Arg(1 << 12)->Arg(1 << 16);

void BM_SampleEndpoints(benchmark::State& state) {
    const auto n = static_cast<long long>(state.range(0));
    const Environment env = bench_env(static_cast<Site>(n) + 2);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_endpoints(env, n, 64, seed++));
    }
    state.SetItemsProcessed(state.iterations() * 64 * n);
}
BENCHMARK(BM_SampleEndpoints)->Arg(256)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
