#include <benchmark/benchmark.h>

#include "condtab/diophantine.hpp"
#include "condtab/markov.hpp"
#include "condtab/tablespace.hpp"

using namespace condtab;

namespace {

ConditionalSpec spec_2x3x2(std::int64_t N) {
    ConditionalSpec s;
    s.I = 2;
    s.J = 3;
    s.K = 2;
    s.N = N;
    s.c = {Rational(1, 2), Rational(1, 3), Rational(1, 4),
           Rational(1, 2), Rational(2, 3), Rational(3, 4)};
    return s;
}

ConditionalSpec spec_2x2x2_n50() {
    ConditionalSpec s;
    s.I = 2;
    s.J = 2;
    s.K = 2;
    s.N = 50;
    s.c = {Rational(3, 5), Rational(1, 5), Rational(2, 5), Rational(4, 5)};
    return s;
}

} // namespace

static void BM_CountSolutionsDP(benchmark::State& state) {
    const DiophEq eq{{2, 3, 4}, state.range(0)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_solutions(eq, Positivity::Strict));
    }
}
BENCHMARK(BM_CountSolutionsDP)->Arg(240)->Arg(24000);

static void BM_CountFiber(benchmark::State& state) {
    const ConditionalSpec spec = spec_2x3x2(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_fiber(spec, Positivity::Strict, {.per_margin_limit = 0}));
    }
}
BENCHMARK(BM_CountFiber)->Arg(240)->Arg(2400)->Arg(24000)->Unit(benchmark::kMillisecond);

static void BM_CountFiberParallel(benchmark::State& state) {
    const ConditionalSpec spec = spec_2x3x2(24000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_fiber(
            spec, Positivity::Strict, {.jobs = (int)state.range(0), .per_margin_limit = 0}));
    }
}
BENCHMARK(BM_CountFiberParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_EnumerateFiber(benchmark::State& state) {
    const ConditionalSpec spec = spec_2x2x2_n50();
    for (auto _ : state) {
        std::uint64_t n = 0;
        for_each_table(spec, 1u << 20, [&](const Table3&) {
            ++n;
            return true;
        });
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_EnumerateFiber)->Unit(benchmark::kMillisecond);

static void BM_VerifyConnectivity(benchmark::State& state) {
    const ConditionalSpec spec = spec_2x3x2(24);
    const MoveSet basis = candidate_basis(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_connectivity(spec, basis, 1u << 20));
    }
}
BENCHMARK(BM_VerifyConnectivity)->Unit(benchmark::kMillisecond);

static void BM_ApproxCountFiber(benchmark::State& state) {
    const ConditionalSpec spec = spec_2x3x2(240);
    for (auto _ : state) {
        benchmark::DoNotOptimize(approx_count_fiber(spec));
    }
}
BENCHMARK(BM_ApproxCountFiber);

BENCHMARK_MAIN();
