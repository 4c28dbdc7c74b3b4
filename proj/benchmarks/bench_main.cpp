#include "hopgdof/detmodel.hpp"
#include "hopgdof/formulas.hpp"
#include "hopgdof/montecarlo.hpp"
#include "hopgdof/schemes.hpp"
#include "hopgdof/stacking.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hopgdof;

static void BM_SumGdofGrid(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state)
        for (int k = 0; k <= 100; ++k) benchmark::DoNotOptimize(sum_gdof_fp(Rational(k, 100), L));
}
BENCHMARK(BM_SumGdofGrid)->Arg(2)->Arg(5)->Arg(10);

static void BM_SynthVerify(benchmark::State& state) {
    const Rational a(state.range(0), 100);
    const int L = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(verify_scheme(synth(a, L)));
}
BENCHMARK(BM_SynthVerify)->Args({30, 2})->Args({30, 5})->Args({52, 3})->Args({60, 5})->Args({90, 4});

static void BM_OnionTemplate(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    SchemeTemplate tpl = onion_template(L, L, false);
    for (auto _ : state) benchmark::DoNotOptimize(solve_template(tpl, Rational(13, 25)));
}
BENCHMARK(BM_OnionTemplate)->DenseRange(2, 5);

static void BM_StackGreedy(benchmark::State& state) {
    std::mt19937_64 rng(1);
    StackInstance s;
    for (int i = 0; i < state.range(0); ++i)
        s.items.push_back({"u" + std::to_string(i), Rational(static_cast<long>(rng() % 100), 100),
                           Rational(static_cast<long>(rng() % 10), 100)});
    for (auto _ : state) benchmark::DoNotOptimize(feasible_greedy(s));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StackGreedy)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

static void BM_StackBruteforce(benchmark::State& state) {
    StackInstance s;
    for (int i = 0; i < state.range(0); ++i) s.items.push_back({"u" + std::to_string(i), Rational(1, 2), Rational(1, 4)});
    for (auto _ : state) benchmark::DoNotOptimize(feasible_bruteforce(s));
}
BENCHMARK(BM_StackBruteforce)->DenseRange(4, 8, 2);

static void BM_ProbeSumset1(benchmark::State& state) {
    det::Sumset1Config cfg;
    cfg.P = static_cast<std::uint64_t>(state.range(0));
    cfg.samples = 4;
    for (auto _ : state)
        benchmark::DoNotOptimize(det::probe_sumset1(Rational(1), Rational(1, 2), Rational(3, 4), Rational(1, 4), cfg));
}
BENCHMARK(BM_ProbeSumset1)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_SimulateSumrate(benchmark::State& state) {
    const Rational a(state.range(0), 10);
    const int L = static_cast<int>(state.range(1));
    MultiHopScheme s = synth(a, L);
    mc::SimConfig cfg = mc::default_config();
    mc::ChannelRealization ch = mc::sample_channels(cfg, L, 0);
    for (auto _ : state) benchmark::DoNotOptimize(mc::simulate_sumrate(s, ch, 1e6));
}
BENCHMARK(BM_SimulateSumrate)->Args({5, 2})->Args({5, 3})->Args({40, 3})->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
