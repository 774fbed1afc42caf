#include <benchmark/benchmark.h>

#include <memory>

#include "biostab/neutral.hpp"
#include "biostab/nrk.hpp"
#include "biostab/stability.hpp"
#include "biostab/steady.hpp"

using namespace biostab;

namespace {

std::shared_ptr<const BasicState> baseline_state(std::size_t n) {
    return std::make_shared<const BasicState>(solve_basic_state(SuspensionParams{}, n));
}

}  // namespace

static void BM_BasicState(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_basic_state(SuspensionParams{}, n));
}
BENCHMARK(BM_BasicState)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ShiftInvertSpectrum(benchmark::State& state) {
    const auto st = baseline_state(static_cast<std::size_t>(state.range(0)));
    const ModeProblem mp = make_mode_problem(st, 3.0, 3500.0);
    for (auto _ : state) benchmark::DoNotOptimize(growth_spectrum(mp));
}
BENCHMARK(BM_ShiftInvertSpectrum)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_DenseSpectrum(benchmark::State& state) {
    const auto st = baseline_state(100);
    const ModeProblem mp = make_mode_problem(st, 3.0, 3500.0);
    SpectrumOptions opts;
    opts.method = SpectrumMethod::dense;
    for (auto _ : state) benchmark::DoNotOptimize(growth_spectrum(mp, opts));
}
BENCHMARK(BM_DenseSpectrum)->Unit(benchmark::kMillisecond);

static void BM_NeutralPoint(benchmark::State& state) {
    const auto st = baseline_state(200);
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_neutral_R(mp, {0.0, 10000.0}));
}
BENCHMARK(BM_NeutralPoint)->Unit(benchmark::kMillisecond);

static void BM_NrkRefinement(benchmark::State& state) {
    const auto st = baseline_state(static_cast<std::size_t>(state.range(0)));
    const ModeProblem mp = make_mode_problem(st, 3.0, 0.0);
    const NeutralPoint guess = solve_neutral_R(mp, {0.0, 10000.0});
    for (auto _ : state) benchmark::DoNotOptimize(refine_nrk(guess, mp));
}
BENCHMARK(BM_NrkRefinement)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
