#include <benchmark/benchmark.h>

#include "spillover/spillover.hpp"

namespace {

using namespace spillover;

ContestSpec logistic() { return make_family("logistic_spillover", {{"lambda", 4}}); }

void BM_Matrix(benchmark::State& state) {
    const ContestSpec spec = logistic();
    const Grid grid(static_cast<std::size_t>(state.range(0)), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(solve_density_matrix(spec, Player::two, grid));
    state.SetComplexityN(state.range(0));
}

void BM_Picard(benchmark::State& state) {
    const ContestSpec spec = logistic();
    const Grid grid(static_cast<std::size_t>(state.range(0)), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(solve_density_picard(spec, Player::two, grid));
    state.SetComplexityN(state.range(0));
}

void BM_CdfDirect(benchmark::State& state) {
    const ContestSpec spec = logistic();
    const Grid grid(static_cast<std::size_t>(state.range(0)), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(solve_cdf_direct(spec, Player::two, grid));
    state.SetComplexityN(state.range(0));
}

void BM_AssembleAndVerify(benchmark::State& state) {
    const ContestSpec spec = logistic();
    const Grid grid(static_cast<std::size_t>(state.range(0)), 0.9);
    for (auto _ : state) {
        const Equilibrium eq = assemble(spec, grid);
        benchmark::DoNotOptimize(verify(eq));
    }
}

BENCHMARK(BM_Matrix)->RangeMultiplier(2)->Range(250, 4000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_Picard)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_CdfDirect)->RangeMultiplier(2)->Range(250, 4000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_AssembleAndVerify)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
