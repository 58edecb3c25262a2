#include <benchmark/benchmark.h>

#include "pradius/optimizer.hpp"
#include "pradius/rng.hpp"
#include "pradius/simulate.hpp"

using namespace pradius;

namespace {

MatrixFamily example3() {
    Matrix a1(2, 2), a2(2, 2);
    a1 << -0.87, -0.77, 1.17, -1.09;
    a2 << 0.14, 0.40, 0.89, -0.73;
    return MatrixFamily({a1, a2});
}

MarkovModel example4() {
    Matrix a1(2, 2), a2(2, 2), q(2, 2);
    a1 << 0.77, 0.80, -0.60, 0.87;
    a2 << -0.77, 0.83, -0.70, -0.70;
    q << 0.70, 0.30, 0.43, 0.57;
    return MarkovModel(MatrixFamily({a1, a2}), q);
}

}  // namespace

static void BM_SpectralRadius(benchmark::State& state) {
    SplitMix64 rng(1);
    const int n = static_cast<int>(state.range(0));
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = rng.next_range(-1.0, 1.0);
    }
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_HkEnumeration(benchmark::State& state) {
    const MatrixFamily fam = example3();
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(h_k(fam, 1, k, EnumerationBudget{1u << 22}));
    state.SetComplexityN(1LL << k);
}
BENCHMARK(BM_HkEnumeration)->Arg(8)->Arg(12)->Arg(16)->Complexity();

static void BM_JsrBracket(benchmark::State& state) {
    const MatrixFamily fam = example3();
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(jsr_bracket(fam, depth, EnumerationBudget{1u << 22}));
    }
}
BENCHMARK(BM_JsrBracket)->Arg(8)->Arg(12);

static void BM_LambdaW(benchmark::State& state) {
    const MatrixFamily fam = example3();
    const WeightSet w = materialize(detail::random_point(2, 2, 7));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_w(fam, w));
}
BENCHMARK(BM_LambdaW);

static void BM_MarkovLambda(benchmark::State& state) {
    const MarkovModel model = example4();
    const WeightSet flat = materialize(detail::random_point(4, 2, 9));
    const MarkovWeightSet grid = make_markov_unchecked(2, flat.weights);
    for (auto _ : state) benchmark::DoNotOptimize(markov_lambda(model, grid));
}
BENCHMARK(BM_MarkovLambda);

static void BM_ScalarWeightGrid(benchmark::State& state) {
    const MatrixFamily fam = example3();
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(scalar_weight_bound(fam, grid));
}
BENCHMARK(BM_ScalarWeightGrid)->Arg(21)->Arg(41)->Arg(81);

static void BM_OptimizeRestart(benchmark::State& state) {
    const MatrixFamily fam = example3();
    OptimizerConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = 25;
    for (auto _ : state) benchmark::DoNotOptimize(optimize(fam, 2, cfg));
}
BENCHMARK(BM_OptimizeRestart)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
    const MatrixFamily fam = example3();
    const int samples = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(fam, 1, 30, samples, 5));
    state.SetItemsProcessed(state.iterations() * samples * 30);
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
