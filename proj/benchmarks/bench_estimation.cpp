#include <benchmark/benchmark.h>

#include <random>

#include "gamefit/estimation.hpp"
#include "gamefit/scenarios.hpp"

using namespace gamefit;

namespace {

ConstraintSystem random_system(int rows, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0; };
    ConstraintSystem system;
    system.rows.resize(rows, p);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < p; ++j) system.rows(i, j) = uniform();
        system.row_meta.push_back({0, i, Provenance::Static});
    }
    return system;
}

void BM_EstimateLinf(benchmark::State& state) {
    const int p = 4;
    ConstraintSystem system = random_system(static_cast<int>(state.range(0)), p, 3);
    ParameterSpace space = ParameterSpace::box(Eigen::VectorXd::Constant(p, -10.0),
                                               Eigen::VectorXd::Constant(p, 10.0));
    for (auto _ : state) {
        EstimationResult result = estimate_linf(system, space);
        benchmark::DoNotOptimize(result.epsilon_hat);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EstimateLinf)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_EstimateL2(benchmark::State& state) {
    ConstraintSystem system = random_system(static_cast<int>(state.range(0)), 2, 5);
    ParameterSpace space =
        ParameterSpace::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(10, 10));
    for (auto _ : state) {
        L2Estimate est = estimate_l2(system, space);
        benchmark::DoNotOptimize(est.loss);
    }
}
BENCHMARK(BM_EstimateL2)->Arg(16)->Arg(256);

void BM_VertexEnumeration(benchmark::State& state) {
    ConstraintSystem system = random_system(static_cast<int>(state.range(0)), 3, 11);
    ParameterSpace space = ParameterSpace::box(Eigen::VectorXd::Constant(3, -5.0),
                                               Eigen::VectorXd::Constant(3, 5.0));
    EstimationResult result = estimate_linf(system, space);
    for (auto _ : state) {
        VertexEnumeration ve = enumerate_vertices(result.polyhedron);
        benchmark::DoNotOptimize(ve.vertices.size());
    }
}
BENCHMARK(BM_VertexEnumeration)->Arg(64)->Arg(512)->Arg(2048);

void BM_BertrandPipeline(benchmark::State& state) {
    BertrandConfig config;
    config.num_contexts = static_cast<int>(state.range(0));
    config.grid_points = 65;
    config.sweep_points = 50;
    for (auto _ : state) {
        BertrandReport report = run_bertrand(config);
        benchmark::DoNotOptimize(report.estimates[0].epsilon_hat);
    }
}
BENCHMARK(BM_BertrandPipeline)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
