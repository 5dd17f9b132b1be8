#include <benchmark/benchmark.h>

#include <random>

#include "gamefit/estimation.hpp"
#include "gamefit/lp.hpp"

using namespace gamefit;

namespace {

// Epigraph-shaped LP with `rows` error constraints over p parameters.
StandardLP epigraph_lp(int rows, int p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0; };
    StandardLP lp;
    lp.objective = Eigen::VectorXd::Zero(p + 1);
    lp.objective(p) = 1.0;
    lp.ineq_matrix = Eigen::MatrixXd::Zero(rows + 2 * p, p + 1);
    lp.ineq_bounds = Eigen::VectorXd::Zero(rows + 2 * p);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < p; ++j) lp.ineq_matrix(i, j) = uniform();
        lp.ineq_matrix(i, p) = -1.0;
    }
    for (int j = 0; j < p; ++j) {
        lp.ineq_matrix(rows + 2 * j, j) = 1.0;
        lp.ineq_bounds(rows + 2 * j) = 10.0;
        lp.ineq_matrix(rows + 2 * j + 1, j) = -1.0;
        lp.ineq_bounds(rows + 2 * j + 1) = 10.0;
    }
    lp.var_bounds.assign(static_cast<std::size_t>(p) + 1,
                         VariableBounds{-std::numeric_limits<double>::infinity(),
                                        std::numeric_limits<double>::infinity()});
    lp.var_bounds.back() = {0.0, std::numeric_limits<double>::infinity()};
    return lp;
}

void BM_SolveEpigraphLp(benchmark::State& state) {
    StandardLP lp = epigraph_lp(static_cast<int>(state.range(0)), 4, 99);
    for (auto _ : state) {
        LpSolution sol = solve_lp(lp);
        benchmark::DoNotOptimize(sol.objective_value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveEpigraphLp)->RangeMultiplier(4)->Range(64, 8192)->Complexity();

void BM_CheckFeasible(benchmark::State& state) {
    StandardLP lp = epigraph_lp(static_cast<int>(state.range(0)), 4, 7);
    for (auto _ : state) {
        bool ok = check_feasible(lp.ineq_matrix, lp.ineq_bounds);
        benchmark::DoNotOptimize(ok);
    }
}
BENCHMARK(BM_CheckFeasible)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
