#include <random>

#include <benchmark/benchmark.h>

#include "rydpol/closure.hpp"
#include "rydpol/equalsolve.hpp"
#include "rydpol/ladder.hpp"
#include "rydpol/numerics.hpp"

using namespace rydpol;

namespace
{
    SchemeParams tripod(double delta)
    {
        SchemeParams p;
        p.delta1 = p.delta2 = delta;
        p.rabi = rabi_for_velocity_ratio(0.5);
        return p;
    }

    PairField field(std::mt19937_64& rng)
    {
        std::normal_distribution<double> g;
        PairField f;
        for (int i = 0; i < 4; ++i)
            f(i / 2, i % 2) = {g(rng), g(rng)};
        return f;
    }
}

static void closure_kernel_build(benchmark::State& state)
{
    const DerivedContext ctx = make_context(tripod(1.5));
    double v = 0.5;
    for (auto _ : state)
    {
        ClosureKernel k(ctx, Interaction::finite(v));
        benchmark::DoNotOptimize(k);
        v += 1e-9;
    }
}
BENCHMARK(closure_kernel_build);

static void closure_kernel_apply(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    const ClosureKernel k(make_context(tripod(1.5)), Interaction::finite(3.0));
    const PairField es = field(rng), se = field(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(k.apply(es, se));
}
BENCHMARK(closure_kernel_apply);

static void block_tridiagonal(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    BandedBlockSystem<4> sys{BlockTridiagonalMatrix<4>(n), std::vector<BlockVector<4>>(n)};
    for (std::size_t i = 0; i < n; ++i)
    {
        sys.matrix.sub[i] = BlockMatrix<4>::Random();
        sys.matrix.super[i] = BlockMatrix<4>::Random();
        sys.matrix.diag[i] = BlockMatrix<4>::Random() + 8.0 * BlockMatrix<4>::Identity();
        for (int k = 0; k < 4; ++k)
            sys.rhs[i](k) = {g(rng), g(rng)};
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(block_tridiagonal_solve(sys));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(block_tridiagonal)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void crank_nicolson_step(benchmark::State& state)
{
    const ComRelGrid grid = ComRelGrid::make(30.0);
    const CrankNicolsonStepper<4> stepper(closed_generator(make_context(tripod(1.0)), grid, ClosedMode::piecewise),
                                          grid.hR);
    std::vector<BlockVector<4>> profile(grid.size(), BlockVector<4>(1.0, 0.0, 0.0, 0.0));
    for (auto _ : state)
    {
        stepper.step(profile);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(crank_nicolson_step);

static void ladder_march(benchmark::State& state)
{
    SchemeParams p;
    p.delta1 = 2.5;
    p.delta2 = -2.5;
    const TwoPointGrid grid = TwoPointGrid::over(30.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_double_ladder(p, grid));
}
BENCHMARK(ladder_march)->Arg(301)->Arg(1201)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
