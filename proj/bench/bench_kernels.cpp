// Serial reference against the OpenMP kernels of the portfolio solver.
#include <benchmark/benchmark.h>

#include <random>

#include "monofourier/meanvar.hpp"

using namespace mfourier;

namespace {

MVContext make_context(Execution e, std::size_t nx, int level) {
    MVConfig cfg;
    cfg.nx = nx;
    cfg.b_level = level;
    cfg.execution = e;
    return MVContext(cfg);
}

Surface2D random_surface(const MVContext& ctx) {
    Surface2D s(ctx.x(), ctx.b());
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1e5);
    for (auto& v : s.values) v = u(rng);
    return s;
}

void BM_advance(benchmark::State& state, Execution e) {
    const MVContext ctx = make_context(e, static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
    const Surface2D s = random_surface(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(advance_time(ctx, s, AsymptoticForm::Zero).values.data());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.values.size()));
}

void BM_control(benchmark::State& state, Execution e) {
    const MVContext ctx = make_context(e, static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
    const Surface2D s = random_surface(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(apply_control(ctx, s, 10).values.values.data());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.values.size()));
}

} // namespace

BENCHMARK_CAPTURE(BM_advance, serial, Execution::Serial)->Args({512, 0})->Args({1024, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_advance, parallel, Execution::Parallel)->Args({512, 0})->Args({1024, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_control, serial, Execution::Serial)->Args({256, -1})->Args({512, 0})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_control, parallel, Execution::Parallel)->Args({256, -1})->Args({512, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
