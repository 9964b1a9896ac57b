// Serial vs OpenMP timings for the data-parallel kernels.
#include <benchmark/benchmark.h>

#include "bubblelab/bubble.hpp"
#include "bubblelab/norms.hpp"
#include "bubblelab/riesz.hpp"

using namespace bubblelab;

namespace {

const RadialGrid& bench_grid() {
    static const RadialGrid g = make_graded_grid(4.0, 0.02, 20.0, 1.02);
    return g;
}

const RadialField& bench_density() {
    static const RadialField f = [] {
        const BubbleSpec spec{3, 3.0, 1.0};
        RadialField Z = bubble_profile(spec, bench_grid());
        for (auto& v : Z.values)
            v = v * v * v * v * v * v;
        Z.tail = TailModel{1.0, 6.0};
        return Z;
    }();
    return f;
}

void bm_table_build(benchmark::State& state, Exec exec, int n) {
    for (auto _ : state) {
        auto table = build_ring_kernel_table(bench_grid(), n, 1.0, exec);
        benchmark::DoNotOptimize(table.weights.data());
    }
}

void bm_convolve(benchmark::State& state, Exec exec) {
    static const RingKernelTable table = build_ring_kernel_table(bench_grid(), 3, 1.0);
    for (auto _ : state) {
        auto q = riesz_convolve(bench_density(), table, exec);
        benchmark::DoNotOptimize(q.values.data());
    }
}

void bm_holder(benchmark::State& state, Exec exec) {
    static const RadialField Z = bubble_profile(BubbleSpec{6, 24.0, 1.0},
                                                make_grid(2.0, 6000, GridScheme::Uniform));
    for (auto _ : state) {
        double h = holder_norm(Z, 0.5, 2.0, exec);
        benchmark::DoNotOptimize(h);
    }
}

void bm_oracle(benchmark::State& state, Exec exec) {
    static const RadialField f = [] {
        RadialField d = bench_density();
        RadialGrid g = make_graded_grid(2.0, 0.02, 8.0, 1.05);
        return sample_field(g, [&](double r) { return d(r); }, d.tail);
    }();
    for (auto _ : state) {
        auto q = riesz_oracle(f, 3, 1.0, 32, {0.0, 1.0, 2.0}, exec);
        benchmark::DoNotOptimize(q.values.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(bm_table_build, serial_n3, Exec::Serial, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_table_build, openmp_n3, Exec::Par, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_table_build, serial_n6, Exec::Serial, 6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_table_build, openmp_n6, Exec::Par, 6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_convolve, serial, Exec::Serial)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_convolve, openmp, Exec::Par)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(bm_holder, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_holder, openmp, Exec::Par)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_oracle, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_oracle, openmp, Exec::Par)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
