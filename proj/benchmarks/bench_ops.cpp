#include <benchmark/benchmark.h>

#include "gradratio/assess.hpp"
#include "gradratio/grid_ops.hpp"
#include "gradratio/phantom.hpp"
#include "gradratio/projector.hpp"
#include "gradratio/prox.hpp"
#include "gradratio/rng.hpp"

using namespace gradratio;

namespace {

Geometry parallel_geom(int n) {
    Geometry g;
    g.grid_size = n;
    g.theta_max_deg = 150.0;
    return g;
}

void BM_BuildProjector(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SparseProjector A = build_projector(parallel_geom(n));
        benchmark::DoNotOptimize(A.val.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildProjector)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_Forward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SparseProjector A = build_projector(parallel_geom(n));
    const Image u = shepp_logan(n, PhantomVariant::high_contrast);
    Sinogram f(A.geometry.detector_count, A.geometry.angle_count);
    for (auto _ : state) {
        forward_into(A, u, f);
        benchmark::DoNotOptimize(f.data.data());
    }
}
BENCHMARK(BM_Forward)->Arg(64)->Arg(128)->Arg(256);

void BM_Adjoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SparseProjector A = build_projector(parallel_geom(n));
    Sinogram f(A.geometry.detector_count, A.geometry.angle_count, 1.0);
    Image u(n, n);
    for (auto _ : state) {
        adjoint_into(A, f, u);
        benchmark::DoNotOptimize(u.data.data());
    }
}
BENCHMARK(BM_Adjoint)->Arg(64)->Arg(128)->Arg(256);

void BM_GradientPair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Image u = shepp_logan(n, PhantomVariant::high_contrast);
    GradientField g(n, n);
    Image lap(n, n);
    for (auto _ : state) {
        gradient_into(u, g);
        divergence_adjoint_into(g, lap);
        benchmark::DoNotOptimize(lap.data.data());
    }
}
BENCHMARK(BM_GradientPair)->Arg(64)->Arg(256);

void BM_Shrink(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GradientField v(n, n);
    Rng rng(1);
    for (double& x : v.x) x = rng.next_normal();
    for (double& x : v.y) x = rng.next_normal();
    GradientField out(n, n);
    for (auto _ : state) {
        shrink_into(v, 0.5, out);
        benchmark::DoNotOptimize(out.x.data());
    }
}
BENCHMARK(BM_Shrink)->Arg(256);

void BM_HUpdateTau(benchmark::State& state) {
    Rng rng(2);
    for (auto _ : state) {
        const double D = std::pow(10.0, -8.0 + 16.0 * rng.next_double());
        benchmark::DoNotOptimize(h_update_tau(D));
    }
}
BENCHMARK(BM_HUpdateTau);

void BM_Ssim(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Image a = shepp_logan(n, PhantomVariant::high_contrast);
    const Image b = shepp_logan(n, PhantomVariant::low_contrast);
    for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
