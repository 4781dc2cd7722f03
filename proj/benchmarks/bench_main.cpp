#include <benchmark/benchmark.h>

#include <random>

#include "odeim/interpolant.hpp"
#include "odeim/linalg.hpp"
#include "odeim/models.hpp"
#include "odeim/pod.hpp"
#include "odeim/rng.hpp"
#include "odeim/selection.hpp"

namespace {

using namespace odeim;

const Basis& toy_basis(Index n) {
    static const Matrix snapshots = [] {
        ToyFunctionSpec spec;
        spec.grid_size = 2048;
        Matrix s(spec.grid_size, 200);
        for (Index k = 0; k < s.cols(); ++k) {
            const double xi = 1.0 + 2.0 * static_cast<double>(k) / 199.0;
            s.col(k) = toy_function(spec, xi);
        }
        return s;
    }();
    static const SvdResult svd = thin_svd(snapshots);
    thread_local Basis basis;
    if (basis.dim() != n) basis = pod_basis_from_svd(svd, n);
    return basis;
}

void bm_thin_svd(benchmark::State& state) {
    const Index rows = state.range(0), cols = state.range(1);
    Rng rng(7);
    std::normal_distribution<double> gauss;
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) a(i, j) = gauss(rng);
    for (auto _ : state) benchmark::DoNotOptimize(thin_svd(a));
}
BENCHMARK(bm_thin_svd)->Args({512, 64})->Args({2048, 128});

void bm_qdeim(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qdeim(basis));
}
BENCHMARK(bm_qdeim)->Arg(20)->Arg(50)->Arg(100);

void bm_odeim_e(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    const Index m = 2 * state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(odeim_e(basis, m));
}
BENCHMARK(bm_odeim_e)->Arg(20)->Arg(50)->Arg(100);

void bm_odeim_c(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    const Index m = 2 * state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(odeim_c(basis, m));
}
BENCHMARK(bm_odeim_c)->Arg(20)->Arg(50)->Arg(100);

void bm_odeim_d(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    const Index m = 2 * state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(odeim_d(basis, m));
}
BENCHMARK(bm_odeim_d)->Arg(20)->Arg(50)->Arg(100);

void bm_kdeim(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kdeim(basis, 11));
}
BENCHMARK(bm_kdeim)->Arg(20)->Arg(50);

void bm_build_interpolant(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    const PointSet points = odeim_e(basis, 2 * state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_interpolant(basis, points));
}
BENCHMARK(bm_build_interpolant)->Arg(20)->Arg(50)->Arg(100);

void bm_approximate(benchmark::State& state) {
    const Basis& basis = toy_basis(state.range(0));
    const PointSet points = odeim_e(basis, 2 * state.range(0));
    const Interpolant interp = build_interpolant(basis, points);
    ToyFunctionSpec spec;
    spec.grid_size = 2048;
    const Vector f = toy_function(spec, 2.345);
    Vector sampled(static_cast<Index>(points.size()));
    for (size_t i = 0; i < points.size(); ++i)
        sampled[static_cast<Index>(i)] = f[points[i]];
    for (auto _ : state) benchmark::DoNotOptimize(approximate(interp, sampled));
}
BENCHMARK(bm_approximate)->Arg(20)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
