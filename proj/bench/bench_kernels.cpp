/**
 * @file bench_kernels.cpp
 * @brief Serial versus OpenMP versions of the hot kernels on graph-sized inputs.
 */
#include <random>

#include <benchmark/benchmark.h>

#include "drg/graph.hpp"
#include "drg/kernels.hpp"

namespace {

drg::Matrix<double> random_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1, 1);
    drg::Matrix<double> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    return m;
}

drg::Matrix<drg::Rational> random_rational_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(-9, 9), q(1, 5);
    drg::Matrix<drg::Rational> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = drg::Rational(d(rng), q(rng));
            m(i, j).canonicalize();
        }
    return m;
}

template <auto Kernel>
void matmul_double(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <auto Kernel>
void matmul_rational(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_rational_matrix(n, 1), b = random_rational_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <auto Kernel>
void triple_sum(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_matrix(n, 1), y = random_matrix(n, 2), z = random_matrix(n, 3);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, y, z));
}

template <auto Kernel>
void bfs(benchmark::State& state) {
    const auto g = drg::graphs::hamming(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(g.adjacency));
}

template <auto Kernel>
void sphere_counts(benchmark::State& state) {
    const auto g = drg::graphs::hamming(static_cast<int>(state.range(0)), 2);
    const auto dd = drg::distance_data(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(dd.dist, static_cast<std::size_t>(g.n), dd.diameter));
}

}  // namespace

BENCHMARK(matmul_double<drg::serial::matmul<double>>)->Name("matmul_double/serial")->Arg(64)->Arg(256);
BENCHMARK(matmul_double<drg::parallel::matmul<double>>)->Name("matmul_double/parallel")->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK(matmul_rational<drg::serial::matmul<drg::Rational>>)->Name("matmul_rational/serial")->Arg(32)->Arg(64);
BENCHMARK(matmul_rational<drg::parallel::matmul<drg::Rational>>)->Name("matmul_rational/parallel")->Arg(32)->Arg(64)->UseRealTime();
BENCHMARK(triple_sum<drg::serial::triple_hadamard_sum<double>>)->Name("triple_hadamard_sum/serial")->Arg(256)->Arg(1024);
BENCHMARK(triple_sum<drg::parallel::triple_hadamard_sum<double>>)->Name("triple_hadamard_sum/parallel")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(bfs<drg::serial::all_pairs_bfs>)->Name("all_pairs_bfs/serial")->Arg(8)->Arg(10);
BENCHMARK(bfs<drg::parallel::all_pairs_bfs>)->Name("all_pairs_bfs/parallel")->Arg(8)->Arg(10)->UseRealTime();
BENCHMARK(sphere_counts<drg::serial::pair_sphere_counts>)->Name("pair_sphere_counts/serial")->Arg(8)->Arg(9);
BENCHMARK(sphere_counts<drg::parallel::pair_sphere_counts>)->Name("pair_sphere_counts/parallel")->Arg(8)->Arg(9)->UseRealTime();

BENCHMARK_MAIN();
