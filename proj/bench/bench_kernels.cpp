// Serial reference vs OpenMP kernels on an icosphere fixture.
// Run: build/bench/bench_kernels [--benchmark_filter=...]

#include "sgap/discrete_spaces.hpp"
#include "sgap/kernels.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

namespace {

using namespace sgap;

const DiscreteSpace& sphere(int sub) {
    static std::map<int, DiscreteSpace> cache;
    auto it = cache.find(sub);
    if (it == cache.end()) it = cache.emplace(sub, build_icosphere(sub)).first;
    return it->second;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

template <auto Fn>
void spmv(benchmark::State& st) {
    const DiscreteSpace& s = sphere(static_cast<int>(st.range(0)));
    const auto x = random_vector(s.vertex_count(), 1);
    std::vector<double> y(s.vertex_count());
    for (auto _ : st) {
        Fn(s.stiffness_view(), x, y);
        benchmark::DoNotOptimize(y.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(s.stiffness.nonZeros()));
}

template <auto Fn>
void synthesize(benchmark::State& st) {
    const DiscreteSpace& s = sphere(static_cast<int>(st.range(0)));
    const std::size_t cols = 64;
    const auto basis = random_vector(s.vertex_count() * cols, 2);
    const auto coeff = random_vector(cols, 3);
    std::vector<double> out(s.vertex_count());
    const kernels::DenseView view{s.vertex_count(), cols, basis};
    for (auto _ : st) {
        Fn(view, coeff, {}, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void analyze(benchmark::State& st) {
    const DiscreteSpace& s = sphere(static_cast<int>(st.range(0)));
    const std::size_t cols = 64;
    const auto basis = random_vector(s.vertex_count() * cols, 2);
    const auto f = random_vector(s.vertex_count(), 4);
    std::vector<double> mass(s.mass.data(), s.mass.data() + s.mass.size());
    std::vector<double> coeff(cols);
    const kernels::DenseView view{s.vertex_count(), cols, basis};
    for (auto _ : st) {
        Fn(view, mass, f, coeff);
        benchmark::DoNotOptimize(coeff.data());
    }
}

template <auto Grad, auto Avg>
void gradient(benchmark::State& st) {
    const DiscreteSpace& s = sphere(static_cast<int>(st.range(0)));
    const auto f = random_vector(s.vertex_count(), 5);
    std::vector<double> face(s.faces.size()), out(s.vertex_count());
    const auto view = s.face_view();
    for (auto _ : st) {
        Grad(view, f, face);
        Avg(view, face, out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(spmv<kernels::serial::spmv>)->Name("spmv/serial")->DenseRange(4, 7);
BENCHMARK(spmv<kernels::parallel::spmv>)->Name("spmv/parallel")->DenseRange(4, 7);
BENCHMARK(synthesize<kernels::serial::synthesize>)->Name("synthesize/serial")->DenseRange(4, 6);
BENCHMARK(synthesize<kernels::parallel::synthesize>)->Name("synthesize/parallel")->DenseRange(4, 6);
BENCHMARK(analyze<kernels::serial::analyze>)->Name("analyze/serial")->DenseRange(4, 6);
BENCHMARK(analyze<kernels::parallel::analyze>)->Name("analyze/parallel")->DenseRange(4, 6);
BENCHMARK(gradient<kernels::serial::face_gradient_norms, kernels::serial::vertex_average>)
    ->Name("gradient/serial")
    ->DenseRange(4, 7);
BENCHMARK(gradient<kernels::parallel::face_gradient_norms, kernels::parallel::vertex_average>)
    ->Name("gradient/parallel")
    ->DenseRange(4, 7);

BENCHMARK_MAIN();
