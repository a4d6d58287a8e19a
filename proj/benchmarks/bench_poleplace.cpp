#include <poleplace/poleplace.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace poleplace;

namespace {

StateSpace random_system(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = u(gen);
        Vector b(n);
        for (auto& x : b) x = u(gen);
        StateSpace sys(std::move(a), std::move(b));
        if (linalg::condition_number(placement::controllability_matrix(sys)) <= 1e8) return sys;
    }
}

// Real targets spread over [-3, -0.5].
Spectrum stable_targets(std::size_t n) {
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i) values.push_back(-0.5 - 2.5 * static_cast<double>(i) / static_cast<double>(n));
    return Spectrum::from_reals(values);
}

void BM_RealSchur(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_system(n, 1).A();
    for (auto _ : state) benchmark::DoNotOptimize(linalg::real_schur(a));
}
BENCHMARK(BM_RealSchur)->Arg(4)->Arg(8)->Arg(12)->Arg(20);

void BM_CharPoly(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_system(n, 2).A();
    for (auto _ : state) benchmark::DoNotOptimize(poly::char_poly(a));
}
BENCHMARK(BM_CharPoly)->Arg(4)->Arg(8)->Arg(12);

void BM_Ackermann(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StateSpace sys = random_system(n, 3);
    const Spectrum targets = stable_targets(n);
    for (auto _ : state) benchmark::DoNotOptimize(placement::place_ackermann(sys, targets));
}
BENCHMARK(BM_Ackermann)->Arg(4)->Arg(8)->Arg(12);

void BM_BassGura(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StateSpace sys = random_system(n, 3);
    const Spectrum targets = stable_targets(n);
    for (auto _ : state) benchmark::DoNotOptimize(placement::place_bass_gura(sys, targets));
}
BENCHMARK(BM_BassGura)->Arg(4)->Arg(8)->Arg(12);

void BM_Sequential(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StateSpace sys = random_system(n, 4);
    const Spectrum open_loop = linalg::eigenvalues(sys.A());
    const Spectrum targets = stable_targets(n);
    // One group per real eigenvalue or conjugate pair, targets dealt out in order.
    std::vector<AssignmentGroup> groups;
    std::size_t next = 0;
    for (const auto& z : open_loop) {
        if (z.imag() == 0.0) {
            groups.push_back({Spectrum{z}, Spectrum{targets[next++]}});
        } else if (z.imag() > 0.0) {
            groups.push_back({Spectrum{z, std::conj(z)}, Spectrum{targets[next], targets[next + 1]}});
            next += 2;
        }
    }
    const AssignmentPlan plan(std::move(groups));
    for (auto _ : state) benchmark::DoNotOptimize(subspace::place_sequential(sys, plan));
}
BENCHMARK(BM_Sequential)->Arg(4)->Arg(8)->Arg(12);

} // namespace

BENCHMARK_MAIN();
