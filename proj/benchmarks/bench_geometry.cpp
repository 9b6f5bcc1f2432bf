#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "slfm/diagnostics.hpp"
#include "slfm/paths.hpp"
#include "slfm/sphere.hpp"

namespace {

using namespace slfm;

// -- sphere primitives --------------------------------------------------------

void BM_RadialProject(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const Token z = sample_uniform_sphere(d, 3.0, rng).values();
    for (auto _ : state) {
        auto p = radial_project(z, std::sqrt(static_cast<double>(d)));
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_RadialProject)->Arg(4)->Arg(32)->Arg(256);

void BM_Slerp(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const double r = std::sqrt(static_cast<double>(d));
    Rng rng(2);
    const auto a = sample_uniform_sphere(d, r, rng);
    const auto b = sample_uniform_sphere(d, r, rng);
    for (auto _ : state) {
        auto p = slerp(a, b, 0.37);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_Slerp)->Arg(4)->Arg(32)->Arg(256);

void BM_SlerpVelocity(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const double r = std::sqrt(static_cast<double>(d));
    Rng rng(3);
    const auto a = sample_uniform_sphere(d, r, rng);
    const auto b = sample_uniform_sphere(d, r, rng);
    for (auto _ : state) {
        auto v = slerp_velocity(a, b, 0.37);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_SlerpVelocity)->Arg(4)->Arg(32)->Arg(256);

void BM_ExpMap(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const double r = std::sqrt(static_cast<double>(d));
    Rng rng(4);
    const auto a = sample_uniform_sphere(d, r, rng);
    const auto b = sample_uniform_sphere(d, r, rng);
    const TangentVector v = slerp_velocity(a, b, 0.0);
    Token step = v.vector;
    for (double& x : step) x *= 0.1;
    for (auto _ : state) {
        auto q = exp_map(a, step);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ExpMap)->Arg(4)->Arg(32)->Arg(256);

// -- diagnostics --------------------------------------------------------------

void BM_PathProfile(benchmark::State& state) {
    const auto kind = static_cast<PathKind>(state.range(0));
    constexpr std::size_t d = 32;
    const double r = std::sqrt(static_cast<double>(d));
    Rng rng(5);
    std::vector<TokenPair> pairs;
    for (int i = 0; i < 256; ++i) {
        pairs.emplace_back(sample_uniform_sphere(d, r, rng).values(), sample_uniform_sphere(d, r, rng).values());
    }
    const auto grid = uniform_grid(kDefaultGridPoints);
    for (auto _ : state) {
        auto p = path_profile(pairs, kind, grid);
        benchmark::DoNotOptimize(p);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pairs.size() * grid.size()));
}
BENCHMARK(BM_PathProfile)
    ->Arg(static_cast<int>(PathKind::Linear))
    ->Arg(static_cast<int>(PathKind::Shell))
    ->Arg(static_cast<int>(PathKind::Slerp))
    ->Unit(benchmark::kMillisecond);

}  // namespace
