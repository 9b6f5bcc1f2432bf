#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "slfm/flow.hpp"

namespace {

using namespace slfm;

std::vector<TrainingExample> batch_of(std::size_t d, std::size_t n, Rng& rng) {
    const double r = std::sqrt(static_cast<double>(d));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<TrainingExample> batch;
    for (std::size_t i = 0; i < n; ++i) {
        batch.push_back({sample_uniform_sphere(d, r, rng).values(), sample_uniform_sphere(d, r, rng).values(),
                         unif(rng), 0});
    }
    return batch;
}

void BM_LossAndGrad(benchmark::State& state) {
    const auto kind = static_cast<LossKind>(state.range(0));
    FieldSpec spec;
    spec.dim = 4;
    spec.kind = kind;
    Rng rng(1);
    const auto field = VelocityField::initialized(spec, rng);
    const auto batch = batch_of(spec.dim, 64, rng);
    for (auto _ : state) {
        auto lg = loss_and_grad(field, batch, kind);
        benchmark::DoNotOptimize(lg);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch.size()));
}
BENCHMARK(BM_LossAndGrad)->Arg(static_cast<int>(LossKind::Linear))->Arg(static_cast<int>(LossKind::Slerp));

void BM_Sample(benchmark::State& state) {
    const auto sampler = static_cast<Sampler>(state.range(0));
    FieldSpec spec;
    spec.dim = 4;
    Rng rng(2);
    const auto field = VelocityField::initialized(spec, rng);
    for (auto _ : state) {
        auto run = sample(field, 64, sampler, 50, 0, rng);
        benchmark::DoNotOptimize(run);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_Sample)
    ->Arg(static_cast<int>(Sampler::Euler))
    ->Arg(static_cast<int>(Sampler::EulerProject))
    ->Arg(static_cast<int>(Sampler::ExpMap))
    ->Unit(benchmark::kMillisecond);

}  // namespace
