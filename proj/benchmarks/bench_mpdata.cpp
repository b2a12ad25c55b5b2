#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "mpbs/american.hpp"
#include "mpbs/analysis.hpp"
#include "mpbs/finmodel.hpp"
#include "mpbs/mpdata.hpp"
#include "mpbs/oracles.hpp"

namespace {

mpbs::ScalarField smooth_field(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 2.0 + std::sin(6.283185307179586 * static_cast<double>(i) / static_cast<double>(n));
    mpbs::ScalarField f = mpbs::ScalarField::from_interior(v);
    mpbs::fill_periodic(f);
    return f;
}

void BM_upwind_step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = smooth_field(n);
    const auto c = mpbs::FaceField::matching(f, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(mpbs::upwind_step(f, c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_upwind_step)->Arg(256)->Arg(1024)->Arg(4096);

void BM_mpdata_step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto f = smooth_field(n);
    const auto c = mpbs::FaceField::matching(f, 0.3);
    const mpbs::MpdataOptions options{2, state.range(1) != 0, state.range(1) != 0, state.range(1) != 0};
    for (auto _ : state) benchmark::DoNotOptimize(mpbs::mpdata_step(f, c, options, mpbs::fill_periodic));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mpdata_step)->ArgsProduct({{256, 1024, 4096}, {0, 1}});

void BM_american_put(benchmark::State& state) {
    const mpbs::MarketParams market{0.08, 0.2};
    const double courant = 0.02 / static_cast<double>(state.range(0));
    const auto res = mpbs::size_grid(courant, 2.0, market, 0.25, mpbs::kAmericanDomain);
    const auto inst = mpbs::InstrumentSpec::american_put(100, 0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mpbs::price_american(inst, market, res, {2, true, true, true}, 100.0));
    }
}
BENCHMARK(BM_american_put)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_binomial_put(benchmark::State& state) {
    const mpbs::oracles::AnalyticInputs in{100, 100, 0.08, 0.2, 0.25};
    for (auto _ : state) benchmark::DoNotOptimize(mpbs::oracles::binomial_american_put(in, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_binomial_put)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_corridor_sweep(benchmark::State& state) {
    const mpbs::analysis::CorridorStudy study;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mpbs::analysis::sweep_spatial(2.0, mpbs::analysis::kSweepCourants, study));
    }
}
BENCHMARK(BM_corridor_sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
