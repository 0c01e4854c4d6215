#include <benchmark/benchmark.h>

#include <mmq/analytic.hpp>
#include <mmq/model.hpp>
#include <mmq/oracle.hpp>
#include <mmq/series.hpp>
#include <mmq/simulate.hpp>

namespace {

mmq::ModelSpec table2()
{
    return mmq::validate(mmq::ModelSpec{{0.6, 0.2, 0.1, 0.05, 0.05}, {0.2, 0.6, 0.1, 0.1}}).value();
}

mmq::ExactModelSpec table2_exact()
{
    using mmq::parse_decimal;
    mmq::ExactModelSpec spec{
        {parse_decimal("0.6"), parse_decimal("0.2"), parse_decimal("0.1"), parse_decimal("0.05"), parse_decimal("0.05")},
        {parse_decimal("0.2"), parse_decimal("0.6"), parse_decimal("0.1"), parse_decimal("0.1")}};
    return mmq::validate(spec).value();
}

void BM_AnalyticFloat(benchmark::State& state)
{
    const auto spec = table2();
    for (auto _ : state) benchmark::DoNotOptimize(mmq::analyze(spec));
}
BENCHMARK(BM_AnalyticFloat);

void BM_SeriesFloat(benchmark::State& state)
{
    const auto spec = table2();
    mmq::NumericConfig config;
    config.k_max = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mmq::queue_distribution(spec, config));
}
BENCHMARK(BM_SeriesFloat)->Arg(50)->Arg(100)->Arg(180);

void BM_SeriesExact(benchmark::State& state)
{
    const auto spec = table2_exact();
    mmq::NumericConfig config;
    config.k_max = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mmq::queue_distribution(spec, config));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SeriesExact)->RangeMultiplier(2)->Range(25, 400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_OracleSolve(benchmark::State& state)
{
    const auto spec = table2();
    const auto chain = mmq::oracle::build_joint_chain(spec, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mmq::oracle::joint_stationary(chain));
}
BENCHMARK(BM_OracleSolve)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_SimulateRun(benchmark::State& state)
{
    const auto spec = table2();
    mmq::SimulationConfig config;
    config.iterations = static_cast<std::uint64_t>(state.range(0));
    config.burn_in = 0;
    config.k_max = 100;
    for (auto _ : state) benchmark::DoNotOptimize(mmq::simulate_run(spec, config, 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateRun)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
