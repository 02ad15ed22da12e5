// Microbenchmarks for the hot paths: the cycle-accurate array simulator (the
// oracle), its analytic counterpart, interconnect evaluation, and a full
// simulation pass. Build with -DTASIM_BUILD_BENCHMARKS=ON (default when
// google-benchmark is installed); run build/benchmarks/tasim_bench.

#include <benchmark/benchmark.h>

#include <random>

#include "tasim/experiments.hpp"
#include "tasim/mapping.hpp"
#include "tasim/noc.hpp"
#include "tasim/presets.hpp"
#include "tasim/systolic.hpp"

using namespace tasim;

namespace {

Matrix random_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(rows, cols);
    for (auto& v : m.data) v = dist(rng);
    return m;
}

void BM_EventSimTiled(benchmark::State& state) {
    const auto dim = state.range(0);
    systolic::SystolicConfig cfg;
    cfg.rows = 32;
    cfg.cols = 32;
    const Matrix a = random_matrix(dim, dim, 1);
    const Matrix b = random_matrix(dim, dim, 2);
    for (auto _ : state) {
        auto res = systolic::event_sim_tiled(a, b, cfg);
        benchmark::DoNotOptimize(res.cycles);
    }
    state.SetComplexityN(dim);
}
BENCHMARK(BM_EventSimTiled)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_AnalyticCycles(benchmark::State& state) {
    systolic::SystolicConfig cfg; // 128x32
    const systolic::MMJob job{1024, 64, 1024};
    for (auto _ : state) {
        auto cycles = systolic::analytic_cycles(job, cfg);
        benchmark::DoNotOptimize(cycles);
    }
}
BENCHMARK(BM_AnalyticCycles);

void BM_BuildPipeline(benchmark::State& state) {
    const auto wl = presets::make("gpt2-medium");
    const HardwareSpec hw;
    for (auto _ : state) {
        auto sched = mapping::build_pipeline(wl, hw);
        benchmark::DoNotOptimize(sched.stages[1].compute_delay_s);
    }
}
BENCHMARK(BM_BuildPipeline);

void BM_EvaluateNoc(benchmark::State& state) {
    const auto kind = static_cast<noc::TopologyKind>(state.range(0));
    const auto wl = presets::make("gpt2-medium");
    const auto topo = noc::build_topology(kind);
    const auto place = noc::default_placement(topo, wl.num_layers);
    const auto traffic = noc::gen_traffic(wl, topo, place);
    for (auto _ : state) {
        auto eval = noc::evaluate_noc(topo, traffic);
        benchmark::DoNotOptimize(eval.edp_js);
    }
}
BENCHMARK(BM_EvaluateNoc)
    ->Arg(static_cast<int>(noc::TopologyKind::Mesh3D))
    ->Arg(static_cast<int>(noc::TopologyKind::Mesh3DSkip))
    ->Arg(static_cast<int>(noc::TopologyKind::Atleus));

void BM_RunSimulate(benchmark::State& state) {
    const auto cfg = default_experiment_config();
    for (auto _ : state) {
        auto res = experiments::run_simulate(cfg);
        benchmark::DoNotOptimize(res.reports.front().rows.size());
    }
}
BENCHMARK(BM_RunSimulate);

void BM_QuantSweep(benchmark::State& state) {
    const auto cfg = default_experiment_config();
    for (auto _ : state) {
        auto res = experiments::run_quant_sweep(cfg);
        benchmark::DoNotOptimize(res.reports.front().rows.size());
    }
}
BENCHMARK(BM_QuantSweep);

} // namespace

BENCHMARK_MAIN();
