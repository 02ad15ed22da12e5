#include <doctest.h>

#include <map>

#include "tasim/errors.hpp"
#include "tasim/mapping.hpp"
#include "tasim/presets.hpp"

using namespace tasim;
using namespace tasim::mapping;

namespace {

workload::TransformerConfig gpt2m() { return {}; }

HardwareSpec default_hw() { return {}; }

} // namespace

TEST_CASE("class partition sends static weights to memory, the rest to the array") {
    auto cfg = gpt2m();
    cfg.num_layers = 1;
    const auto part = partition(workload::enumerate_kernels(cfg));
    for (const auto& k : part.reram_kernels)
        CHECK((k.id == workload::KernelId::MHA1 || k.id == workload::KernelId::MHA4 ||
               k.id == workload::KernelId::FF1 || k.id == workload::KernelId::FF2));
    CHECK(part.mm_reram == 12ull * 1024 * 1024 * 1024);
    CHECK(part.reram_kernels.size() == 4);
    CHECK(part.systolic_kernels.size() == 8);
}

TEST_CASE("op-share split for the 1024-wide, 1024-token reference") {
    const auto share = compute_share(gpt2m());
    CHECK(share.exact_ratio == doctest::Approx(10.63896).epsilon(1e-5));
    CHECK(share.reram_share_pct == doctest::Approx(91.40815).epsilon(1e-5));
    CHECK(share.approx_ratio == 12.0); // 12*d/n exactly
}

TEST_CASE("approximate ratio tracks d/n") {
    auto cfg = gpt2m();
    cfg.n = 512;
    CHECK(compute_share(cfg).approx_ratio == 24.0);
    cfg.n = 2048;
    CHECK(compute_share(cfg).approx_ratio == 6.0);
}

TEST_CASE("memory-stage delays: bit-serial passes at the memory clock") {
    auto cfg = presets::make("bert-large"); // n = 512
    const auto sched = build_pipeline(cfg, default_hw());

    // (512 tokens * 16 bit slices + 4 pipeline stages) / 20 MHz per pass
    const double pass = (512.0 * 16 + 4) / 20e6;
    CHECK(sched.stages[0].compute_delay_s == doctest::Approx(2 * pass).epsilon(1e-12));
    CHECK(sched.stages[2].compute_delay_s == doctest::Approx(pass).epsilon(1e-12));
    // trailing normalization adds 128 array cycles at 800 MHz
    CHECK(sched.stages[3].compute_delay_s ==
          doctest::Approx(pass + 128.0 / 800e6).epsilon(1e-12));
    CHECK(slowest_reram_stage_delay(sched) == sched.stages[0].compute_delay_s);
    CHECK(sched.core_ratio.first == 3);
    CHECK(sched.core_ratio.second == 1);
}

TEST_CASE("array-stage delay: serialized matrix jobs plus elementwise passes") {
    const auto sched = build_pipeline(gpt2m(), default_hw());
    // 16 score heads + 4 adapter kernels + two 256-cycle elementwise passes
    CHECK(sched.stages[1].compute_delay_s == doctest::Approx(1801664.0 / 800e6).epsilon(1e-12));
    CHECK(sched.bottleneck_kernel == "MHA2");
    CHECK(sched.stages[1].resource == Resource::Systolic);
    CHECK(sched.stages[0].resource == Resource::Reram);
}

TEST_CASE("adapter fetch is overlapped: stage delay is max(compute, load)") {
    auto hw = default_hw();
    hw.dram.bandwidth_bytes_per_s = 1e4; // pathological link
    const auto sched = build_pipeline(gpt2m(), hw);
    CHECK(sched.lora_bytes == 262144);
    CHECK(sched.lora_load_s == doctest::Approx(262144.0 / (1e4 * 0.8)));
    CHECK(sched.stages[1].compute_delay_s == doctest::Approx(sched.lora_load_s));
}

TEST_CASE("adapter parameter footprint and transfer time") {
    CHECK(lora_parameter_bytes(gpt2m()) == 2ull * 2 * 1024 * 32 * 2);
    DramConfig dram;
    CHECK(dram_transfer_time_s(262144, dram) == doctest::Approx(1.28e-6).epsilon(1e-9));
}

TEST_CASE("a single oversized array job makes the mapping infeasible") {
    auto hw = default_hw();
    hw.systolic.rows = 4;
    hw.systolic.cols = 4;
    CHECK_THROWS_AS((void)build_pipeline(gpt2m(), hw), InfeasibleError);
    try {
        (void)build_pipeline(gpt2m(), hw);
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("MHA2") != std::string::npos);
    }

    // the slack knob scales the budget
    hw = default_hw();
    hw.pipeline_slack = 1e-6;
    CHECK_THROWS_AS((void)build_pipeline(gpt2m(), hw), InfeasibleError);
}

TEST_CASE("static op balance across the three memory stages") {
    const auto macs = stage_static_macs(gpt2m());
    CHECK(macs[0] == macs[2]); // attention pair equals first feed-forward half
    CHECK(macs[2] == macs[3]);
    CHECK(macs[1] == 0);
}

TEST_CASE("pipeline fill: (4*layers + batch - 1) stage slots") {
    PipelineSchedule sched;
    const StageId ids[] = {StageId::S1, StageId::S2, StageId::S3, StageId::S4};
    const double delays[] = {1e-4, 3e-4, 2e-4, 2.5e-4};
    for (int i = 0; i < 4; ++i) {
        sched.stages[i].id = ids[i];
        sched.stages[i].compute_delay_s = delays[i];
    }
    const auto t = pipeline_timing(sched, 24, 1);
    CHECK(t.stage_time_s == 3e-4);
    CHECK(t.end_to_end_latency_s == (4.0 * 24 + 1 - 1.0) * 3e-4);
    CHECK(t.throughput_per_s == 1.0 / 3e-4);

    const auto batched = pipeline_timing(sched, 24, 8);
    CHECK(batched.end_to_end_latency_s == (4.0 * 24 + 8 - 1.0) * 3e-4);
}

TEST_CASE("stage totals include interconnect delay") {
    auto sched = build_pipeline(gpt2m(), default_hw());
    std::map<StageId, double> comm = {{StageId::S1, 1e-5}, {StageId::S2, 2e-5}};
    sched = with_comm_delays(std::move(sched), comm);
    CHECK(sched.stages[0].comm_delay_s == 1e-5);
    CHECK(sched.stages[1].comm_delay_s == 2e-5);
    CHECK(sched.stages[2].comm_delay_s == 0.0);
    CHECK(sched.stages[0].total_delay_s() ==
          doctest::Approx(sched.stages[0].compute_delay_s + 1e-5));
}

TEST_CASE("hardware validation enforces the 3:1 tier core ratio") {
    HardwareSpec hw;
    hw.reram_cores = 47;
    CHECK_THROWS_AS(hw.validate(), ConfigError);
}
