#include "tasim/mapping.hpp"

#include "tasim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tasim {

void DramConfig::validate() const {
    if (bandwidth_bytes_per_s <= 0) throw ConfigError("dram.bandwidth_bytes_per_s must be positive");
    if (efficiency <= 0 || efficiency > 1) throw ConfigError("dram.efficiency must be in (0, 1]");
}

void HardwareSpec::validate() const {
    reram.validate();
    systolic.validate();
    dram.validate();
    if (reram_cores <= 0) throw ConfigError("hardware.reram_cores must be positive");
    if (systolic_cores <= 0) throw ConfigError("hardware.systolic_cores must be positive");
    if (reram_cores != 3 * systolic_cores)
        throw ConfigError("hardware.reram_cores must be three times hardware.systolic_cores");
    if (pipeline_slack <= 0) throw ConfigError("hardware.pipeline_slack must be positive");
}

} // namespace tasim

namespace tasim::mapping {

using workload::KernelClass;
using workload::KernelId;
using workload::KernelInstance;
using workload::TransformerConfig;

Partition partition(const std::vector<KernelInstance>& kernels) {
    Partition p;
    for (const auto& k : kernels) {
        if (k.cls == KernelClass::StaticWeight) {
            p.mm_reram += k.macs;
            p.reram_kernels.push_back(k);
        } else {
            p.mm_systolic += k.macs;
            p.systolic_kernels.push_back(k);
        }
    }
    return p;
}

ComputeShare compute_share(const TransformerConfig& cfg) {
    cfg.validate();
    const double d = cfg.d_model, n = cfg.n;
    const double k = cfg.lora_targets, r = cfg.lora_rank;
    ComputeShare cs;
    const double reram_ops = 12.0 * d * d * n;
    const double systolic_ops = d * n * n + 2.0 * k * d * r * n + 3.0 * d * n;
    cs.exact_ratio = reram_ops / systolic_ops;
    cs.approx_ratio = 12.0 * d / n;
    cs.reram_share_pct = 100.0 * cs.exact_ratio / (1.0 + cs.exact_ratio);
    return cs;
}

const char* stage_name(StageId s) {
    switch (s) {
        case StageId::S1: return "S1";
        case StageId::S2: return "S2";
        case StageId::S3: return "S3";
        case StageId::S4: return "S4";
    }
    return "?";
}

std::uint64_t lora_parameter_bytes(const TransformerConfig& cfg) {
    // A (d x r) and B (r x d) per adapted matrix
    return static_cast<std::uint64_t>(cfg.lora_targets) * 2ull * cfg.d_model * cfg.lora_rank *
           (cfg.precision.lora_bits / 8);
}

double dram_transfer_time_s(std::uint64_t bytes, const DramConfig& dram) {
    dram.validate();
    return static_cast<double>(bytes) / (dram.bandwidth_bytes_per_s * dram.efficiency);
}

std::array<std::uint64_t, 4> stage_static_macs(const TransformerConfig& cfg) {
    return {
        workload::kernel_macs(KernelId::MHA1, cfg) + workload::kernel_macs(KernelId::MHA4, cfg),
        0ull,
        workload::kernel_macs(KernelId::FF1, cfg),
        workload::kernel_macs(KernelId::FF2, cfg),
    };
}

namespace {

constexpr StageId kStageIds[4] = {StageId::S1, StageId::S2, StageId::S3, StageId::S4};

StageId stage_of(KernelId id) {
    switch (id) {
        case KernelId::MHA1:
        case KernelId::MHA4: return StageId::S1;
        case KernelId::MHA2:
        case KernelId::MHA3:
        case KernelId::L1:
        case KernelId::LoRA_Fwd:
        case KernelId::LoRA_Bwd: return StageId::S2;
        case KernelId::FF1: return StageId::S3;
        case KernelId::FF2:
        case KernelId::L2: return StageId::S4;
    }
    return StageId::S2;
}

} // namespace

PipelineSchedule build_pipeline(const TransformerConfig& cfg, const HardwareSpec& hw) {
    cfg.validate();
    hw.validate();

    PipelineSchedule sched;
    sched.core_ratio = {hw.reram_cores / hw.systolic_cores, 1};
    for (int i = 0; i < 4; ++i) {
        sched.stages[i].id = kStageIds[i];
        sched.stages[i].resource = (kStageIds[i] == StageId::S2) ? Resource::Systolic : Resource::Reram;
    }

    // one layer's kernels; every layer is scheduled identically
    TransformerConfig one_layer = cfg;
    one_layer.num_layers = 1;
    const auto kernels = workload::enumerate_kernels(one_layer);
    for (const auto& k : kernels)
        sched.stages[static_cast<int>(stage_of(k.id))].kernels.push_back(k);

    const bool dequant_mha = cfg.precision.mha_bits < 16;
    const bool dequant_ff = cfg.precision.ff_bits < 16;
    const int act_bits = cfg.precision.activation_bits;
    const double f_reram = hw.reram.clock_hz;
    const double f_sys = hw.systolic.clock_hz;

    // ReRAM stages: each static kernel streams the n input vectors through its
    // own crossbars; kernels within a stage run back to back.
    auto reram_pass = [&](bool dequant) {
        return static_cast<double>(reram::mvm_latency_cycles(cfg.n, act_bits, hw.reram, dequant)) / f_reram;
    };
    sched.stages[0].compute_delay_s = 2.0 * reram_pass(dequant_mha); // MHA1 + MHA4
    sched.stages[2].compute_delay_s = reram_pass(dequant_ff);        // FF1
    // FF2 plus the trailing normalization pass, timed on the systolic model
    sched.stages[3].compute_delay_s =
        reram_pass(dequant_ff) +
        static_cast<double>(systolic::elementwise_cycles(workload::kernel_macs(KernelId::L2, cfg), hw.systolic)) / f_sys;

    const double slowest_reram = std::max({sched.stages[0].compute_delay_s,
                                           sched.stages[2].compute_delay_s,
                                           sched.stages[3].compute_delay_s});

    // Systolic stage: all dynamic jobs and elementwise passes serialize on one
    // core; the adapter fetch from DRAM overlaps compute (double buffering).
    double s2_compute = 0.0;
    double worst_job_delay = 0.0;
    std::string worst_job;
    for (const auto& k : sched.stages[1].kernels) {
        if (k.cls == KernelClass::DynamicMM) {
            for (const auto& job : systolic::systolic_jobs(k)) {
                const double d = static_cast<double>(systolic::analytic_cycles(job, hw.systolic)) / f_sys;
                s2_compute += d;
                if (d > worst_job_delay) {
                    worst_job_delay = d;
                    worst_job = k.label();
                }
            }
        } else {
            s2_compute += static_cast<double>(systolic::elementwise_cycles(k.macs, hw.systolic)) / f_sys;
        }
    }
    if (worst_job_delay > hw.pipeline_slack * slowest_reram) {
        throw InfeasibleError("systolic stage cannot keep up: kernel " + worst_job + " needs " +
                              std::to_string(worst_job_delay) + " s against a ReRAM stage budget of " +
                              std::to_string(hw.pipeline_slack * slowest_reram) + " s");
    }
    sched.bottleneck_kernel = worst_job;
    sched.lora_bytes = lora_parameter_bytes(cfg);
    sched.lora_load_s = sched.lora_bytes > 0 ? dram_transfer_time_s(sched.lora_bytes, hw.dram) : 0.0;
    sched.stages[1].compute_delay_s = std::max(s2_compute, sched.lora_load_s);

    return sched;
}

double slowest_reram_stage_delay(const PipelineSchedule& sched) {
    double worst = 0.0;
    for (const auto& st : sched.stages)
        if (st.resource == Resource::Reram) worst = std::max(worst, st.compute_delay_s);
    return worst;
}

PipelineSchedule with_comm_delays(PipelineSchedule sched, const std::map<StageId, double>& comm) {
    for (auto& st : sched.stages) {
        auto it = comm.find(st.id);
        st.comm_delay_s = it != comm.end() ? it->second : 0.0;
    }
    return sched;
}

PipelineTiming pipeline_timing(const PipelineSchedule& sched, int num_layers, int batch) {
    if (num_layers < 1) throw ConfigError("workload.num_layers must be positive");
    if (batch < 1) throw ConfigError("workload.batch must be positive");
    PipelineTiming t;
    for (const auto& st : sched.stages) t.stage_time_s = std::max(t.stage_time_s, st.total_delay_s());
    t.throughput_per_s = 1.0 / t.stage_time_s;
    const double depth = 4.0 * num_layers;
    t.end_to_end_latency_s = (depth + batch - 1.0) * t.stage_time_s;
    return t;
}

} // namespace tasim::mapping
