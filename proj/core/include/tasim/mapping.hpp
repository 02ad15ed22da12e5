#pragma once

#include "tasim/hardware.hpp"
#include "tasim/workload.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tasim::mapping {

// Class-based split: static-weight kernels stay in ReRAM, dynamic products and
// non-linear passes go to the systolic tier.
struct Partition {
    std::vector<workload::KernelInstance> reram_kernels;
    std::vector<workload::KernelInstance> systolic_kernels;
    std::uint64_t mm_reram = 0;    // summed kernel op counts
    std::uint64_t mm_systolic = 0;
};

Partition partition(const std::vector<workload::KernelInstance>& kernels);

struct ComputeShare {
    double exact_ratio = 0.0;     // 12*d^2*n / (d*n^2 + 2k*d*r*n + 3*d*n)
    double approx_ratio = 0.0;    // 12*d / n
    double reram_share_pct = 0.0; // 100 * exact / (1 + exact)
};

ComputeShare compute_share(const workload::TransformerConfig& cfg);

enum class StageId { S1, S2, S3, S4 };
enum class Resource { Reram, Systolic };

const char* stage_name(StageId s);

struct Stage {
    StageId id;
    Resource resource;
    std::vector<workload::KernelInstance> kernels;
    double compute_delay_s = 0.0;
    double comm_delay_s = 0.0;

    double total_delay_s() const { return compute_delay_s + comm_delay_s; }
};

// Fixed intra-layer pipeline: S1 = ReRAM(MHA1, MHA4), S2 = systolic(MHA2,
// MHA3, L1, adapters), S3 = ReRAM(FF1), S4 = ReRAM(FF2, L2). The feed-forward
// network splits across two stages because it holds twice the static weights
// of the attention block, which balances static MACs per ReRAM stage.
struct PipelineSchedule {
    std::array<Stage, 4> stages;
    std::pair<int, int> core_ratio = {3, 1}; // ReRAM : systolic
    double lora_load_s = 0.0;                // DRAM fetch, overlapped with S2 compute
    std::uint64_t lora_bytes = 0;
    std::string bottleneck_kernel;           // largest single S2 job, for diagnostics
};

// Computes per-stage compute delays for one layer on the given hardware.
// Throws InfeasibleError (naming the kernel) when a single stage-2 matrix job
// exceeds the slowest ReRAM stage delay times the configured slack.
PipelineSchedule build_pipeline(const workload::TransformerConfig& cfg, const HardwareSpec& hw);

// Largest ReRAM stage compute delay, the normalizer for shape sweeps.
double slowest_reram_stage_delay(const PipelineSchedule& sched);

PipelineSchedule with_comm_delays(PipelineSchedule sched, const std::map<StageId, double>& comm);

struct PipelineTiming {
    double stage_time_s = 0.0;        // max over stages of compute + comm
    double throughput_per_s = 0.0;    // 1 / stage_time
    double end_to_end_latency_s = 0.0;
};

// Depth is 4 stages per layer; latency = (4*layers + batch - 1) * stage_time.
PipelineTiming pipeline_timing(const PipelineSchedule& sched, int num_layers, int batch);

double dram_transfer_time_s(std::uint64_t bytes, const DramConfig& dram);

std::uint64_t lora_parameter_bytes(const workload::TransformerConfig& cfg); // per layer

// Static MACs resident in each ReRAM stage of one layer (split-balance check).
std::array<std::uint64_t, 4> stage_static_macs(const workload::TransformerConfig& cfg);

} // namespace tasim::mapping
