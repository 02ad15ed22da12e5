#pragma once

#include "tasim/matrix.hpp"
#include "tasim/workload.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tasim::systolic {

enum class Dataflow { OutputStationary, WeightStationary, InputStationary };
enum class EnergyModel { PowerTime, PerMac };

struct SystolicConfig {
    int rows = 128;
    int cols = 32;
    double clock_hz = 800e6;
    std::int64_t sram_bytes = 128 * 1024; // 1 Mb scratchpad
    Dataflow dataflow = Dataflow::OutputStationary;
    EnergyModel energy_model = EnergyModel::PowerTime;
    double core_power_w = 2.13;
    double core_area_mm2 = 2.55;
    double pe_energy_per_mac_j = 6.5e-13; // used by the PerMac model only

    std::int64_t pe_count() const { return static_cast<std::int64_t>(rows) * cols; }
    std::string shape_label() const; // "128x32"
    void validate() const;
};

struct MMJob {
    std::int64_t m = 0, k = 0, n = 0; // C[m x n] = A[m x k] * B[k x n]
};

// Output-stationary timing. The array computes C in output blocks ("folds"):
// M is tiled into ceil(M/rows) row blocks and N into ceil(N/cols) column
// blocks. A fold occupying r x c PEs costs
//     (r - 1) + (c - 1)   skewed operand fill
//   +  K                  one MAC per streamed k-slice
//   +  r                   row-serial drain of the stationary partial sums
// cycles, and folds run back to back without overlap.
std::int64_t analytic_cycles(const MMJob& job, const SystolicConfig& cfg);

// Fraction of PE-cycles doing useful MACs: m*k*n / (rows*cols*cycles).
double utilization(const MMJob& job, const SystolicConfig& cfg);

// Softmax / normalization passes run at one elementwise op per PE per cycle.
std::int64_t elementwise_cycles(std::uint64_t ops, const SystolicConfig& cfg);

double energy_joules(const MMJob& job, const SystolicConfig& cfg);

struct EventSimResult {
    std::int64_t cycles = 0;
    Matrix product;
};

// Cycle-by-cycle simulation of the output-stationary array, used as the
// ground-truth oracle for analytic_cycles. Each PE keeps its partial sum in
// place; A operands enter at the left edge (row i skewed by i cycles) and move
// one PE right per cycle, B operands enter at the top edge (column j skewed by
// j cycles) and move one PE down per cycle. After the last MAC the stationary
// results leave the array row-serially, one row front per cycle.
// Single fold: requires A.rows <= cfg.rows and B.cols <= cfg.cols.
EventSimResult event_sim(const Matrix& a, const Matrix& b, const SystolicConfig& cfg);

// Caller-side tiling for jobs larger than the array: runs event_sim per fold
// in the same order the analytic model counts them and sums the cycles.
EventSimResult event_sim_tiled(const Matrix& a, const Matrix& b, const SystolicConfig& cfg);

// Matrix products one kernel instance contributes to stage 2.
std::vector<MMJob> systolic_jobs(const workload::KernelInstance& kernel);

struct SweepKernelRow {
    std::string kernel;
    double delay_s = 0.0;
    double normalized_delay = 0.0;
};

struct SweepEntry {
    SystolicConfig config;
    double cumulative_delay_s = 0.0;
    double cumulative_normalized_delay = 0.0;
    bool feasible = false;          // cumulative normalized delay <= 1
    double mean_utilization = 0.0;  // mean over matrix jobs (elementwise passes excluded)
    std::vector<SweepKernelRow> kernels;
};

// Evaluates every candidate shape against the stage-2 kernel list, normalizing
// delays to the slowest ReRAM stage delay. Feasible candidates rank by mean
// utilization (then cumulative delay); infeasible ones follow, by delay.
std::vector<SweepEntry> shape_sweep(const std::vector<workload::KernelInstance>& s2_kernels,
                                    const std::vector<SystolicConfig>& candidates,
                                    double reram_stage_delay_s);

} // namespace tasim::systolic
