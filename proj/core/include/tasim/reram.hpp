#pragma once

#include "tasim/matrix.hpp"
#include "tasim/workload.hpp"

#include <cstdint>
#include <vector>

namespace tasim::reram {

struct ReramTileConfig {
    int xbar_rows = 128;
    int xbar_cols = 128;
    int bits_per_cell = 2;
    int xbars_per_tile = 96;
    int tiles_per_core = 16;
    int adc_bits = 8;
    int adcs_per_tile = 96;
    int dac_bits = 1;
    double tile_power_w = 0.345;
    double tile_area_mm2 = 0.37;
    int scale_register_bytes = 192; // per-crossbar dequantization scales
    int shift_add_units = 48;       // 12 groups of 4
    double dequant_power_overhead = 0.015; // +1.5% tile power when dequantizing
    double dequant_area_overhead = 0.0215; // +2.15% tile area when dequantizing
    double clock_hz = 20e6;
    int pipeline_depth = 4; // crossbar read, ADC, shift-add, output register

    void validate() const;
};

// Cells needed for one weight at the given precision.
int cells_per_weight(int weight_bits, const ReramTileConfig& cfg);

// Capacity of one crossbar in weights at the given precision.
std::int64_t weights_per_crossbar(int weight_bits, const ReramTileConfig& cfg);

// Crossbars to hold a rows x cols weight matrix: row blocks of xbar_rows by
// column blocks of (cols * cells_per_weight) / xbar_cols, both rounded up.
std::int64_t crossbars_for_matrix(std::int64_t rows, std::int64_t cols, int weight_bits,
                                  const ReramTileConfig& cfg);

std::int64_t tiles_for_crossbars(std::int64_t crossbars, const ReramTileConfig& cfg);
std::int64_t cores_for_tiles(std::int64_t tiles, const ReramTileConfig& cfg);

struct QuantizedBlock {
    std::int64_t rows = 0, cols = 0;
    std::vector<int> ints; // row-major, in [-(2^(b-1)-1), 2^(b-1)-1]
    double scale = 1.0;
    int bits = 8;
};

// Symmetric absmax quantization of one crossbar block:
// scale = max|w| / (2^(bits-1) - 1), round half to even. All-zero blocks get
// scale 1 so dequantization stays exact.
QuantizedBlock quantize_block(const Matrix& block, int bits);

Matrix dequantize(const QuantizedBlock& q);

// Dequantization after the analog MVM: one multiply by the block scale per
// accumulated output, instead of one per stored weight.
std::vector<double> dequantize_mvm(const std::vector<double>& int_accumulators, double scale);

// Bit-serial streaming latency. Input vectors stream one bit slice per cycle
// through the tile pipeline; crossbars holding one matrix operate in parallel.
// latency = num_vectors * input_bits + pipeline_depth (+1 with dequantization).
std::int64_t mvm_latency_cycles(std::int64_t num_vectors, int input_bits,
                                const ReramTileConfig& cfg, bool dequant_enabled);

double energy_joules(std::int64_t active_tiles, double duration_s,
                     const ReramTileConfig& cfg, bool dequant_enabled);

enum class MappingPolicy { AllOnReram, Heterogeneous };

// Crossbar write operations per attention-head core per layer for one input
// sequence. AllOnReram must program the stationary dynamic operands (the
// transposed key and the value matrices) before their products can run:
// 2 * n * head_dim element writes. The heterogeneous mapping keeps dynamic
// products off the crossbars entirely.
std::uint64_t rewrite_count(const workload::TransformerConfig& cfg, MappingPolicy policy);

} // namespace tasim::reram
