#include "tasim/reram.hpp"

#include "tasim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tasim::reram {

namespace {

void require_cfg(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

} // namespace

void ReramTileConfig::validate() const {
    require_cfg(xbar_rows >= 1, "reram.xbar_rows must be positive");
    require_cfg(xbar_cols >= 1, "reram.xbar_cols must be positive");
    require_cfg(bits_per_cell >= 1, "reram.bits_per_cell must be positive");
    require_cfg(xbars_per_tile >= 1, "reram.xbars_per_tile must be positive");
    require_cfg(tiles_per_core >= 1, "reram.tiles_per_core must be positive");
    require_cfg(tile_power_w > 0, "reram.tile_power_w must be positive");
    require_cfg(clock_hz > 0, "reram.clock_hz must be positive");
    require_cfg(pipeline_depth >= 1, "reram.pipeline_depth must be positive");
}

int cells_per_weight(int weight_bits, const ReramTileConfig& cfg) {
    if (weight_bits < 1) throw std::invalid_argument("weight bits must be positive");
    return static_cast<int>(ceil_div(weight_bits, cfg.bits_per_cell));
}

std::int64_t weights_per_crossbar(int weight_bits, const ReramTileConfig& cfg) {
    const std::int64_t cells = static_cast<std::int64_t>(cfg.xbar_rows) * cfg.xbar_cols;
    return cells / cells_per_weight(weight_bits, cfg);
}

std::int64_t crossbars_for_matrix(std::int64_t rows, std::int64_t cols, int weight_bits,
                                  const ReramTileConfig& cfg) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
    const std::int64_t row_blocks = ceil_div(rows, cfg.xbar_rows);
    const std::int64_t col_blocks = ceil_div(cols * cells_per_weight(weight_bits, cfg), cfg.xbar_cols);
    return row_blocks * col_blocks;
}

std::int64_t tiles_for_crossbars(std::int64_t crossbars, const ReramTileConfig& cfg) {
    return ceil_div(crossbars, cfg.xbars_per_tile);
}

std::int64_t cores_for_tiles(std::int64_t tiles, const ReramTileConfig& cfg) {
    return ceil_div(tiles, cfg.tiles_per_core);
}

QuantizedBlock quantize_block(const Matrix& block, int bits) {
    if (bits < 2 || bits > 16) throw std::invalid_argument("quantization bits must be in [2, 16]");
    QuantizedBlock q;
    q.rows = block.rows;
    q.cols = block.cols;
    q.bits = bits;
    q.ints.resize(block.data.size());

    double absmax = 0.0;
    for (double v : block.data) absmax = std::max(absmax, std::fabs(v));
    const double qmax = static_cast<double>((1 << (bits - 1)) - 1);
    q.scale = absmax > 0.0 ? absmax / qmax : 1.0;

    for (std::size_t i = 0; i < block.data.size(); ++i) {
        // nearbyint under the default rounding mode gives round-half-to-even
        double t = std::nearbyint(block.data[i] / q.scale);
        t = std::clamp(t, -qmax, qmax);
        q.ints[i] = static_cast<int>(t);
    }
    return q;
}

Matrix dequantize(const QuantizedBlock& q) {
    Matrix m(q.rows, q.cols);
    for (std::size_t i = 0; i < q.ints.size(); ++i)
        m.data[i] = static_cast<double>(q.ints[i]) * q.scale;
    return m;
}

std::vector<double> dequantize_mvm(const std::vector<double>& int_accumulators, double scale) {
    std::vector<double> out(int_accumulators.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = int_accumulators[i] * scale;
    return out;
}

std::int64_t mvm_latency_cycles(std::int64_t num_vectors, int input_bits,
                                const ReramTileConfig& cfg, bool dequant_enabled) {
    if (num_vectors < 1) throw std::invalid_argument("num_vectors must be positive");
    if (input_bits < 1) throw std::invalid_argument("input_bits must be positive");
    const std::int64_t depth = cfg.pipeline_depth + (dequant_enabled ? 1 : 0);
    return num_vectors * static_cast<std::int64_t>(input_bits) + depth;
}

double energy_joules(std::int64_t active_tiles, double duration_s,
                     const ReramTileConfig& cfg, bool dequant_enabled) {
    if (active_tiles < 0 || duration_s < 0) throw std::invalid_argument("negative energy inputs");
    const double overhead = dequant_enabled ? 1.0 + cfg.dequant_power_overhead : 1.0;
    return static_cast<double>(active_tiles) * cfg.tile_power_w * overhead * duration_s;
}

std::uint64_t rewrite_count(const workload::TransformerConfig& cfg, MappingPolicy policy) {
    cfg.validate();
    if (policy == MappingPolicy::Heterogeneous) return 0;
    // K^T and V are programmed once per sequence; Q and the score matrix
    // stream through the DACs and never touch the cells.
    return 2ull * static_cast<std::uint64_t>(cfg.n) * static_cast<std::uint64_t>(cfg.head_dim());
}

} // namespace tasim::reram
