#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tasim::workload {

enum class Phase { FineTune, Inference };

// Per-weight-group bit widths. Attention and feed-forward base weights may be
// quantized independently; adapter weights and activations stay at 16 bit.
struct PrecisionPlan {
    int mha_bits = 16;
    int ff_bits = 16;
    int lora_bits = 16;
    int activation_bits = 16;

    std::string label() const; // "16-bit" for the all-16 baseline, else e.g. "M8F4"
    void validate() const;
};

struct TransformerConfig {
    int d_model = 1024;
    int n = 1024;          // sequence length
    int d_ff = 0;          // 0 -> 4 * d_model
    int num_layers = 24;
    int num_heads = 16;
    int lora_rank = 32;    // r
    int lora_targets = 2;  // k: number of adapted projection matrices, <= 4
    Phase phase = Phase::FineTune;
    PrecisionPlan precision;
    int batch = 1;

    int ff_dim() const { return d_ff > 0 ? d_ff : 4 * d_model; }
    int head_dim() const { return d_model / num_heads; }
    void validate() const; // throws ConfigError naming the offending field
};

enum class KernelId { MHA1, MHA2, MHA3, MHA4, L1, FF1, FF2, L2, LoRA_Fwd, LoRA_Bwd };

// StaticWeight: pre-trained matrices resident in ReRAM crossbars.
// DynamicMM:    activation-by-activation products and adapter products.
// NonLinear:    softmax / normalization passes.
enum class KernelClass { StaticWeight, DynamicMM, NonLinear };

struct MatDims {
    std::int64_t m = 0, k = 0, n = 0;
    std::int64_t macs() const { return m * k * n; }
};

struct KernelInstance {
    KernelId id;
    int layer_index = 0;
    int adapter_index = -1; // LoRA kernels only
    KernelClass cls;
    // One entry per constituent matrix product (three projections for MHA1,
    // one per head for MHA2/MHA3, the two chained factors for LoRA kernels).
    // NonLinear kernels keep descriptive product dims; their op count below is
    // the elementwise count, not the product volume.
    std::vector<MatDims> products;
    std::uint64_t macs = 0;
    std::uint64_t trainable_params = 0;

    std::string label() const; // e.g. "MHA2", "LoRA_Fwd[1]"
};

const char* kernel_name(KernelId id);
KernelClass kernel_class(KernelId id);

// Closed-form op count for one kernel in one layer.
std::uint64_t kernel_macs(KernelId id, const TransformerConfig& cfg);

// Deterministic kernel list: per layer MHA1..L2 in dependency order, then the
// adapter kernels. 8 + 2k entries per layer when fine-tuning, 8 + k otherwise.
std::vector<KernelInstance> enumerate_kernels(const TransformerConfig& cfg);

const char* phase_name(Phase p);

} // namespace tasim::workload
