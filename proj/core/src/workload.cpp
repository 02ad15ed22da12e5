#include "tasim/workload.hpp"

#include "tasim/errors.hpp"

#include <set>

namespace tasim::workload {

namespace {

std::uint64_t u64(std::int64_t v) { return static_cast<std::uint64_t>(v); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

std::string PrecisionPlan::label() const {
    if (mha_bits == 16 && ff_bits == 16) return "16-bit";
    return "M" + std::to_string(mha_bits) + "F" + std::to_string(ff_bits);
}

void PrecisionPlan::validate() const {
    const std::set<int> ok = {4, 8, 16};
    require(ok.count(mha_bits) == 1, "precision.mha_bits must be 4, 8 or 16");
    require(ok.count(ff_bits) == 1, "precision.ff_bits must be 4, 8 or 16");
    require(lora_bits == 16, "precision.lora_bits must be 16 (adapters are not quantized)");
    require(ok.count(activation_bits) == 1, "precision.activation_bits must be 4, 8 or 16");
}

void TransformerConfig::validate() const {
    require(d_model >= 1, "workload.d_model must be positive");
    require(n >= 1, "workload.n must be positive");
    require(num_layers >= 1, "workload.num_layers must be positive");
    require(num_heads >= 1, "workload.num_heads must be positive");
    require(d_model % num_heads == 0, "workload.d_model must be divisible by workload.num_heads");
    require(d_ff >= 0, "workload.d_ff must be non-negative (0 selects 4*d_model)");
    require(lora_rank >= 1, "workload.lora_rank must be positive");
    require(lora_rank < d_model, "workload.lora_rank must be smaller than workload.d_model");
    require(lora_targets >= 0 && lora_targets <= 4,
            "workload.lora_targets must be between 0 and 4 (adapted projection matrices)");
    require(batch >= 1, "workload.batch must be positive");
    precision.validate();
}

const char* kernel_name(KernelId id) {
    switch (id) {
        case KernelId::MHA1: return "MHA1";
        case KernelId::MHA2: return "MHA2";
        case KernelId::MHA3: return "MHA3";
        case KernelId::MHA4: return "MHA4";
        case KernelId::L1: return "L1";
        case KernelId::FF1: return "FF1";
        case KernelId::FF2: return "FF2";
        case KernelId::L2: return "L2";
        case KernelId::LoRA_Fwd: return "LoRA_Fwd";
        case KernelId::LoRA_Bwd: return "LoRA_Bwd";
    }
    return "?";
}

KernelClass kernel_class(KernelId id) {
    switch (id) {
        case KernelId::MHA1:
        case KernelId::MHA4:
        case KernelId::FF1:
        case KernelId::FF2:
            return KernelClass::StaticWeight;
        case KernelId::MHA2:
        case KernelId::LoRA_Fwd:
        case KernelId::LoRA_Bwd:
            return KernelClass::DynamicMM;
        case KernelId::MHA3:
        case KernelId::L1:
        case KernelId::L2:
            return KernelClass::NonLinear;
    }
    return KernelClass::NonLinear;
}

std::uint64_t kernel_macs(KernelId id, const TransformerConfig& cfg) {
    const std::uint64_t d = u64(cfg.d_model);
    const std::uint64_t n = u64(cfg.n);
    const std::uint64_t dff = u64(cfg.ff_dim());
    const std::uint64_t r = u64(cfg.lora_rank);
    switch (id) {
        case KernelId::MHA1: return 3 * d * d * n;       // Q, K, V projections
        case KernelId::MHA2: return d * n * n;           // scores, summed over heads
        case KernelId::MHA3: return d * n;               // softmax-weighted pass, elementwise count
        case KernelId::MHA4: return d * d * n;           // output projection
        case KernelId::L1: return d * n;
        case KernelId::FF1: return d * dff * n;
        case KernelId::FF2: return d * dff * n;
        case KernelId::L2: return d * n;
        case KernelId::LoRA_Fwd: return 2 * d * r * n;   // two chained low-rank products
        case KernelId::LoRA_Bwd: return 2 * d * r * n;
    }
    return 0;
}

std::string KernelInstance::label() const {
    std::string s = kernel_name(id);
    if (adapter_index >= 0) s += "[" + std::to_string(adapter_index) + "]";
    return s;
}

std::vector<KernelInstance> enumerate_kernels(const TransformerConfig& cfg) {
    cfg.validate();
    const std::int64_t d = cfg.d_model;
    const std::int64_t n = cfg.n;
    const std::int64_t dff = cfg.ff_dim();
    const std::int64_t dh = cfg.head_dim();
    const std::int64_t r = cfg.lora_rank;

    std::vector<KernelInstance> out;
    out.reserve(static_cast<std::size_t>(cfg.num_layers) * (8 + 2 * cfg.lora_targets));

    for (int layer = 0; layer < cfg.num_layers; ++layer) {
        auto add = [&](KernelId id, std::vector<MatDims> products, int adapter = -1) {
            KernelInstance ki;
            ki.id = id;
            ki.layer_index = layer;
            ki.adapter_index = adapter;
            ki.cls = kernel_class(id);
            ki.products = std::move(products);
            ki.macs = kernel_macs(id, cfg);
            if ((id == KernelId::LoRA_Fwd || id == KernelId::LoRA_Bwd) && cfg.phase == Phase::FineTune)
                ki.trainable_params = 2 * u64(d) * u64(r); // A (d x r) + B (r x d)
            out.push_back(std::move(ki));
        };

        add(KernelId::MHA1, {{n, d, d}, {n, d, d}, {n, d, d}});
        add(KernelId::MHA2, std::vector<MatDims>(static_cast<std::size_t>(cfg.num_heads), MatDims{n, dh, n}));
        add(KernelId::MHA3, std::vector<MatDims>(static_cast<std::size_t>(cfg.num_heads), MatDims{n, n, dh}));
        add(KernelId::MHA4, {{n, d, d}});
        add(KernelId::L1, {{n, d, 1}});
        add(KernelId::FF1, {{n, d, dff}});
        add(KernelId::FF2, {{n, dff, d}});
        add(KernelId::L2, {{n, d, 1}});

        for (int a = 0; a < cfg.lora_targets; ++a) {
            add(KernelId::LoRA_Fwd, {{n, d, r}, {n, r, d}}, a);
            if (cfg.phase == Phase::FineTune)
                add(KernelId::LoRA_Bwd, {{n, d, r}, {n, r, d}}, a);
        }
    }
    return out;
}

const char* phase_name(Phase p) {
    return p == Phase::FineTune ? "finetune" : "inference";
}

} // namespace tasim::workload
