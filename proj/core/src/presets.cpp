#include "tasim/presets.hpp"

#include "tasim/errors.hpp"

namespace tasim::presets {

namespace {

workload::TransformerConfig base(int d_model, int seq_len, int layers, int heads) {
    workload::TransformerConfig cfg;
    cfg.d_model = d_model;
    cfg.n = seq_len;
    cfg.num_layers = layers;
    cfg.num_heads = heads;
    cfg.d_ff = 4 * d_model;
    cfg.lora_targets = 2;
    cfg.lora_rank = 32;
    cfg.phase = workload::Phase::FineTune;
    return cfg;
}

} // namespace

std::vector<std::string> names() {
    return {"bert-large", "bloom-560m", "gpt2-medium", "roberta-base"};
}

bool exists(const std::string& name) {
    for (const auto& n : names())
        if (n == name) return true;
    return false;
}

workload::TransformerConfig make(const std::string& name) {
    if (name == "roberta-base") return base(768, 512, 12, 12);
    if (name == "bert-large") return base(1024, 512, 24, 16);
    if (name == "gpt2-medium") return base(1024, 1024, 24, 16);
    if (name == "bloom-560m") return base(1024, 2048, 24, 16);
    std::string known;
    for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

} // namespace tasim::presets
