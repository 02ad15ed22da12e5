#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tasim/cost.hpp"
#include "tasim/hardware.hpp"
#include "tasim/noc.hpp"
#include "tasim/report.hpp"
#include "tasim/systolic.hpp"
#include "tasim/workload.hpp"

namespace tasim {

struct ExperimentConfig {
    workload::TransformerConfig workload;
    std::string preset; // informational; empty when dims were given directly
    HardwareSpec hardware;
    noc::TopologyKind topology = noc::TopologyKind::Atleus;
    noc::NocParams noc_params;
    cost::CostParams cost_params;
    std::vector<std::pair<int, int>> sweep_shapes; // (rows, cols) candidates
    std::uint64_t seed = 0;

    void validate() const;
    // Canonical serialization of every result-affecting field; hashed into
    // report metadata so identical configs can be recognized from outputs.
    std::string canonical_json() const;
    std::string hash() const;
};

ExperimentConfig default_experiment_config();

// JSON config files.  Unknown keys are rejected (ConfigError) so typos fail
// fast instead of silently running defaults.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

namespace experiments {

struct RunResult {
    std::vector<report::Report> reports; // reports[0] is the experiment summary
};

RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_shape_sweep(const ExperimentConfig& cfg);
RunResult run_quant_sweep(const ExperimentConfig& cfg);
RunResult run_noc_compare(const ExperimentConfig& cfg);
RunResult run_cost_compare(const ExperimentConfig& cfg);

RunResult run(const std::string& experiment, const ExperimentConfig& cfg);

struct EmitOptions {
    std::string out_dir = ".";
    bool csv = true;
    bool json = true;
    bool svg = true;
};

// Writes <out_dir>/<report-name>.{csv,json,svg}; returns written paths.
std::vector<std::string> emit(const RunResult& result, const EmitOptions& opts);

} // namespace experiments

} // namespace tasim
