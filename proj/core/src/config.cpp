#include "tasim/experiments.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tasim/errors.hpp"
#include "tasim/presets.hpp"

namespace tasim {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::string& ctx,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " +
                              (ctx.empty() ? "config" : ctx));
    }
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void get_int(const json& j, const std::string& ctx, const char* key, int& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number_integer())
            throw ConfigError(ctx + "." + key + " must be an integer");
        out = v->get<int>();
    }
}

void get_i64(const json& j, const std::string& ctx, const char* key, std::int64_t& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number_integer())
            throw ConfigError(ctx + "." + key + " must be an integer");
        out = v->get<std::int64_t>();
    }
}

void get_num(const json& j, const std::string& ctx, const char* key, double& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_number())
            throw ConfigError(ctx + "." + key + " must be a number");
        out = v->get<double>();
    }
}

void get_str(const json& j, const std::string& ctx, const char* key, std::string& out) {
    if (const json* v = find(j, key)) {
        if (!v->is_string())
            throw ConfigError(ctx + "." + key + " must be a string");
        out = v->get<std::string>();
    }
}

workload::PrecisionPlan plan_from_label(const std::string& label) {
    workload::PrecisionPlan plan;
    if (label == "16-bit") return plan;
    // M<mha bits>F<ff bits>, e.g. M8F4
    if (label.size() >= 4 && label[0] == 'M') {
        auto fpos = label.find('F', 1);
        if (fpos != std::string::npos && fpos > 1 && fpos + 1 < label.size()) {
            try {
                plan.mha_bits = std::stoi(label.substr(1, fpos - 1));
                plan.ff_bits = std::stoi(label.substr(fpos + 1));
                plan.validate();
                return plan;
            } catch (const std::invalid_argument&) {
            } catch (const std::out_of_range&) {
            }
        }
    }
    throw ConfigError("precision '" + label + "' is not '16-bit' or 'M<bits>F<bits>'");
}

void parse_precision(const json& j, workload::PrecisionPlan& plan) {
    if (j.is_string()) {
        plan = plan_from_label(j.get<std::string>());
        return;
    }
    if (!j.is_object()) throw ConfigError("workload.precision must be a string label or object");
    reject_unknown_keys(j, "workload.precision",
                        {"mha_bits", "ff_bits", "lora_bits", "activation_bits"});
    get_int(j, "workload.precision", "mha_bits", plan.mha_bits);
    get_int(j, "workload.precision", "ff_bits", plan.ff_bits);
    get_int(j, "workload.precision", "lora_bits", plan.lora_bits);
    get_int(j, "workload.precision", "activation_bits", plan.activation_bits);
}

void parse_workload(const json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) throw ConfigError("workload must be an object");
    reject_unknown_keys(j, "workload",
                        {"preset", "d_model", "seq_len", "d_ff", "num_layers", "num_heads",
                         "lora_rank", "lora_targets", "phase", "precision", "batch"});
    std::string preset;
    get_str(j, "workload", "preset", preset);
    if (!preset.empty()) {
        cfg.workload = presets::make(preset);
        cfg.preset = preset;
    }
    get_int(j, "workload", "d_model", cfg.workload.d_model);
    get_int(j, "workload", "seq_len", cfg.workload.n);
    get_int(j, "workload", "d_ff", cfg.workload.d_ff);
    get_int(j, "workload", "num_layers", cfg.workload.num_layers);
    get_int(j, "workload", "num_heads", cfg.workload.num_heads);
    get_int(j, "workload", "lora_rank", cfg.workload.lora_rank);
    get_int(j, "workload", "lora_targets", cfg.workload.lora_targets);
    get_int(j, "workload", "batch", cfg.workload.batch);
    std::string phase;
    get_str(j, "workload", "phase", phase);
    if (!phase.empty()) {
        if (phase == "finetune")
            cfg.workload.phase = workload::Phase::FineTune;
        else if (phase == "inference")
            cfg.workload.phase = workload::Phase::Inference;
        else
            throw ConfigError("workload.phase must be 'finetune' or 'inference'");
    }
    if (const json* p = find(j, "precision")) parse_precision(*p, cfg.workload.precision);
}

void parse_reram(const json& j, reram::ReramTileConfig& r) {
    if (!j.is_object()) throw ConfigError("hardware.reram must be an object");
    reject_unknown_keys(j, "hardware.reram",
                        {"xbar_rows", "xbar_cols", "bits_per_cell", "xbars_per_tile",
                         "tiles_per_core", "adc_bits", "adcs_per_tile", "dac_bits",
                         "tile_power_w", "tile_area_mm2", "dequant_power_overhead",
                         "dequant_area_overhead", "clock_hz", "pipeline_depth"});
    const std::string ctx = "hardware.reram";
    get_int(j, ctx, "xbar_rows", r.xbar_rows);
    get_int(j, ctx, "xbar_cols", r.xbar_cols);
    get_int(j, ctx, "bits_per_cell", r.bits_per_cell);
    get_int(j, ctx, "xbars_per_tile", r.xbars_per_tile);
    get_int(j, ctx, "tiles_per_core", r.tiles_per_core);
    get_int(j, ctx, "adc_bits", r.adc_bits);
    get_int(j, ctx, "adcs_per_tile", r.adcs_per_tile);
    get_int(j, ctx, "dac_bits", r.dac_bits);
    get_num(j, ctx, "tile_power_w", r.tile_power_w);
    get_num(j, ctx, "tile_area_mm2", r.tile_area_mm2);
    get_num(j, ctx, "dequant_power_overhead", r.dequant_power_overhead);
    get_num(j, ctx, "dequant_area_overhead", r.dequant_area_overhead);
    get_num(j, ctx, "clock_hz", r.clock_hz);
    get_int(j, ctx, "pipeline_depth", r.pipeline_depth);
}

void parse_systolic(const json& j, systolic::SystolicConfig& s) {
    if (!j.is_object()) throw ConfigError("hardware.systolic must be an object");
    reject_unknown_keys(j, "hardware.systolic",
                        {"rows", "cols", "clock_hz", "sram_bytes", "dataflow", "energy_model",
                         "core_power_w", "core_area_mm2", "pe_energy_per_mac_j"});
    const std::string ctx = "hardware.systolic";
    get_int(j, ctx, "rows", s.rows);
    get_int(j, ctx, "cols", s.cols);
    get_num(j, ctx, "clock_hz", s.clock_hz);
    get_i64(j, ctx, "sram_bytes", s.sram_bytes);
    get_num(j, ctx, "core_power_w", s.core_power_w);
    get_num(j, ctx, "core_area_mm2", s.core_area_mm2);
    get_num(j, ctx, "pe_energy_per_mac_j", s.pe_energy_per_mac_j);
    std::string dataflow;
    get_str(j, ctx, "dataflow", dataflow);
    if (!dataflow.empty()) {
        if (dataflow == "output-stationary")
            s.dataflow = systolic::Dataflow::OutputStationary;
        else if (dataflow == "weight-stationary")
            s.dataflow = systolic::Dataflow::WeightStationary;
        else if (dataflow == "input-stationary")
            s.dataflow = systolic::Dataflow::InputStationary;
        else
            throw ConfigError("hardware.systolic.dataflow must be output-stationary, "
                              "weight-stationary or input-stationary");
    }
    std::string emodel;
    get_str(j, ctx, "energy_model", emodel);
    if (!emodel.empty()) {
        if (emodel == "power-time")
            s.energy_model = systolic::EnergyModel::PowerTime;
        else if (emodel == "per-mac")
            s.energy_model = systolic::EnergyModel::PerMac;
        else
            throw ConfigError("hardware.systolic.energy_model must be power-time or per-mac");
    }
}

void parse_dram(const json& j, DramConfig& d) {
    if (!j.is_object()) throw ConfigError("hardware.dram must be an object");
    reject_unknown_keys(j, "hardware.dram",
                        {"bandwidth_bytes_per_s", "efficiency", "capacity_bytes_per_tier",
                         "interface_bits", "clock_hz"});
    const std::string ctx = "hardware.dram";
    get_num(j, ctx, "bandwidth_bytes_per_s", d.bandwidth_bytes_per_s);
    get_num(j, ctx, "efficiency", d.efficiency);
    get_num(j, ctx, "capacity_bytes_per_tier", d.capacity_bytes_per_tier);
    get_int(j, ctx, "interface_bits", d.interface_bits);
    get_num(j, ctx, "clock_hz", d.clock_hz);
}

void parse_hardware(const json& j, HardwareSpec& hw) {
    if (!j.is_object()) throw ConfigError("hardware must be an object");
    reject_unknown_keys(j, "hardware",
                        {"reram", "systolic", "dram", "reram_cores", "systolic_cores",
                         "pipeline_slack"});
    if (const json* r = find(j, "reram")) parse_reram(*r, hw.reram);
    if (const json* s = find(j, "systolic")) parse_systolic(*s, hw.systolic);
    if (const json* d = find(j, "dram")) parse_dram(*d, hw.dram);
    get_int(j, "hardware", "reram_cores", hw.reram_cores);
    get_int(j, "hardware", "systolic_cores", hw.systolic_cores);
    get_num(j, "hardware", "pipeline_slack", hw.pipeline_slack);
}

void parse_noc(const json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) throw ConfigError("noc must be an object");
    reject_unknown_keys(j, "noc",
                        {"topology", "grid", "tiers", "router_latency_cycles", "clock_hz",
                         "link_width_bits", "planar_energy_per_bit_j", "tsv_energy_per_bit_j",
                         "skip_energy_span", "router_energy_per_bit_per_port_j",
                         "router_area_mm2_per_port2", "tsv_pitch_mm", "skip_diameter_factor"});
    std::string topo;
    get_str(j, "noc", "topology", topo);
    if (!topo.empty()) cfg.topology = noc::topology_from_name(topo);
    noc::NocParams& p = cfg.noc_params;
    const std::string ctx = "noc";
    get_int(j, ctx, "grid", p.grid);
    get_int(j, ctx, "tiers", p.tiers);
    get_int(j, ctx, "router_latency_cycles", p.router_latency_cycles);
    get_num(j, ctx, "clock_hz", p.clock_hz);
    get_int(j, ctx, "link_width_bits", p.link_width_bits);
    get_num(j, ctx, "planar_energy_per_bit_j", p.planar_energy_per_bit_j);
    get_num(j, ctx, "tsv_energy_per_bit_j", p.tsv_energy_per_bit_j);
    get_num(j, ctx, "skip_energy_span", p.skip_energy_span);
    get_num(j, ctx, "router_energy_per_bit_per_port_j", p.router_energy_per_bit_per_port_j);
    get_num(j, ctx, "router_area_mm2_per_port2", p.router_area_mm2_per_port2);
    get_num(j, ctx, "tsv_pitch_mm", p.tsv_pitch_mm);
    get_num(j, ctx, "skip_diameter_factor", p.skip_diameter_factor);
}

void parse_cost(const json& j, cost::CostParams& c) {
    if (!j.is_object()) throw ConfigError("cost must be an object");
    reject_unknown_keys(j, "cost",
                        {"wafer_cost", "wafer_diameter_mm", "defect_density_per_cm2",
                         "clustering_alpha", "wafer_yield", "stacking_yield", "tsv_yield",
                         "edge_term"});
    const std::string ctx = "cost";
    get_num(j, ctx, "wafer_cost", c.wafer_cost);
    get_num(j, ctx, "wafer_diameter_mm", c.wafer_diameter_mm);
    get_num(j, ctx, "defect_density_per_cm2", c.defect_density_per_cm2);
    get_num(j, ctx, "clustering_alpha", c.clustering_alpha);
    get_num(j, ctx, "wafer_yield", c.wafer_yield);
    get_num(j, ctx, "stacking_yield", c.stacking_yield);
    get_num(j, ctx, "tsv_yield", c.tsv_yield);
    std::string edge;
    get_str(j, ctx, "edge_term", edge);
    if (!edge.empty()) {
        if (edge == "literal")
            c.edge_term = cost::EdgeTermVariant::Literal;
        else if (edge == "textbook")
            c.edge_term = cost::EdgeTermVariant::Textbook;
        else
            throw ConfigError("cost.edge_term must be 'literal' or 'textbook'");
    }
}

void parse_sweep(const json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) throw ConfigError("sweep must be an object");
    reject_unknown_keys(j, "sweep", {"shapes"});
    if (const json* shapes = find(j, "shapes")) {
        if (!shapes->is_array() || shapes->empty())
            throw ConfigError("sweep.shapes must be a non-empty array of [rows, cols] pairs");
        cfg.sweep_shapes.clear();
        for (const auto& s : *shapes) {
            if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
                !s[1].is_number_integer())
                throw ConfigError("sweep.shapes entries must be [rows, cols] integer pairs");
            cfg.sweep_shapes.emplace_back(s[0].get<int>(), s[1].get<int>());
        }
    }
}

} // namespace

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.sweep_shapes = {{32, 32}, {64, 32}, {128, 16}, {128, 32}, {64, 64}, {256, 16}};
    return cfg;
}

void ExperimentConfig::validate() const {
    workload.validate();
    hardware.validate();
    cost_params.validate();
    if (noc_params.grid < 2) throw ConfigError("noc.grid must be at least 2");
    if (noc_params.tiers != 4)
        throw ConfigError("noc.tiers must be 4 (one systolic tier under three ReRAM tiers)");
    if (noc_params.clock_hz <= 0) throw ConfigError("noc.clock_hz must be positive");
    if (noc_params.link_width_bits <= 0) throw ConfigError("noc.link_width_bits must be positive");
    if (sweep_shapes.empty()) throw ConfigError("sweep.shapes must not be empty");
    for (auto [r, c] : sweep_shapes)
        if (r < 1 || c < 1) throw ConfigError("sweep.shapes entries must be positive");
}

std::string ExperimentConfig::canonical_json() const {
    json j;
    j["workload"] = {
        {"d_model", workload.d_model},
        {"seq_len", workload.n},
        {"d_ff", workload.ff_dim()},
        {"num_layers", workload.num_layers},
        {"num_heads", workload.num_heads},
        {"lora_rank", workload.lora_rank},
        {"lora_targets", workload.lora_targets},
        {"phase", workload::phase_name(workload.phase)},
        {"batch", workload.batch},
        {"precision",
         {{"mha_bits", workload.precision.mha_bits},
          {"ff_bits", workload.precision.ff_bits},
          {"lora_bits", workload.precision.lora_bits},
          {"activation_bits", workload.precision.activation_bits}}},
    };
    const auto& r = hardware.reram;
    const auto& s = hardware.systolic;
    const auto& d = hardware.dram;
    j["hardware"] = {
        {"reram",
         {{"xbar_rows", r.xbar_rows},
          {"xbar_cols", r.xbar_cols},
          {"bits_per_cell", r.bits_per_cell},
          {"xbars_per_tile", r.xbars_per_tile},
          {"tiles_per_core", r.tiles_per_core},
          {"adc_bits", r.adc_bits},
          {"adcs_per_tile", r.adcs_per_tile},
          {"dac_bits", r.dac_bits},
          {"tile_power_w", r.tile_power_w},
          {"tile_area_mm2", r.tile_area_mm2},
          {"dequant_power_overhead", r.dequant_power_overhead},
          {"dequant_area_overhead", r.dequant_area_overhead},
          {"clock_hz", r.clock_hz},
          {"pipeline_depth", r.pipeline_depth}}},
        {"systolic",
         {{"rows", s.rows},
          {"cols", s.cols},
          {"clock_hz", s.clock_hz},
          {"sram_bytes", s.sram_bytes},
          {"dataflow", s.dataflow == systolic::Dataflow::OutputStationary ? "output-stationary"
                       : s.dataflow == systolic::Dataflow::WeightStationary
                           ? "weight-stationary"
                           : "input-stationary"},
          {"energy_model",
           s.energy_model == systolic::EnergyModel::PowerTime ? "power-time" : "per-mac"},
          {"core_power_w", s.core_power_w},
          {"core_area_mm2", s.core_area_mm2},
          {"pe_energy_per_mac_j", s.pe_energy_per_mac_j}}},
        {"dram",
         {{"bandwidth_bytes_per_s", d.bandwidth_bytes_per_s},
          {"efficiency", d.efficiency},
          {"capacity_bytes_per_tier", d.capacity_bytes_per_tier},
          {"interface_bits", d.interface_bits},
          {"clock_hz", d.clock_hz}}},
        {"reram_cores", hardware.reram_cores},
        {"systolic_cores", hardware.systolic_cores},
        {"pipeline_slack", hardware.pipeline_slack},
    };
    const auto& np = noc_params;
    j["noc"] = {
        {"topology", noc::topology_name(topology)},
        {"grid", np.grid},
        {"tiers", np.tiers},
        {"router_latency_cycles", np.router_latency_cycles},
        {"clock_hz", np.clock_hz},
        {"link_width_bits", np.link_width_bits},
        {"planar_energy_per_bit_j", np.planar_energy_per_bit_j},
        {"tsv_energy_per_bit_j", np.tsv_energy_per_bit_j},
        {"skip_energy_span", np.skip_energy_span},
        {"router_energy_per_bit_per_port_j", np.router_energy_per_bit_per_port_j},
        {"router_area_mm2_per_port2", np.router_area_mm2_per_port2},
        {"tsv_pitch_mm", np.tsv_pitch_mm},
        {"skip_diameter_factor", np.skip_diameter_factor},
    };
    const auto& c = cost_params;
    j["cost"] = {
        {"wafer_cost", c.wafer_cost},
        {"wafer_diameter_mm", c.wafer_diameter_mm},
        {"defect_density_per_cm2", c.defect_density_per_cm2},
        {"clustering_alpha", c.clustering_alpha},
        {"wafer_yield", c.wafer_yield},
        {"stacking_yield", c.stacking_yield},
        {"tsv_yield", c.tsv_yield},
        {"edge_term", c.edge_term == cost::EdgeTermVariant::Literal ? "literal" : "textbook"},
    };
    json shapes = json::array();
    for (auto [rows, cols] : sweep_shapes) shapes.push_back({rows, cols});
    j["sweep"] = {{"shapes", std::move(shapes)}};
    j["seed"] = seed;
    return j.dump();
}

std::string ExperimentConfig::hash() const {
    return report::hex64(report::fnv1a64(canonical_json()));
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(j, "", {"workload", "hardware", "noc", "cost", "sweep", "seed"});

    ExperimentConfig cfg = default_experiment_config();
    try {
        if (const json* w = find(j, "workload")) parse_workload(*w, cfg);
        if (const json* h = find(j, "hardware")) parse_hardware(*h, cfg.hardware);
        if (const json* n = find(j, "noc")) parse_noc(*n, cfg);
        if (const json* c = find(j, "cost")) parse_cost(*c, cfg.cost_params);
        if (const json* s = find(j, "sweep")) parse_sweep(*s, cfg);
        if (const json* seed = find(j, "seed")) {
            if (!seed->is_number_unsigned() && !seed->is_number_integer())
                throw ConfigError("seed must be a non-negative integer");
            if (seed->is_number_integer() && seed->get<std::int64_t>() < 0)
                throw ConfigError("seed must be a non-negative integer");
            cfg.seed = seed->get<std::uint64_t>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace tasim
