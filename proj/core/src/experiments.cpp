#include "tasim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "tasim/errors.hpp"
#include "tasim/mapping.hpp"
#include "tasim/reram.hpp"

namespace tasim::experiments {

namespace {

using workload::KernelClass;

report::Report make_report(const std::string& name, const ExperimentConfig& cfg) {
    report::Report r;
    r.experiment = name;
    r.config_hash = cfg.hash();
    r.tool_version = report::kToolVersion;
    r.timestamp = report::deterministic_timestamp();
    return r;
}

struct MatrixAlloc {
    std::string name;
    std::int64_t rows = 0, cols = 0;
    int bits = 16;
    std::int64_t crossbars = 0, tiles = 0, cores = 0;
};

// Per-matrix crossbar allocation for one layer's static weights. Each matrix
// gets its own tiles; projection matrices are not packed together.
std::vector<MatrixAlloc> layer_weight_allocation(const workload::TransformerConfig& cfg,
                                                 const reram::ReramTileConfig& rc) {
    const std::int64_t d = cfg.d_model, dff = cfg.ff_dim();
    const int mb = cfg.precision.mha_bits, fb = cfg.precision.ff_bits;
    std::vector<MatrixAlloc> out = {
        {"WQ", d, d, mb}, {"WK", d, d, mb}, {"WV", d, d, mb}, {"WO", d, d, mb},
        {"FF1", d, dff, fb}, {"FF2", dff, d, fb},
    };
    for (auto& m : out) {
        m.crossbars = reram::crossbars_for_matrix(m.rows, m.cols, m.bits, rc);
        m.tiles = reram::tiles_for_crossbars(m.crossbars, rc);
        m.cores = reram::cores_for_tiles(m.tiles, rc);
    }
    return out;
}

double stage2_compute_seconds(const mapping::Stage& s2, const systolic::SystolicConfig& sys) {
    double t = 0.0;
    for (const auto& k : s2.kernels) {
        if (k.cls == KernelClass::DynamicMM)
            for (const auto& job : systolic::systolic_jobs(k))
                t += static_cast<double>(systolic::analytic_cycles(job, sys)) / sys.clock_hz;
        else
            t += static_cast<double>(systolic::elementwise_cycles(k.macs, sys)) / sys.clock_hz;
    }
    return t;
}

double stage2_energy_joules(const mapping::Stage& s2, const systolic::SystolicConfig& sys) {
    if (sys.energy_model == systolic::EnergyModel::PowerTime)
        return sys.core_power_w * stage2_compute_seconds(s2, sys);
    double e = 0.0;
    for (const auto& k : s2.kernels) {
        if (k.cls == KernelClass::DynamicMM)
            for (const auto& job : systolic::systolic_jobs(k)) e += systolic::energy_joules(job, sys);
        else
            e += static_cast<double>(k.macs) * sys.pe_energy_per_mac_j;
    }
    return e;
}

double mean_mm_utilization(const mapping::Stage& s2, const systolic::SystolicConfig& sys) {
    double sum = 0.0;
    int jobs = 0;
    for (const auto& k : s2.kernels)
        if (k.cls == KernelClass::DynamicMM)
            for (const auto& job : systolic::systolic_jobs(k)) {
                sum += systolic::utilization(job, sys);
                ++jobs;
            }
    return jobs > 0 ? sum / jobs : 0.0;
}

struct EnergyBreakdown {
    double reram_j = 0.0;
    double systolic_j = 0.0;
    double noc_j = 0.0;
    double total() const { return reram_j + systolic_j + noc_j; }
};

// Energy for one input sequence through all layers. ReRAM tiles burn power for
// the duration of the pass that streams through them; the systolic core for its
// compute time; link/router energy comes from the traffic evaluation.
EnergyBreakdown system_energy(const ExperimentConfig& cfg, const mapping::PipelineSchedule& sched,
                              double noc_energy_j) {
    const auto& hw = cfg.hardware;
    const auto& wl = cfg.workload;
    const bool deq_mha = wl.precision.mha_bits < 16;
    const bool deq_ff = wl.precision.ff_bits < 16;
    const double f_r = hw.reram.clock_hz;
    const int act = wl.precision.activation_bits;

    const double pass_mha =
        static_cast<double>(reram::mvm_latency_cycles(wl.n, act, hw.reram, deq_mha)) / f_r;
    const double pass_ff =
        static_cast<double>(reram::mvm_latency_cycles(wl.n, act, hw.reram, deq_ff)) / f_r;

    EnergyBreakdown eb;
    double layer_reram = 0.0;
    for (const auto& m : layer_weight_allocation(wl, hw.reram)) {
        const bool is_ff = m.name == "FF1" || m.name == "FF2";
        layer_reram += reram::energy_joules(m.tiles, is_ff ? pass_ff : pass_mha, hw.reram,
                                            is_ff ? deq_ff : deq_mha);
    }
    eb.reram_j = layer_reram * wl.num_layers;
    eb.systolic_j = stage2_energy_joules(sched.stages[1], hw.systolic) * wl.num_layers;
    eb.noc_j = noc_energy_j;
    return eb;
}

noc::NocEval evaluate_for(const ExperimentConfig& cfg, noc::TopologyKind kind,
                          noc::Topology* topo_out = nullptr) {
    noc::Topology topo = noc::build_topology(kind, cfg.noc_params);
    const auto placement = noc::default_placement(topo, cfg.workload.num_layers);
    const auto traffic = noc::gen_traffic(cfg.workload, topo, placement);
    auto eval = noc::evaluate_noc(topo, traffic);
    if (topo_out) *topo_out = std::move(topo);
    return eval;
}

// Per-tier die areas for the stacked-cost model: compute cores plus that
// tier's routers and TSV pads (skip TSVs pass through intermediate tiers).
std::vector<double> tier_die_areas(const ExperimentConfig& cfg, const noc::Topology& topo) {
    const auto& hw = cfg.hardware;
    const auto& p = topo.params;
    const bool dequant_any =
        cfg.workload.precision.mha_bits < 16 || cfg.workload.precision.ff_bits < 16;
    const double tile_area =
        hw.reram.tile_area_mm2 * (1.0 + (dequant_any ? hw.reram.dequant_area_overhead : 0.0));
    const int reram_cores_per_tier = hw.reram_cores / (p.tiers - 1);

    std::vector<double> areas(static_cast<std::size_t>(p.tiers), 0.0);
    areas[0] = hw.systolic_cores * hw.systolic.core_area_mm2;
    for (int t = 1; t < p.tiers; ++t)
        areas[static_cast<std::size_t>(t)] = reram_cores_per_tier * hw.reram.tiles_per_core * tile_area;

    // routers: recompute the per-node port rule (degree + local; skip TSVs
    // terminate at the core interface on tier 0)
    std::vector<int> ports(topo.nodes.size(), 1);
    for (const auto& l : topo.links) {
        if (l.kind == noc::LinkKind::TsvSkip) {
            const int reram_end = topo.nodes[static_cast<std::size_t>(l.a)].tier == 0 ? l.b : l.a;
            ports[static_cast<std::size_t>(reram_end)] += 1;
        } else {
            ports[static_cast<std::size_t>(l.a)] += 1;
            ports[static_cast<std::size_t>(l.b)] += 1;
        }
    }
    for (const auto& n : topo.nodes)
        areas[static_cast<std::size_t>(n.tier)] +=
            p.router_area_mm2_per_port2 * ports[static_cast<std::size_t>(n.id)] *
            ports[static_cast<std::size_t>(n.id)];

    const double v_pad = p.tsv_pitch_mm * p.tsv_pitch_mm;
    const double s_pad = (p.tsv_pitch_mm * p.skip_diameter_factor) * (p.tsv_pitch_mm * p.skip_diameter_factor);
    for (const auto& l : topo.links) {
        if (l.kind == noc::LinkKind::TsvVertical) {
            areas[static_cast<std::size_t>(topo.nodes[static_cast<std::size_t>(l.a)].tier)] += v_pad;
            areas[static_cast<std::size_t>(topo.nodes[static_cast<std::size_t>(l.b)].tier)] += v_pad;
        } else if (l.kind == noc::LinkKind::TsvSkip) {
            for (auto& a : areas) a += s_pad; // pass-through pad on every tier
        }
    }
    return areas;
}

} // namespace

RunResult run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& wl = cfg.workload;
    const auto& hw = cfg.hardware;

    const auto kernels = workload::enumerate_kernels(wl);
    const auto part = mapping::partition(kernels);
    const auto share = mapping::compute_share(wl);

    auto sched = mapping::build_pipeline(wl, hw);
    noc::Topology topo;
    const auto noc_eval = evaluate_for(cfg, cfg.topology, &topo);
    sched = mapping::with_comm_delays(std::move(sched), noc_eval.per_stage_comm_delay_s);
    const auto timing = mapping::pipeline_timing(sched, wl.num_layers, wl.batch);
    const auto energy = system_energy(cfg, sched, noc_eval.total_energy_j);

    report::Report rep = make_report("simulate", cfg);
    const std::size_t per_layer = kernels.size() / static_cast<std::size_t>(wl.num_layers);
    std::uint64_t macs_per_layer = 0;
    for (std::size_t i = 0; i < per_layer; ++i) macs_per_layer += kernels[i].macs;

    rep.add("workload", "d_model", wl.d_model, "");
    rep.add("workload", "seq_len", wl.n, "");
    rep.add("workload", "num_layers", wl.num_layers, "");
    rep.add("workload", "num_heads", wl.num_heads, "");
    rep.add("workload", "lora_rank", wl.lora_rank, "");
    rep.add("workload", "lora_targets", wl.lora_targets, "");
    rep.add("workload", "kernels_per_layer", static_cast<double>(per_layer), "");
    rep.add("workload", "ops_per_layer", static_cast<double>(macs_per_layer), "MAC");

    rep.add("partition", "static_ops", static_cast<double>(part.mm_reram), "MAC");
    rep.add("partition", "dynamic_ops", static_cast<double>(part.mm_systolic), "MAC");
    rep.add("partition", "exact_ratio", share.exact_ratio, "ratio");
    rep.add("partition", "approx_ratio", share.approx_ratio, "ratio");
    rep.add("partition", "reram_share", share.reram_share_pct, "%");

    rep.add("pipeline", "stage_time", timing.stage_time_s, "s");
    rep.add("pipeline", "throughput", timing.throughput_per_s, "1/s");
    rep.add("pipeline", "latency", timing.end_to_end_latency_s, "s");
    rep.add("pipeline", "lora_load", sched.lora_load_s, "s");
    rep.add("pipeline", "lora_bytes", static_cast<double>(sched.lora_bytes), "B");

    rep.add("systolic", "mean_utilization", mean_mm_utilization(sched.stages[1], hw.systolic), "ratio");
    rep.add("systolic", "pe_count", static_cast<double>(hw.systolic.pe_count()), "");

    std::int64_t layer_crossbars = 0, layer_tiles = 0;
    for (const auto& m : layer_weight_allocation(wl, hw.reram)) {
        layer_crossbars += m.crossbars;
        layer_tiles += m.tiles;
    }
    rep.add("reram", "crossbars_per_layer", static_cast<double>(layer_crossbars), "");
    rep.add("reram", "tiles_per_layer", static_cast<double>(layer_tiles), "");
    rep.add("rewrites", "all_on_reram",
            static_cast<double>(reram::rewrite_count(wl, reram::MappingPolicy::AllOnReram)), "");
    rep.add("rewrites", "heterogeneous",
            static_cast<double>(reram::rewrite_count(wl, reram::MappingPolicy::Heterogeneous)), "");

    rep.add("energy", "reram", energy.reram_j, "J");
    rep.add("energy", "systolic", energy.systolic_j, "J");
    rep.add("energy", "noc", energy.noc_j, "J");
    rep.add("energy", "total", energy.total(), "J");
    rep.add("energy", "reram_share", 100.0 * energy.reram_j / energy.total(), "%");
    rep.add("energy", "systolic_share", 100.0 * energy.systolic_j / energy.total(), "%");
    rep.add("energy", "noc_share", 100.0 * energy.noc_j / energy.total(), "%");

    rep.add("noc", "comm_delay", noc_eval.total_comm_delay_s, "s");
    rep.add("noc", "area", noc_eval.area_mm2, "mm^2");

    report::Report stages = make_report("stage_delays", cfg);
    stages.chart_metrics = {"compute_delay", "comm_delay"};
    const auto static_macs = mapping::stage_static_macs(wl);
    for (int i = 0; i < 4; ++i) {
        const auto& st = sched.stages[i];
        const std::string key = mapping::stage_name(st.id);
        stages.add(key, "compute_delay", st.compute_delay_s, "s");
        stages.add(key, "comm_delay", st.comm_delay_s, "s");
        stages.add(key, "total_delay", st.total_delay_s(), "s");
        stages.add(key, "static_ops", static_cast<double>(static_macs[static_cast<std::size_t>(i)]), "MAC");
    }

    return {{std::move(rep), std::move(stages)}};
}

RunResult run_shape_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto sched = mapping::build_pipeline(cfg.workload, cfg.hardware);
    const double normalizer = mapping::slowest_reram_stage_delay(sched);

    std::vector<systolic::SystolicConfig> candidates;
    for (auto [rows, cols] : cfg.sweep_shapes) {
        systolic::SystolicConfig c = cfg.hardware.systolic;
        c.rows = rows;
        c.cols = cols;
        candidates.push_back(c);
    }
    const auto entries = systolic::shape_sweep(sched.stages[1].kernels, candidates, normalizer);

    report::Report rep = make_report("shape_sweep", cfg);
    rep.chart_metrics = {"cumulative_normalized_delay"};
    report::Report kern = make_report("shape_sweep_kernels", cfg);
    int rank = 1;
    for (const auto& e : entries) {
        const std::string key = e.config.shape_label();
        rep.add(key, "rank", rank++, "");
        rep.add(key, "pe_count", static_cast<double>(e.config.pe_count()), "");
        rep.add(key, "cumulative_delay", e.cumulative_delay_s, "s");
        rep.add(key, "cumulative_normalized_delay", e.cumulative_normalized_delay, "ratio");
        rep.add(key, "feasible", e.feasible ? 1 : 0, "");
        rep.add(key, "mean_utilization", e.mean_utilization, "ratio");
        for (const auto& kr : e.kernels) kern.add(key, kr.kernel, kr.normalized_delay, "ratio");
    }
    rep.add("reference", "reram_stage_delay", normalizer, "s");

    return {{std::move(rep), std::move(kern)}};
}

RunResult run_quant_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<std::pair<int, int>> plans = {
        {16, 16}, {8, 8}, {8, 4}, {4, 8}, {4, 4}};

    report::Report rep = make_report("quant_sweep", cfg);
    rep.chart_metrics = {"energy_vs_16bit"};
    report::Report alloc = make_report("crossbar_allocation", cfg);

    double baseline = 0.0;
    for (auto [mb, fb] : plans) {
        ExperimentConfig pc = cfg;
        pc.workload.precision.mha_bits = mb;
        pc.workload.precision.ff_bits = fb;
        const std::string key = pc.workload.precision.label();

        const auto sched = mapping::build_pipeline(pc.workload, pc.hardware);
        const auto noc_eval = evaluate_for(pc, pc.topology);
        const auto energy = system_energy(pc, sched, noc_eval.total_energy_j);
        if (baseline == 0.0) baseline = energy.total(); // first plan is the 16-bit reference

        rep.add(key, "reram_energy", energy.reram_j, "J");
        rep.add(key, "systolic_energy", energy.systolic_j, "J");
        rep.add(key, "noc_energy", energy.noc_j, "J");
        rep.add(key, "total_energy", energy.total(), "J");
        rep.add(key, "energy_vs_16bit", energy.total() / baseline, "ratio");

        std::int64_t xb = 0, tiles = 0, cores = 0;
        for (const auto& m : layer_weight_allocation(pc.workload, pc.hardware.reram)) {
            alloc.add(key, m.name + ".crossbars", static_cast<double>(m.crossbars), "");
            alloc.add(key, m.name + ".tiles", static_cast<double>(m.tiles), "");
            alloc.add(key, m.name + ".cores", static_cast<double>(m.cores), "");
            xb += m.crossbars;
            tiles += m.tiles;
            cores += m.cores;
        }
        alloc.add(key, "layer.crossbars", static_cast<double>(xb), "");
        alloc.add(key, "layer.tiles", static_cast<double>(tiles), "");
        alloc.add(key, "layer.cores", static_cast<double>(cores), "");
        rep.add(key, "crossbars_per_layer", static_cast<double>(xb), "");
        rep.add(key, "tiles_per_layer", static_cast<double>(tiles), "");
    }

    return {{std::move(rep), std::move(alloc)}};
}

RunResult run_noc_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    const noc::TopologyKind kinds[] = {noc::TopologyKind::Mesh3D, noc::TopologyKind::Mesh3DSkip,
                                       noc::TopologyKind::Atleus};

    report::Report rep = make_report("noc_compare", cfg);
    rep.chart_metrics = {"edp_vs_mesh3d", "area_vs_mesh3d", "cost_vs_mesh3d"};
    report::Report hist = make_report("noc_port_histogram", cfg);

    double edp0 = 0.0, area0 = 0.0, cost0 = 0.0;
    for (noc::TopologyKind kind : kinds) {
        noc::Topology topo;
        const auto eval = evaluate_for(cfg, kind, &topo);
        const double stack = cost::stack_cost_3d(tier_die_areas(cfg, topo), cfg.cost_params);
        if (kind == noc::TopologyKind::Mesh3D) {
            edp0 = eval.edp_js;
            area0 = eval.area_mm2;
            cost0 = stack;
        }
        const std::string key = noc::topology_name(kind);
        rep.add(key, "energy", eval.total_energy_j, "J");
        rep.add(key, "comm_delay", eval.total_comm_delay_s, "s");
        rep.add(key, "edp", eval.edp_js, "J*s");
        rep.add(key, "edp_vs_mesh3d", eval.edp_js / edp0, "ratio");
        rep.add(key, "router_area", eval.router_area_mm2, "mm^2");
        rep.add(key, "tsv_area", eval.tsv_area_mm2, "mm^2");
        rep.add(key, "area", eval.area_mm2, "mm^2");
        rep.add(key, "area_vs_mesh3d", eval.area_mm2 / area0, "ratio");
        rep.add(key, "max_ports", noc::max_ports(topo), "");
        rep.add(key, "stack_cost", stack, "");
        rep.add(key, "cost_vs_mesh3d", stack / cost0, "ratio");

        for (const auto& [ports, count] : noc::port_histogram(topo))
            hist.add(key, "ports_" + std::to_string(ports), count, "");
    }

    return {{std::move(rep), std::move(hist)}};
}

RunResult run_cost_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& cp = cfg.cost_params;

    report::Report rep = make_report("cost_compare", cfg);
    rep.chart_metrics = {"cost"};

    // monolithic 400 mm^2 die versus four stacked 100 mm^2 tiers
    const double a2d = 400.0, a3d = 100.0;
    const double dies_2d = cost::dies_per_wafer(a2d, cp);
    const double dies_3d = cost::dies_per_wafer(a3d, cp);
    const double y_2d = cost::die_yield(a2d, cp);
    const double y_3d = cost::die_yield(a3d, cp);
    const double c_2d = cost::die_cost(a2d, cp);
    const double c_3d_dies = 4.0 * cost::die_cost(a3d, cp);
    const double c_3d_stacked = cost::stack_cost_3d({a3d, a3d, a3d, a3d}, cp);

    rep.add("2d-400mm2", "dies_per_wafer", dies_2d, "");
    rep.add("2d-400mm2", "die_yield", y_2d, "ratio");
    rep.add("2d-400mm2", "cost", c_2d, "");
    rep.add("3d-4x100mm2", "dies_per_wafer", dies_3d, "");
    rep.add("3d-4x100mm2", "die_yield", y_3d, "ratio");
    rep.add("3d-4x100mm2", "cost", c_3d_dies, "");
    rep.add("3d-4x100mm2", "cost_stacked", c_3d_stacked, "");
    rep.add("compare", "cost_2d_over_3d", c_2d / c_3d_dies, "ratio");
    rep.add("compare", "cost_2d_over_3d_stacked", c_2d / c_3d_stacked, "ratio");

    // the modeled accelerator itself, on its configured topology
    noc::Topology topo = noc::build_topology(cfg.topology, cfg.noc_params);
    const auto areas = tier_die_areas(cfg, topo);
    for (std::size_t t = 0; t < areas.size(); ++t)
        rep.add("accelerator", "tier" + std::to_string(t) + "_area", areas[t], "mm^2");
    rep.add("accelerator", "stack_cost", cost::stack_cost_3d(areas, cp), "");
    double total_area = 0.0;
    for (double a : areas) total_area += a;
    rep.add("accelerator", "equivalent_2d_cost", cost::die_cost(total_area, cp), "");

    return {{std::move(rep)}};
}

RunResult run(const std::string& experiment, const ExperimentConfig& cfg) {
    if (experiment == "simulate") return run_simulate(cfg);
    if (experiment == "shape-sweep") return run_shape_sweep(cfg);
    if (experiment == "quant-sweep") return run_quant_sweep(cfg);
    if (experiment == "noc-compare") return run_noc_compare(cfg);
    if (experiment == "cost-compare") return run_cost_compare(cfg);
    throw ConfigError("unknown experiment '" + experiment + "'");
}

std::vector<std::string> emit(const RunResult& result, const EmitOptions& opts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + opts.out_dir + ": " + ec.message());

    auto write_file = [](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << body;
    };

    std::vector<std::string> paths;
    for (const auto& rep : result.reports) {
        const std::string base = opts.out_dir + "/" + rep.experiment;
        if (opts.csv) {
            write_file(base + ".csv", report::to_csv(rep));
            paths.push_back(base + ".csv");
        }
        if (opts.json) {
            write_file(base + ".json", report::to_json(rep));
            paths.push_back(base + ".json");
        }
        if (opts.svg) {
            const std::string svg = report::to_svg(rep);
            if (!svg.empty()) {
                write_file(base + ".svg", svg);
                paths.push_back(base + ".svg");
            }
        }
    }
    return paths;
}

} // namespace tasim::experiments
