// tasim: design-space exploration for a stacked in-memory-compute + systolic
// transformer accelerator. Prints the primary result table to stdout and
// writes csv/json/svg artifacts to the output directory.
//
// Exit codes: 0 success, 2 invalid configuration, 3 infeasible mapping.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tasim/errors.hpp"
#include "tasim/experiments.hpp"
#include "tasim/presets.hpp"
#include "tasim/report.hpp"

namespace {

tasim::experiments::EmitOptions parse_formats(const std::vector<std::string>& formats,
                                              const std::string& out_dir) {
    tasim::experiments::EmitOptions opts;
    opts.out_dir = out_dir;
    if (formats.empty()) return opts; // all formats by default
    opts.csv = opts.json = opts.svg = false;
    for (const auto& f : formats) {
        if (f == "csv")
            opts.csv = true;
        else if (f == "json")
            opts.json = true;
        else if (f == "svg")
            opts.svg = true;
        else
            throw tasim::ConfigError("unknown --format '" + f + "' (use csv, json, svg)");
    }
    return opts;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"design-space explorer for a 3D-stacked transformer accelerator"};
    app.require_subcommand(1);
    app.fallthrough(); // allow global flags after the subcommand name

    std::string config_path, preset, out_dir = "out";
    std::vector<std::string> formats;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--preset", preset, "named model shape (overrides the config's workload)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", formats, "output formats: csv, json, svg (default all)")
        ->delimiter(',');
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed recorded in the config hash");

    auto* sim = app.add_subcommand("simulate", "partition, schedule and cost one workload");
    auto* sweep = app.add_subcommand("sweep", "sweep one design axis");
    std::string axis = "shape";
    sweep->add_option("--axis", axis, "shape | quant")->capture_default_str();
    auto* noc = app.add_subcommand("noc", "compare interconnect topologies");
    bool noc_compare = false;
    noc->add_flag("--compare", noc_compare, "evaluate all three topologies (default action)");
    auto* cost = app.add_subcommand("cost", "manufacturing cost and yield");
    bool cost_2d = false;
    cost->add_flag("--compare-2d", cost_2d, "compare against a monolithic 2D die (default action)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors are configuration errors
    }

    try {
        tasim::ExperimentConfig cfg = config_path.empty()
                                          ? tasim::default_experiment_config()
                                          : tasim::load_config_file(config_path);
        if (!preset.empty()) {
            tasim::workload::TransformerConfig fresh = tasim::presets::make(preset);
            // keep config-file precision/batch choices, swap the model shape
            fresh.precision = cfg.workload.precision;
            fresh.batch = cfg.workload.batch;
            cfg.workload = fresh;
            cfg.preset = preset;
        }
        if (seed_opt->count() > 0) cfg.seed = seed;
        cfg.validate();

        std::string experiment;
        if (sim->parsed()) {
            experiment = "simulate";
        } else if (sweep->parsed()) {
            if (axis == "shape")
                experiment = "shape-sweep";
            else if (axis == "quant")
                experiment = "quant-sweep";
            else
                throw tasim::ConfigError("--axis must be 'shape' or 'quant'");
        } else if (noc->parsed()) {
            experiment = "noc-compare";
        } else if (cost->parsed()) {
            experiment = "cost-compare";
        }

        const auto result = tasim::experiments::run(experiment, cfg);
        const auto opts = parse_formats(formats, out_dir);
        const auto paths = tasim::experiments::emit(result, opts);

        std::cout << tasim::report::to_csv(result.reports.front());
        for (const auto& p : paths) std::cerr << "wrote " << p << "\n";
        return 0;
    } catch (const tasim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tasim::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
