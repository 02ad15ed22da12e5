#include <doctest.h>

#include <string>

#include "tasim/errors.hpp"
#include "tasim/experiments.hpp"
#include "tasim/presets.hpp"

using namespace tasim;

TEST_CASE("defaults validate and hash stably") {
    const auto cfg = default_experiment_config();
    cfg.validate();
    CHECK(cfg.hash() == default_experiment_config().hash());
    CHECK(cfg.hash().size() == 16);
    CHECK(cfg.canonical_json().find("\"topology\":\"atleus\"") != std::string::npos);
}

TEST_CASE("presets carry the documented model shapes") {
    const auto roberta = presets::make("roberta-base");
    CHECK(roberta.d_model == 768);
    CHECK(roberta.n == 512);
    CHECK(roberta.num_layers == 12);
    CHECK(roberta.num_heads == 12);

    const auto bert = presets::make("bert-large");
    CHECK(bert.d_model == 1024);
    CHECK(bert.n == 512);
    CHECK(bert.num_layers == 24);

    const auto gpt2 = presets::make("gpt2-medium");
    CHECK(gpt2.n == 1024);

    const auto bloom = presets::make("bloom-560m");
    CHECK(bloom.n == 2048);

    CHECK(presets::exists("bert-large"));
    CHECK_FALSE(presets::exists("bert-huge"));
    CHECK_THROWS_AS(presets::make("bert-huge"), ConfigError);
}

TEST_CASE("a full config file parses into every section") {
    const std::string text = R"({
      "workload": {
        "preset": "bert-large",
        "seq_len": 256,
        "precision": "M8F4",
        "batch": 4,
        "phase": "inference"
      },
      "hardware": {
        "systolic": {"rows": 64, "cols": 64},
        "reram": {"clock_hz": 25e6},
        "dram": {"efficiency": 0.9},
        "pipeline_slack": 1.5
      },
      "noc": {"topology": "mesh3d", "router_latency_cycles": 3},
      "cost": {"defect_density_per_cm2": 0.3, "edge_term": "textbook"},
      "sweep": {"shapes": [[16, 16], [32, 16]]},
      "seed": 77
    })";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.preset == "bert-large");
    CHECK(cfg.workload.d_model == 1024);
    CHECK(cfg.workload.n == 256); // preset then explicit override
    CHECK(cfg.workload.precision.mha_bits == 8);
    CHECK(cfg.workload.precision.ff_bits == 4);
    CHECK(cfg.workload.batch == 4);
    CHECK(cfg.workload.phase == workload::Phase::Inference);
    CHECK(cfg.hardware.systolic.rows == 64);
    CHECK(cfg.hardware.reram.clock_hz == 25e6);
    CHECK(cfg.hardware.dram.efficiency == 0.9);
    CHECK(cfg.hardware.pipeline_slack == 1.5);
    CHECK(cfg.topology == noc::TopologyKind::Mesh3D);
    CHECK(cfg.noc_params.router_latency_cycles == 3);
    CHECK(cfg.cost_params.defect_density_per_cm2 == 0.3);
    CHECK(cfg.cost_params.edge_term == cost::EdgeTermVariant::Textbook);
    REQUIRE(cfg.sweep_shapes.size() == 2);
    CHECK(cfg.sweep_shapes[1] == std::pair<int, int>{32, 16});
    CHECK(cfg.seed == 77);
}

TEST_CASE("typos fail fast with the offending key named") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"worklod": {}})"),
                         "unknown key 'worklod' in config", ConfigError);
    try {
        parse_config_text(R"({"workload": {"d_modle": 512}})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("d_modle") != std::string::npos);
    }
}

TEST_CASE("malformed values are config errors, not crashes") {
    CHECK_THROWS_AS(parse_config_text("not json at all"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"([1, 2, 3])"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"workload": {"d_model": "wide"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"workload": {"phase": "training"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"workload": {"precision": "M3F9"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"noc": {"topology": "torus"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"cost": {"edge_term": "fancy"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"sweep": {"shapes": []}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"sweep": {"shapes": [[1]]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"seed": -4})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"workload": {"preset": "nope"}})"), ConfigError);
}

TEST_CASE("invalid parameter combinations are rejected after parsing") {
    CHECK_THROWS_AS(parse_config_text(R"({"workload": {"num_heads": 7}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"hardware": {"reram_cores": 20}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"noc": {"tiers": 5}})"), ConfigError);
}

TEST_CASE("the hash covers result-affecting fields") {
    const auto base = default_experiment_config();

    auto seeded = base;
    seeded.seed = 1;
    CHECK(seeded.hash() != base.hash());

    auto wider = base;
    wider.workload.d_model = 2048;
    CHECK(wider.hash() != base.hash());

    auto quant = base;
    quant.workload.precision.ff_bits = 4;
    CHECK(quant.hash() != base.hash());

    auto topo = base;
    topo.topology = noc::TopologyKind::Mesh3D;
    CHECK(topo.hash() != base.hash());
}

TEST_CASE("precision can be spelled as an object") {
    const auto cfg = parse_config_text(
        R"({"workload": {"precision": {"mha_bits": 4, "ff_bits": 8}}})");
    CHECK(cfg.workload.precision.mha_bits == 4);
    CHECK(cfg.workload.precision.ff_bits == 8);
    CHECK(cfg.workload.precision.label() == "M4F8");
}

TEST_CASE("missing config files are reported as config errors") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}
