#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tasim::report {

struct Row {
    std::string key;    // entity the metric describes (stage, shape, topology, plan, ...)
    std::string metric;
    double value = 0.0;
    std::string unit;

    bool operator==(const Row&) const = default;
};

// Flat keyed-metric table, emitted byte-identically for identical configs.
struct Report {
    std::string experiment;
    std::string config_hash;
    std::string tool_version;
    std::string timestamp; // empty unless SOURCE_DATE_EPOCH is set
    std::vector<Row> rows;
    std::vector<std::string> chart_metrics; // bar-chart series; presentation only

    // Values are rounded to six significant digits on insertion so that every
    // output format and the JSON round trip agree exactly.
    void add(std::string key, std::string metric, double value, std::string unit);

    bool operator==(const Report& o) const {
        return experiment == o.experiment && config_hash == o.config_hash &&
               tool_version == o.tool_version && timestamp == o.timestamp && rows == o.rows;
    }
};

std::string format_number(double v); // %.6g
double round_sig6(double v);

std::string to_csv(const Report& r);
std::string to_json(const Report& r);
Report from_json(const std::string& text);
std::string to_svg(const Report& r); // grouped bars over chart_metrics; "" if none

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// SOURCE_DATE_EPOCH as ISO-8601 UTC, or "" when unset (keeps reruns identical)
std::string deterministic_timestamp();

extern const char* const kToolVersion;

} // namespace tasim::report
