#include "tasim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <stdexcept>

#include <json.hpp>

namespace tasim::report {

const char* const kToolVersion = "0.1.0";

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double round_sig6(double v) {
    return std::strtod(format_number(v).c_str(), nullptr);
}

void Report::add(std::string key, std::string metric, double value, std::string unit) {
    rows.push_back({std::move(key), std::move(metric), round_sig6(value), std::move(unit)});
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string deterministic_timestamp() {
    const char* sde = std::getenv("SOURCE_DATE_EPOCH");
    if (!sde || !*sde) return "";
    char* end = nullptr;
    long long secs = std::strtoll(sde, &end, 10);
    if (end == sde) return "";
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
#if defined(_WIN32)
    gmtime_s(&tm, &t);
#else
    gmtime_r(&t, &tm);
#endif
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

// Cell values never contain commas or quotes today; fail loudly if that changes
// instead of silently emitting a malformed table.
void check_csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") != std::string::npos)
        throw std::invalid_argument("csv cell would need quoting: " + s);
}

} // namespace

std::string to_csv(const Report& r) {
    std::string out;
    out += "# experiment: " + r.experiment + "\n";
    out += "# config_hash: " + r.config_hash + "\n";
    out += "# tool_version: " + r.tool_version + "\n";
    if (!r.timestamp.empty()) out += "# timestamp: " + r.timestamp + "\n";
    out += "key,metric,value,unit\n";
    for (const Row& row : r.rows) {
        check_csv_cell(row.key);
        check_csv_cell(row.metric);
        check_csv_cell(row.unit);
        out += row.key + "," + row.metric + "," + format_number(row.value) + "," + row.unit + "\n";
    }
    return out;
}

std::string to_json(const Report& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["experiment"] = r.experiment;
    j["metadata"] = {
        {"config_hash", r.config_hash},
        {"tool_version", r.tool_version},
        {"timestamp", r.timestamp},
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const Row& row : r.rows) {
        rows.push_back({
            {"key", row.key},
            {"metric", row.metric},
            {"value", row.value},
            {"unit", row.unit},
        });
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

Report from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Report r;
    r.experiment = j.at("experiment").get<std::string>();
    const auto& meta = j.at("metadata");
    r.config_hash = meta.at("config_hash").get<std::string>();
    r.tool_version = meta.at("tool_version").get<std::string>();
    r.timestamp = meta.at("timestamp").get<std::string>();
    for (const auto& jr : j.at("rows")) {
        Row row;
        row.key = jr.at("key").get<std::string>();
        row.metric = jr.at("metric").get<std::string>();
        row.value = jr.at("value").get<double>();
        row.unit = jr.at("unit").get<std::string>();
        r.rows.push_back(std::move(row));
    }
    return r;
}

namespace {

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string esc_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* const kPalette[] = {"#4878cf", "#ee854a", "#6acc65", "#d65f5f",
                                "#956cb4", "#8c613c", "#dc7ec0", "#797979"};

} // namespace

std::string to_svg(const Report& r) {
    if (r.chart_metrics.empty()) return "";

    std::vector<std::string> keys;
    for (const Row& row : r.rows)
        if (std::find(keys.begin(), keys.end(), row.key) == keys.end() &&
            std::find(r.chart_metrics.begin(), r.chart_metrics.end(), row.metric) !=
                r.chart_metrics.end())
            keys.push_back(row.key);
    if (keys.empty()) return "";

    auto value_of = [&](const std::string& key, const std::string& metric) {
        for (const Row& row : r.rows)
            if (row.key == key && row.metric == metric) return row.value;
        return 0.0;
    };

    double vmax = 0.0;
    for (const auto& k : keys)
        for (const auto& m : r.chart_metrics) vmax = std::max(vmax, value_of(k, m));
    if (vmax <= 0.0) vmax = 1.0;

    const double width = 640.0, height = 400.0;
    const double ml = 60.0, mr = 20.0, mt = 40.0, mb = 70.0;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;
    const double group_w = plot_w / keys.size();
    const double nseries = static_cast<double>(r.chart_metrics.size());
    const double bar_w = group_w * 0.8 / nseries;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(width) +
         "\" height=\"" + fixed2(height) + "\" viewBox=\"0 0 " + fixed2(width) + " " +
         fixed2(height) + "\">\n";
    s += "<style>text{font-family:sans-serif;font-size:11px;}</style>\n";
    s += "<text x=\"" + fixed2(width / 2) + "\" y=\"20\" text-anchor=\"middle\">" +
         esc_xml(r.experiment) + "</text>\n";
    // axes
    s += "<line x1=\"" + fixed2(ml) + "\" y1=\"" + fixed2(mt) + "\" x2=\"" + fixed2(ml) +
         "\" y2=\"" + fixed2(mt + plot_h) + "\" stroke=\"#333\"/>\n";
    s += "<line x1=\"" + fixed2(ml) + "\" y1=\"" + fixed2(mt + plot_h) + "\" x2=\"" +
         fixed2(ml + plot_w) + "\" y2=\"" + fixed2(mt + plot_h) + "\" stroke=\"#333\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        double frac = tick / 4.0;
        double y = mt + plot_h * (1.0 - frac);
        s += "<line x1=\"" + fixed2(ml - 4) + "\" y1=\"" + fixed2(y) + "\" x2=\"" + fixed2(ml) +
             "\" y2=\"" + fixed2(y) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + fixed2(ml - 8) + "\" y=\"" + fixed2(y + 4) +
             "\" text-anchor=\"end\">" + esc_xml(format_number(vmax * frac)) + "</text>\n";
    }
    for (std::size_t ki = 0; ki < keys.size(); ++ki) {
        double gx = ml + group_w * ki;
        for (std::size_t mi = 0; mi < r.chart_metrics.size(); ++mi) {
            double v = std::max(0.0, value_of(keys[ki], r.chart_metrics[mi]));
            double h = plot_h * v / vmax;
            double x = gx + group_w * 0.1 + bar_w * mi;
            s += "<rect x=\"" + fixed2(x) + "\" y=\"" + fixed2(mt + plot_h - h) + "\" width=\"" +
                 fixed2(bar_w) + "\" height=\"" + fixed2(h) + "\" fill=\"" +
                 kPalette[mi % 8] + "\"/>\n";
        }
        s += "<text x=\"" + fixed2(gx + group_w / 2) + "\" y=\"" + fixed2(mt + plot_h + 16) +
             "\" text-anchor=\"middle\">" + esc_xml(keys[ki]) + "</text>\n";
    }
    for (std::size_t mi = 0; mi < r.chart_metrics.size(); ++mi) {
        double lx = ml + 12 + 150.0 * static_cast<double>(mi % 4);
        double ly = mt + plot_h + 34 + 16.0 * static_cast<double>(mi / 4);
        s += "<rect x=\"" + fixed2(lx) + "\" y=\"" + fixed2(ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + kPalette[mi % 8] + "\"/>\n";
        s += "<text x=\"" + fixed2(lx + 14) + "\" y=\"" + fixed2(ly) + "\">" +
             esc_xml(r.chart_metrics[mi]) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace tasim::report
