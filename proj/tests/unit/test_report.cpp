#include <doctest.h>

#include <cstdlib>
#include <stdexcept>

#include "tasim/report.hpp"

using namespace tasim::report;

TEST_CASE("numbers are rounded to six significant digits on insertion") {
    Report r;
    r.add("k", "third", 1.0 / 3.0, "");
    r.add("k", "big", 12345678.9, "");
    r.add("k", "tiny", 1.23456789e-7, "");
    CHECK(r.rows[0].value == 0.333333);
    CHECK(r.rows[1].value == 12345700.0);
    CHECK(r.rows[2].value == 1.23457e-7);

    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(12345678.9) == "1.23457e+07");
    CHECK(format_number(91.40815) == "91.4082");
}

TEST_CASE("csv layout") {
    Report r;
    r.experiment = "demo";
    r.config_hash = "00000000deadbeef";
    r.tool_version = "0.1.0";
    r.add("S1", "delay", 0.25, "s");
    CHECK(to_csv(r) ==
          "# experiment: demo\n"
          "# config_hash: 00000000deadbeef\n"
          "# tool_version: 0.1.0\n"
          "key,metric,value,unit\n"
          "S1,delay,0.25,s\n");
}

TEST_CASE("cells that would break the csv are rejected loudly") {
    Report r;
    r.add("a,b", "m", 1.0, "");
    CHECK_THROWS_AS(to_csv(r), std::invalid_argument);
}

TEST_CASE("json round trip preserves the report exactly") {
    Report r;
    r.experiment = "roundtrip";
    r.config_hash = "0123456789abcdef";
    r.tool_version = kToolVersion;
    r.add("x", "ratio", 1.0 / 7.0, "ratio");
    r.add("x", "energy", 3.14159265e-4, "J");
    r.add("y", "count", 42.0, "");

    const Report back = from_json(to_json(r));
    CHECK(back == r);
    // serializing again gives identical bytes
    CHECK(to_json(back) == to_json(r));
}

TEST_CASE("hash primitive matches the reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
    CHECK(hex64(0x1ull) == "0000000000000001");
}

TEST_CASE("bar chart emission") {
    Report r;
    r.experiment = "chart";
    r.add("a", "score", 1.0, "");
    r.add("b", "score", 2.0, "");
    CHECK(to_svg(r).empty()); // no chart series selected

    r.chart_metrics = {"score"};
    const std::string svg = to_svg(r);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("rect") != std::string::npos);
    CHECK(svg.find(">a<") != std::string::npos);
    CHECK(to_svg(r) == svg); // deterministic
}

TEST_CASE("timestamps only exist when pinned externally") {
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(deterministic_timestamp().empty());

    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(deterministic_timestamp() == "1970-01-01T00:00:00Z");
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    CHECK(deterministic_timestamp() == "2023-11-14T22:13:20Z");
    unsetenv("SOURCE_DATE_EPOCH");
}
