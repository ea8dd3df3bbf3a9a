#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "table.hpp"

using namespace rnd::cli;

TEST_CASE("doubles print in shortest round-trip form") {
    for (double v : {0.1, 1.0 / 3.0, -1.6449340668472263, 1e-300, 6.02e23, 0.0}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV round trip") {
    Table t;
    t.columns = {"name", "value", "flag", "note"};
    t.add({"plain", 1.5, true, ""});
    t.add({"with,comma", -2, false, "say \"hi\""});
    t.add({"[0;1,2,...]", 1e-12, true, "line\nbreak"});
    std::ostringstream out;
    write_csv(out, t);
    const std::string text = out.str();
    auto records = parse_csv(text);
    REQUIRE(records.size() == 4);
    CHECK(records[0] == std::vector<std::string>{"name", "value", "flag", "note"});
    CHECK(records[2][0] == "with,comma");
    CHECK(records[2][3] == "say \"hi\"");
    CHECK(records[3][3] == "line\nbreak");
    CHECK(std::stod(records[3][1]) == 1e-12);
    CHECK(emit_csv(records) == text);
}

TEST_CASE("rows must match the header") {
    Table t;
    t.columns = {"a", "b"};
    CHECK_THROWS(t.add({1}));
}

TEST_CASE("JSON output keys rows by column") {
    Table t;
    t.columns = {"x", "y"};
    t.add({"1/3", std::numeric_limits<double>::quiet_NaN()});
    std::ostringstream out;
    write_json(out, t, {{"command", "test"}});
    auto j = nlohmann::json::parse(out.str());
    CHECK(j["meta"]["command"] == "test");
    CHECK(j["rows"][0]["x"] == "1/3");
    CHECK(j["rows"][0]["y"] == "nan");
}
