#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rnd::cli {

// A cell keeps the JSON value; CSV renders it as text.
using Cell = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// Shortest text that reads back to the same double.
std::string format_double(double v);
std::string cell_text(const Cell& c);

// RFC 4180 style: fields with ',', '"' or newlines are quoted.
void write_csv(std::ostream& out, const Table& table);
// One object with "meta" and "rows" (one object per row, keyed by column).
void write_json(std::ostream& out, const Table& table, const nlohmann::ordered_json& meta);

// Splits CSV text into records of fields, undoing the quoting.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
// Re-emits parsed records with the same quoting rule.
std::string emit_csv(const std::vector<std::vector<std::string>>& records);

}  // namespace rnd::cli
