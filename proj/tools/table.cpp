#include "table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rnd::cli {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

}  // namespace

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string cell_text(const Cell& c) {
    if (c.is_string()) return c.get<std::string>();
    if (c.is_null()) return "";
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_float()) return format_double(c.get<double>());
    return c.dump();
}

void write_csv(std::ostream& out, const Table& table) {
    write_record(out, table.columns);
    for (const auto& row : table.rows) {
        std::vector<std::string> fields;
        for (const Cell& c : row) fields.push_back(cell_text(c));
        write_record(out, fields);
    }
}

void write_json(std::ostream& out, const Table& table, const nlohmann::ordered_json& meta) {
    nlohmann::ordered_json doc;
    doc["meta"] = meta;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            // JSON has no NaN or infinity; those become strings.
            if (c.is_number_float() && !std::isfinite(c.get<double>()))
                obj[table.columns[i]] = format_double(c.get<double>());
            else
                obj[table.columns[i]] = c;
        }
        doc["rows"].push_back(obj);
    }
    out << doc.dump(2) << '\n';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            fields.push_back(field);
            records.push_back(fields);
            fields.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::runtime_error("unterminated quoted field");
    if (any) {
        fields.push_back(field);
        records.push_back(fields);
    }
    return records;
}

std::string emit_csv(const std::vector<std::vector<std::string>>& records) {
    std::ostringstream out;
    for (const auto& r : records) write_record(out, r);
    return out.str();
}

}  // namespace rnd::cli
