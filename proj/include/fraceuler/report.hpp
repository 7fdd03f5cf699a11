#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/version.hpp"

namespace fraceuler {

/// One CSV cell; numbers are emitted with 17 significant digits so that
/// parse(emit(x)) round-trips doubles exactly.
struct Cell {
    enum class Kind { Number, Integer, Text } kind = Kind::Number;
    double num = 0.0;
    std::int64_t integer = 0;
    std::string text;

    static Cell number(double v) {
        Cell c;
        c.kind = Kind::Number;
        c.num = v;
        return c;
    }
    static Cell of_int(std::int64_t v) {
        Cell c;
        c.kind = Kind::Integer;
        c.integer = v;
        return c;
    }
    static Cell of_text(std::string v) {
        Cell c;
        c.kind = Kind::Text;
        c.text = std::move(v);
        return c;
    }

    std::string format() const {
        switch (kind) {
            case Kind::Integer: return std::to_string(integer);
            case Kind::Text: return text;
            case Kind::Number: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", num);
                return buf;
            }
        }
        return {};
    }

    double as_number() const {
        if (kind == Kind::Number) return num;
        if (kind == Kind::Integer) return static_cast<double>(integer);
        return std::strtod(text.c_str(), nullptr);
    }
};

struct TableMetadata {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string code_version = kVersion;
    double wall_time_seconds = 0.0;  // informational; never part of the CSV bytes
};

struct ResultTable {
    std::vector<std::string> schema;
    std::vector<std::vector<Cell>> rows;
    TableMetadata metadata;

    void add_row(std::vector<Cell> row) {
        if (row.size() != schema.size())
            throw std::invalid_argument("ResultTable: row width does not match schema");
        rows.push_back(std::move(row));
    }
};

/// CSV: comment header with reproducibility metadata (wall time excluded so
/// reruns are byte-identical), then a header line and LF-terminated rows.
inline std::string to_csv_string(const ResultTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("to_csv_string: empty table");
    std::ostringstream out;
    out << "# config_hash=" << table.metadata.config_hash << "\n";
    out << "# seed=" << table.metadata.seed << "\n";
    out << "# version=" << table.metadata.code_version << "\n";
    for (std::size_t i = 0; i < table.schema.size(); ++i)
        out << table.schema[i] << (i + 1 < table.schema.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i].format() << (i + 1 < row.size() ? "," : "\n");
    return out.str();
}

inline void emit_csv(const ResultTable& table, const std::string& path) {
    const std::string body = to_csv_string(table);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << body;
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

struct ParsedCsv {
    std::vector<std::string> schema;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

inline ParsedCsv parse_csv(const std::string& content) {
    ParsedCsv parsed;
    std::istringstream in(content);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
                parsed.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!header_seen) {
            parsed.schema = std::move(fields);
            header_seen = true;
        } else {
            parsed.rows.push_back(std::move(fields));
        }
    }
    return parsed;
}

/// FNV-1a hash of canonicalized content, rendered as hex.
inline std::string fnv1a_hex(const std::string& content) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace fraceuler
