#pragma once

// Column-table CSV, flat JSON summaries, and key = value config files.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tripod::io {

// Column-major numeric table; header names carry unit suffixes where the
// quantity is dimensioned (e.g. "T_s", "P3").
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

// Doubles formatted with 17 significant digits so that reading the text
// back reproduces the bit pattern.
std::string format_double(double value);

void write_csv(const std::string& path, const Table& table);
Table read_csv(const std::string& path);

using JsonValue = std::variant<bool, std::int64_t, double, std::string>;
using JsonObject = std::vector<std::pair<std::string, JsonValue>>;

// Flat JSON object, keys in the order given.
void write_json(const std::string& path, const JsonObject& object);

// Config files: one `key = value` per line, `#` comments, optional quotes
// around string values.  Values are returned verbatim (quotes stripped);
// the consumer parses types.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> read_config(const std::string& path);

}  // namespace tripod::io
