#include "tripod/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tripod::io {
namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(const std::string& path, const Table& table) {
    if (table.header.size() != table.columns.size())
        throw std::runtime_error("write_csv: header/column count mismatch");
    const std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (const auto& col : table.columns)
        if (col.size() != rows)
            throw std::runtime_error("write_csv: ragged columns");

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out << (c ? "," : "") << table.header[c];
    out << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "," : "") << format_double(table.columns[c][r]);
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("write_csv: write failed for " + path);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path);
    Table table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_csv: empty file " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        table.header.push_back(trim(cell));
    table.columns.resize(table.header.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= table.columns.size())
                throw std::runtime_error("read_csv: extra cell in row " +
                                         std::to_string(row));
            char* end = nullptr;
            const std::string t = trim(cell);
            const double v = std::strtod(t.c_str(), &end);
            if (end == t.c_str() || *end != '\0')
                throw std::runtime_error("read_csv: bad number '" + t +
                                         "' in row " + std::to_string(row));
            table.columns[c++].push_back(v);
        }
        if (c != table.columns.size())
            throw std::runtime_error("read_csv: short row " +
                                     std::to_string(row));
    }
    return table;
}

void write_json(const std::string& path, const JsonObject& object) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_json: cannot open " + path);
    out << "{\n";
    for (std::size_t i = 0; i < object.size(); ++i) {
        out << "  \"" << json_escape(object[i].first) << "\": ";
        const JsonValue& v = object[i].second;
        if (std::holds_alternative<bool>(v)) {
            out << (std::get<bool>(v) ? "true" : "false");
        } else if (std::holds_alternative<std::int64_t>(v)) {
            out << std::get<std::int64_t>(v);
        } else if (std::holds_alternative<double>(v)) {
            out << format_double(std::get<double>(v));
        } else {
            out << '"' << json_escape(std::get<std::string>(v)) << '"';
        }
        out << (i + 1 < object.size() ? ",\n" : "\n");
    }
    out << "}\n";
    if (!out)
        throw std::runtime_error("write_json: write failed for " + path);
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> config;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            // keep # inside quoted values
            const std::size_t q1 = line.find('"');
            if (q1 == std::string::npos || hash < q1)
                line.erase(hash);
            else {
                const std::size_t q2 = line.find('"', q1 + 1);
                if (q2 != std::string::npos && hash > q2)
                    line.erase(line.find('#', q2));
            }
        }
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        config[key] = value;
    }
    return config;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace tripod::io
