#include "becphase/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace becphase::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

CsvTable::CsvTable(std::string_view command, const Settings& settings, std::vector<std::string> columns)
    : width_(columns.size()) {
    std::ostringstream os;
    os << "# schema: " << kSchemaTag << '\n';
    os << "# command: " << command << '\n';
    for (const auto& [k, v] : settings.values()) os << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    preamble_ = os.str();
}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_double(row[i]);
    }
    body_ += '\n';
}

std::string CsvTable::str() const { return preamble_ + body_; }

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

nlohmann::ordered_json json_array(const std::vector<double>& v) {
    auto out = nlohmann::ordered_json::array();
    for (double x : v) out.push_back(json_number(x));
    return out;
}

nlohmann::ordered_json summary_skeleton(std::string_view command, const Settings& settings) {
    nlohmann::ordered_json j;
    j["schema"] = std::string(kSchemaTag);
    j["schema_version"] = kSchemaVersion;
    j["command"] = std::string(command);
    auto cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : settings.values()) cfg[k] = v;
    j["config"] = cfg;
    j["seed"] = settings.get_u64("seed");
    j["engine"] = settings.get("engine");
    j["final_visibility"] = nullptr;
    j["slope_fits"] = nullptr;
    j["oracle_report"] = nullptr;
    return j;
}

void write_output(const std::string& path, const std::string& content, std::ostream& console) {
    if (path == "-") {
        console << content;
        console.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

SchemaCheck check_schema_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {false, "cannot open '" + path + "'"};
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {false, path + ": empty file"};
    if (text[first] == '{') {
        try {
            const auto j = nlohmann::json::parse(text);
            if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
                return {false, path + ": missing schema_version"};
            const int v = j["schema_version"].get<int>();
            if (v != kSchemaVersion) return {false, path + ": unknown schema version " + std::to_string(v)};
            return {true, path + ": schema version " + std::to_string(v)};
        } catch (const nlohmann::json::exception& e) {
            return {false, path + ": invalid JSON (" + e.what() + ")"};
        }
    }
    const std::string expected = "# schema: " + std::string(kSchemaTag);
    const auto eol = text.find('\n');
    std::string line = text.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) return {false, path + ": unknown schema header '" + line + "'"};
    return {true, path + ": " + line.substr(2)};
}

}  // namespace becphase::cli
