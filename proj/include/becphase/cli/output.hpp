#pragma once

// CSV and JSON emission. Outputs are byte-identical for identical
// configuration and seed: no timestamps, no host details, fixed key order.

#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "becphase/cli/config.hpp"
#include "json.hpp"

namespace becphase::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kSchemaTag = "becphase/1";

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_double(double v);

/// '#'-prefixed preamble (schema, command, resolved configuration) followed
/// by a single column-header line.
class CsvTable {
  public:
    CsvTable(std::string_view command, const Settings& settings, std::vector<std::string> columns);

    void add_row(const std::vector<double>& row);
    std::string str() const;

  private:
    std::string preamble_;
    std::size_t width_;
    std::string body_;
};

/// Summary skeleton: schema, command, config, seed, engine plus null
/// placeholders for final_visibility, slope_fits and oracle_report.
nlohmann::ordered_json summary_skeleton(std::string_view command, const Settings& settings);

/// Non-finite doubles map to strings so the document stays valid JSON.
nlohmann::ordered_json json_number(double v);
nlohmann::ordered_json json_array(const std::vector<double>& v);

/// "-" writes to stdout.
void write_output(const std::string& path, const std::string& content, std::ostream& console = std::cout);

struct SchemaCheck {
    bool ok = false;
    std::string message;
};

/// Recognises this tool's CSV preamble and JSON summaries.
SchemaCheck check_schema_file(const std::string& path);

}  // namespace becphase::cli
