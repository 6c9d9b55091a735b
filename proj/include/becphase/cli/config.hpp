#pragma once

// Flat key = value configuration. Every key has a documented default that
// mirrors the reference figure parameters; files and --set overrides may
// only name registered keys.

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "becphase/model.hpp"
#include "becphase/montecarlo.hpp"

namespace becphase::cli {

struct KeyInfo {
    std::string key;
    std::string default_value;
    std::string help;
};

/// All recognised keys in a fixed order.
const std::vector<KeyInfo>& key_registry();

class Settings {
  public:
    /// Registry defaults.
    Settings();

    /// Throws ConfigError on unknown keys or malformed lines.
    void load(std::istream& in, std::string_view origin = "<config>");
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    /// "key=value"
    void set_assignment(std::string_view assignment);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    /// Sorted by key.
    const std::map<std::string, std::string>& values() const { return values_; }

    ExperimentConfig experiment() const;
    Engine engine() const;
    RunOptions run_options() const;

  private:
    std::map<std::string, std::string> values_;
};

CondensateSpec condensate_from(const Settings& s, const std::string& prefix);

}  // namespace becphase::cli
