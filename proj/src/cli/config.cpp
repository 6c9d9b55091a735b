#include "becphase/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace becphase::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T out{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
    return out;
}

}  // namespace

const std::vector<KeyInfo>& key_registry() {
    static const std::vector<KeyInfo> keys = {
        {"condensate1.kind", "poisson", "fock | poisson | thermal | gaussian"},
        {"condensate1.mean", "1000", "mean atom number (poisson, thermal, gaussian)"},
        {"condensate1.n", "20", "exact atom number (fock)"},
        {"condensate1.variance", "1000", "number variance (gaussian)"},
        {"condensate2.kind", "poisson", "fock | poisson | thermal | gaussian"},
        {"condensate2.mean", "1000", "mean atom number (poisson, thermal, gaussian)"},
        {"condensate2.n", "20", "exact atom number (fock)"},
        {"condensate2.variance", "1000", "number variance (gaussian)"},
        {"gamma", "1", "detection-rate ratio gamma2 / gamma1"},
        {"detections", "500", "detections per run"},
        {"grid_points", "1024", "phase grid resolution"},
        {"histogram_bins", "25", "fringe histogram bins"},
        {"runs", "1000", "runs per ensemble"},
        {"seed", "1", "64-bit ensemble seed"},
        {"engine", "pi-exact", "pi-exact | phase-filter | fock-trajectory"},
        {"trajectory.guard", "0.1", "number-state steps allowed while m < guard * min(N1, N2)"},
        {"curve.ratio_min", "0.01", "smallest gamma n2 / n1 on the visibility curve"},
        {"curve.ratio_max", "100", "largest gamma n2 / n1 on the visibility curve"},
        {"curve.points", "101", "log-spaced curve points"},
        {"curve.fock_n", "20", "atoms per number state on the visibility curve"},
        {"curve.axis", "gamma", "gamma | second-mean"},
        {"variance.m_min", "50", "first detection count in the variance-law fit"},
        {"slope.ratios", "1,0.5,0.25", "gamma N2 / N1 values for the inverse-spread slope"},
        {"slope.atoms", "10000", "atoms per number state"},
        {"slope.detections", "200", "detections per slope run"},
        {"slope.runs", "200", "runs averaged per slope curve"},
        {"slope.fit_from", "20", "first detection count in the slope fit"},
        {"slope.engine", "fock-trajectory", "fock-trajectory | phase-filter"},
    };
    return keys;
}

Settings::Settings() {
    for (const auto& k : key_registry()) values_[k.key] = k.default_value;
}

void Settings::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second = value;
}

void Settings::set_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Settings::load(std::istream& in, std::string_view origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        try {
            set_assignment(body);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void Settings::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    load(in, path);
}

const std::string& Settings::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
    return it->second;
}

double Settings::get_double(const std::string& key) const { return parse_number<double>(key, get(key)); }
long long Settings::get_int(const std::string& key) const { return parse_number<long long>(key, get(key)); }
std::uint64_t Settings::get_u64(const std::string& key) const { return parse_number<std::uint64_t>(key, get(key)); }

std::vector<double> Settings::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "' needs at least one value");
    return out;
}

CondensateSpec condensate_from(const Settings& s, const std::string& prefix) {
    const auto kind = parse_distribution(s.get(prefix + ".kind"));
    switch (kind) {
        case Distribution::Fock: {
            const long long n = s.get_int(prefix + ".n");
            if (n < 0) throw ConfigError(prefix + ".n must be nonnegative");
            return CondensateSpec::fock(static_cast<std::uint64_t>(n));
        }
        case Distribution::Poisson: return CondensateSpec::poisson(s.get_double(prefix + ".mean"));
        case Distribution::Thermal: return CondensateSpec::thermal(s.get_double(prefix + ".mean"));
        case Distribution::Gaussian:
            return CondensateSpec::gaussian(s.get_double(prefix + ".mean"), s.get_double(prefix + ".variance"));
    }
    throw ConfigError("unknown distribution");
}

namespace {

int checked_int(const Settings& s, const std::string& key) {
    const long long v = s.get_int(key);
    if (v < 0 || v > 1'000'000'000) throw ConfigError("key '" + key + "' out of range");
    return static_cast<int>(v);
}

}  // namespace

ExperimentConfig Settings::experiment() const {
    ExperimentConfig c;
    c.condensate_1 = condensate_from(*this, "condensate1");
    c.condensate_2 = condensate_from(*this, "condensate2");
    c.gamma_ratio = get_double("gamma");
    c.detections = checked_int(*this, "detections");
    c.grid_points = checked_int(*this, "grid_points");
    c.histogram_bins = checked_int(*this, "histogram_bins");
    c.runs = checked_int(*this, "runs");
    c.seed = get_u64("seed");
    c.validate();
    return c;
}

Engine Settings::engine() const { return parse_engine(get("engine")); }

RunOptions Settings::run_options() const {
    RunOptions o;
    o.trajectory_guard = get_double("trajectory.guard");
    if (!(o.trajectory_guard > 0.0)) throw ConfigError("trajectory.guard must be positive");
    return o;
}

}  // namespace becphase::cli
