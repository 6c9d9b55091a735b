#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "becphase/cli/commands.hpp"
#include "becphase/cli/config.hpp"
#include "becphase/cli/output.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace becphase;
using namespace becphase::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "becphase_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) continue;
        if (!header) {
            header = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::vector<double> split(const std::string& row) {
    std::vector<double> out;
    std::istringstream in(row);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

TEST_CASE("settings defaults and overrides") {
    Settings s;
    const auto cfg = s.experiment();
    CHECK(cfg.detections == 500);
    CHECK(cfg.histogram_bins == 25);
    CHECK(cfg.runs == 1000);
    CHECK(cfg.grid_points == 1024);
    CHECK(cfg.condensate_1 == CondensateSpec::poisson(1000.0));
    CHECK(s.engine() == Engine::PiExact);

    std::istringstream in("# comment\ncondensate1.kind = thermal\n\n  gamma=0.5  # trailing\n");
    s.load(in, "test.cfg");
    CHECK(s.experiment().condensate_1.kind == Distribution::Thermal);
    CHECK(s.experiment().gamma_ratio == 0.5);

    std::istringstream bad("detections = 10\nnot.a.key = 3\n");
    try {
        s.load(bad, "bad.cfg");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(s.set_assignment("runs"), ConfigError);
    CHECK_THROWS_AS(s.set("colour", "red"), ConfigError);
    s.set("runs", "abc");
    CHECK_THROWS_AS(s.experiment(), ConfigError);

    Settings f;
    f.set("condensate2.kind", "fock");
    f.set("condensate2.n", "40");
    CHECK(condensate_from(f, "condensate2") == CondensateSpec::fock(40));
    f.set("slope.ratios", "1, 0.5,0.25");
    CHECK(f.get_double_list("slope.ratios") == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("visibility curve rows") {
    const auto r = invoke({"visibility-curve"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.starts_with("# schema: becphase/1\n"));
    CHECK(r.out.find("\nratio,v_fock,v_poisson,v_thermal\n") != std::string::npos);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 101);
    const auto mid = split(rows[50]);
    CHECK(mid[0] == 1.0);
    CHECK(mid[1] == doctest::Approx(1.0 / (2.0 * (1.0 - 1.0 / 40.0))).epsilon(1e-12));
    CHECK(mid[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const auto low = split(rows.front());
    for (std::size_t j = 1; j < 4; ++j) CHECK(low[j] < 0.05);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(split(rows[i])[3] == doctest::Approx(split(rows[rows.size() - 1 - i])[3]).epsilon(1e-12));

    CHECK(invoke({"visibility-curve", "--set", "curve.ratio_min=0"}).code == kExitUsage);
    CHECK(invoke({"visibility-curve", "--set", "curve.axis=sideways"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    CHECK(invoke({"ensemble", "--set", "bogus=1"}).code == kExitUsage);
    CHECK(invoke({"ensemble", "--engine", "fock-trajectory", "--runs", "2"}).code == kExitUsage);
    CHECK(invoke({"visibility-curve", "-c", "/nonexistent/file.cfg"}).code == kExitUsage);
    CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("ensemble output is byte identical and carries its configuration") {
    const auto csv1 = scratch("e1.csv"), csv2 = scratch("e2.csv");
    const auto js1 = scratch("e1.json"), js2 = scratch("e2.json");
    const std::vector<std::string> base{"ensemble", "--kind", "thermal", "--runs", "12", "--detections", "80"};
    auto a1 = base;
    a1.insert(a1.end(), {"-o", csv1.string(), "--summary", js1.string()});
    auto a2 = base;
    a2.insert(a2.end(), {"-o", csv2.string(), "--summary", js2.string(), "--workers", "3"});
    REQUIRE(invoke(a1).code == kExitOk);
    REQUIRE(invoke(a2).code == kExitOk);
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(js1) == slurp(js2));

    const auto text = slurp(csv1);
    CHECK(text.find("# condensate1.kind=thermal\n") != std::string::npos);
    CHECK(text.find("# seed=1\n") != std::string::npos);
    CHECK(text.find("\nm,mean_visibility,q25,q75,variance\n") != std::string::npos);
    CHECK(data_lines(text).size() == 80);

    const auto j = nlohmann::json::parse(slurp(js1));
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["engine"] == "pi-exact");
    CHECK(j["seed"] == 1);
    CHECK(j["config"]["runs"] == "12");
    CHECK(j.contains("slope_fits"));
    CHECK(j.contains("oracle_report"));
    CHECK_FALSE(j.contains("wall_time_seconds"));
    CHECK(j["final_visibility"].get<double>() > 0.5);

    const auto timed = scratch("timed.json");
    auto a3 = base;
    a3.insert(a3.end(), {"-o", scratch("t.csv").string(), "--summary", timed.string(), "--timing"});
    REQUIRE(invoke(a3).code == kExitOk);
    CHECK(nlohmann::json::parse(slurp(timed)).contains("wall_time_seconds"));
}

TEST_CASE("a single run ensemble has degenerate quartiles") {
    const auto r = invoke({"ensemble", "--runs", "1", "--detections", "30", "--kind", "thermal"});
    REQUIRE(r.code == kExitOk);
    for (const auto& row : data_lines(r.out)) {
        const auto v = split(row);
        CHECK(v[1] == v[2]);
        CHECK(v[1] == v[3]);
    }
}

TEST_CASE("run, variance and slope commands") {
    const auto run = invoke({"run", "--detections", "60", "--run-index", "4"});
    REQUIRE(run.code == kExitOk);
    CHECK(data_lines(run.out).size() == 60);

    const auto js = scratch("v.json");
    const auto var = invoke({"variance", "--runs", "10", "--detections", "120", "--summary", js.string()});
    REQUIRE(var.code == kExitOk);
    CHECK(data_lines(var.out).size() == 71);
    const auto vj = nlohmann::json::parse(slurp(js));
    CHECK(vj["slope_fits"].contains("reciprocal_coefficient"));

    const auto sj = scratch("s.json");
    const auto slope = invoke({"slope", "--set", "slope.runs=3", "--set", "slope.detections=40", "--set",
                            "slope.ratios=1,0.25", "--summary", sj.string()});
    REQUIRE(slope.code == kExitOk);
    CHECK(slope.out.find("\nm,inverse_spread_1,inverse_spread_0.25\n") != std::string::npos);
    const auto fits = nlohmann::json::parse(slurp(sj))["slope_fits"];
    REQUIRE(fits.size() == 2);
    CHECK(fits[1]["predicted"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("validate command") {
    const auto ok = invoke({"validate"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    const auto bad = invoke({"validate", "--perturb-lambda", "1e-3"});
    CHECK(bad.code == kExitValidation);
    CHECK(bad.out.find("FAIL  poisson pi-engine vs phase filter") != std::string::npos);

    const auto csv = scratch("check.csv");
    REQUIRE(invoke({"visibility-curve", "-o", csv.string()}).code == kExitOk);
    CHECK(invoke({"validate", "--check-file", csv.string()}).code == kExitOk);

    const auto alien = scratch("alien.csv");
    std::ofstream(alien) << "# schema: becphase/99\nm,x\n1,2\n";
    CHECK(invoke({"validate", "--check-file", alien.string()}).code == kExitValidation);
    const auto alien_json = scratch("alien.json");
    std::ofstream(alien_json) << R"({"schema_version": 2})";
    CHECK(check_schema_file(alien_json.string()).ok == false);
    CHECK(check_schema_file(scratch("missing.csv").string()).ok == false);
}

TEST_CASE("executable exit status") {
    const std::string exe = BECPHASE_CLI_PATH;
    CHECK(std::system((exe + " validate > /dev/null").c_str()) == 0);
    const int st = std::system((exe + " validate --perturb-lambda 1e-3 > /dev/null").c_str());
    CHECK(WEXITSTATUS(st) == kExitValidation);
    const int usage = std::system((exe + " nonsense > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(usage) == kExitUsage);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_double(1e300 * 1e10) == "inf");
}
