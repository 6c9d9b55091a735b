#pragma once

// Cross-engine oracle suite: pi-engine vs phase filter vs number-state
// trajectories vs dense Fock-space traces, on small instances.

#include <cstdint>
#include <string>
#include <vector>

namespace becphase::cli {

struct OracleCheck {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationOptions {
    /// Relative perturbation applied to the phase filter's lambda, for
    /// checking that the suite detects a broken engine.
    double lambda_perturbation = 0.0;
    std::uint64_t seed = 7;
};

struct ValidationReport {
    std::vector<OracleCheck> checks;
    bool all_passed() const;
};

ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace becphase::cli
