#pragma once

#include <string>

#include "lhpp/scenario.hpp"

namespace lhpp {

struct ValidationResult {
    std::string report;   // deterministic text, independent of thread count
    bool passed = false;
};

/// Drives the Monte Carlo oracles against every closed form of the scenario:
/// pool-loss probabilities and capped losses, enlarged balance-sheet moments,
/// the lognormal moment identities, and the (report-only) first-order gap of
/// the enlarged PD. All comparisons at +-3 standard errors.
ValidationResult run_validation(const ScenarioConfig& config, int threads = 0);

}  // namespace lhpp
