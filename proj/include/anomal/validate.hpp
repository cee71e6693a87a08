#pragma once

#include <string>
#include <vector>

namespace anomal {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;        // worst observed error, in units of the suite's tolerance scale
    double tolerance = 0.0;
    std::string detail;
};

/// Names of all registered invariant suites, in execution order.
std::vector<std::string> validation_suite_names();

/// Runs the suites whose names appear in `filter` (all when empty).
/// Deterministic: fixed seeds, ordered output.
std::vector<SuiteResult> run_validation_suites(const std::vector<std::string>& filter = {});

} // namespace anomal
