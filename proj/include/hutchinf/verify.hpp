#pragma once

#include <string>
#include <vector>

namespace hutchinf {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Named invariant suites runnable from the CLI:
// metrics | hausdorff | shifts | tiles | conjugacy | cantor | all.
// Throws std::invalid_argument for unknown suite names.
std::vector<CheckResult> run_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace hutchinf
