#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eqa::verify {

/// One acceptance criterion, reduced to named residuals vs tolerances.
struct CriterionResult {
    std::string id;
    std::string suite;  // identities | examples | ruled | flow
    std::string detail;
    double worst_ratio = 0.0;  // max residual/tolerance across the checks
    bool passed = false;
};

/// Run one of {identities, examples, ruled, flow, all}.
std::vector<CriterionResult> run_suite(const std::string& suite, std::uint64_t seed);

bool known_suite(const std::string& suite);

}  // namespace eqa::verify
