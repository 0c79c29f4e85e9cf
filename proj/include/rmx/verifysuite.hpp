#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rmx {

// One line of the verification matrix. Gating checks decide the exit status
// of the acceptance binary and of `verify`; advisory checks are reported but
// never fail the run.
struct CheckResult {
    std::string name;
    bool pass = false;
    bool gating = true;
    std::string detail;
    double seconds = 0.0;
};

// The full battery: exact symbolic identities, oracle cross-checks, and the
// Monte Carlo comparisons at the given seed and per-statistic sample count.
std::vector<CheckResult> run_verification(uint64_t seed, long samples);

}  // namespace rmx
