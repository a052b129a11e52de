#pragma once

#include <string>
#include <vector>

namespace mixfit {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // filled on failure
};

struct SelfCheckOptions {
    /// Testing hook: perturbs the embedded count table so the recovery check
    /// must fail. Exercised by the test suite, never in normal operation.
    bool corrupt_count_table = false;
};

/// Embedded oracle suite: closed-form density spot values, one hand-verified
/// two-component EM iteration, and the built-in count-data mixture recovery.
std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& options = {});

}  // namespace mixfit
