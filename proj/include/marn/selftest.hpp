#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace marn {

struct CheckOptions {
    int workers = 0;
    /// Per-point progress of the simulation-backed checks; may be null.
    std::ostream* progress = nullptr;
};

struct CheckResult {
    int criterion = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceCheck {
    int criterion = 0;
    std::string title;
    /// Needs long BER sweeps; skipped by the quick self-test.
    bool heavy = false;
    std::function<CheckResult(const CheckOptions&)> run;
};

/// Criteria 1 .. 10 in order.
const std::vector<AcceptanceCheck>& acceptance_checks();

/// Runs one criterion; throws UsageError for an unknown number.
CheckResult run_check(int criterion, const CheckOptions& opts = {});

/// "criterion N: PASS|FAIL title (detail) [t s]".
std::string format_result(const CheckResult& r);

}  // namespace marn
