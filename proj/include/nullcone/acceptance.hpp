#pragma once
// The acceptance suite: ten pass/fail criteria with fixed tolerances and time limits.

#include <string>
#include <vector>

namespace nullcone::acceptance {

struct Check {
    std::string name;
    double value;      // worst residual seen
    double threshold;  // pass iff value < threshold
};

struct CriterionInfo {
    int id;
    std::string title;
    double time_limit;  // seconds
};

struct CriterionResult {
    CriterionInfo info;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool passed = false;
    std::string error;  // exception text, if the run threw

    /// The check closest to (or furthest past) its threshold.
    const Check* worst() const;
};

const std::vector<CriterionInfo>& criteria();
CriterionResult run_criterion(int id, unsigned seed = 42);

/// "PASS  3  curvature oracle  worst ...  1.23 s"
std::string format_line(const CriterionResult& r);

}  // namespace nullcone::acceptance
