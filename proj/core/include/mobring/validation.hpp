#pragma once

#include <string>
#include <vector>

namespace mobring {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Structural oracle checks run by `mobring validate`: analytic spectrum vs
/// Jacobi diagonalization, band envelope, Moebius gauge, coupling sum rule,
/// periodic three-level reduction, site/momentum basis equivalence,
/// probability bookkeeping, and the single-mode decay rate.
std::vector<CheckResult> run_oracle_suite();

}  // namespace mobring
