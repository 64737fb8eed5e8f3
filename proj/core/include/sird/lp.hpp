#pragma once

#include <vector>

namespace sird {

struct LpFeasibility {
    bool feasible = false;
    std::vector<double> x;       // a feasible point when feasible
    double infeasibility = 0.0;  // phase-1 optimum (sum of artificials)
};

/// Feasibility of { x >= 0 : A x = b } by phase-1 simplex with Bland's rule.
/// A is row-major, m x n.
LpFeasibility lp_feasible(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, double tol = 1e-9);

} // namespace sird
