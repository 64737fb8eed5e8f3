#include "sird/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "sird/errors.hpp"

namespace sird {

LpFeasibility lp_feasible(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, double tol) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    if (b.size() != m) throw OutOfRange("lp_feasible: A and b sizes disagree");

    // Tableau: m rows of [x | artificials | rhs], plus phase-1 cost row.
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        double s = b[i] >= 0.0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) T[i][j] = s * A[i][j];
        T[i][n + i] = 1.0;
        T[i][cols - 1] = s * b[i];
    }
    // Cost = sum of artificials; express in terms of non-basic variables.
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += T[i][j];
        if (j < n || j == cols - 1)
            T[m][j] = -s;
        else
            T[m][j] = 0.0;
    }

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    const std::size_t max_pivots = 50 * (m + n + 1) * (m + n + 1);
    for (std::size_t iter = 0; iter < max_pivots; ++iter) {
        // Bland's rule: entering = lowest-index column with negative reduced cost.
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j)
            if (T[m][j] < -tol) {
                enter = j;
                break;
            }
        if (enter == cols) break; // optimal

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] > tol) {
                double r = T[i][cols - 1] / T[i][enter];
                if (r < best_ratio - tol ||
                    (std::abs(r - best_ratio) <= tol && (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = r;
                    leave = i;
                }
            }
        }
        if (leave == m) break; // unbounded (cannot happen in phase 1)

        double piv = T[leave][enter];
        for (std::size_t j = 0; j < cols; ++j) T[leave][j] /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }

    LpFeasibility out;
    out.infeasibility = -T[m][cols - 1]; // cost row stores negated objective
    if (out.infeasibility < 0.0 && out.infeasibility > -tol) out.infeasibility = 0.0;
    out.feasible = out.infeasibility <= 10 * tol;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) out.x[basis[i]] = T[i][cols - 1];
    return out;
}

} // namespace sird
