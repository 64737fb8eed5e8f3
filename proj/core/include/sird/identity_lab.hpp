#pragma once

#include <string>
#include <vector>

#include "sird/joint_pmf.hpp"

namespace sird {

struct LetterizationReport {
    std::size_t n = 0;
    double lhs_bits = 0.0;      // I(J;S2^n|L^n) - I(J;S1^n|L^n)
    double rhs_bits = 0.0;      // n * (I(W~;S2|L) - I(W~;S1|L))
    double residual = 0.0;      // |lhs - rhs|
    double markov_residual = 0.0; // chain W~ - (R,L) - (S1,S2,T)
    std::size_t w_alphabet_size = 0;
};

/// |sum_i I(A_1^i; B_{i+1}^n) - sum_i I(A_1^{i-1}; B_i^n)| on a joint whose
/// axes are named A.1..A.n and B.1..B.n (or with custom prefixes).
double telescoping_residual(const JointPMF& j, const std::string& a_prefix = "A",
                            const std::string& b_prefix = "B");

/// Csiszar sum identity residual:
/// |sum_i I(A_i;B_{i+1}^n|A_1^{i-1}) - sum_i I(B_i;A_1^{i-1}|B_{i+1}^n)|.
double csiszar_residual(const JointPMF& j, const std::string& a_prefix = "A",
                        const std::string& b_prefix = "B");

/// Numerically executes the single-letterization construction: extends the
/// base joint over (R,S1,S2,T,L) to n letters, attaches J via j_channel
/// (inputs must be exactly the R.t and L.t axes), builds the per-letter
/// auxiliaries W_i = (J, S1 future, S2 past, L complement) and the uniform
/// time-share W~ = (W_Q, Q), and reports how closely the n-letter mutual
/// information difference equals n times the single-letter one.
LetterizationReport single_letterize(const JointPMF& base, const Channel& j_channel,
                                     std::size_t n,
                                     std::size_t cell_budget = kDefaultCellBudget);

} // namespace sird
