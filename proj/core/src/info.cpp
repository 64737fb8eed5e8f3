#include "sird/info.hpp"

#include <cmath>

namespace sird {

namespace {

constexpr double kClampFloor = -1e-12;

double clamp_noise(double v) { return (v >= kClampFloor && v < 0.0) ? 0.0 : v; }

double neg_sum_plogp(const JointPMF& m) {
    double h = 0.0;
    for (double p : m.probs())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

void check_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (x == y) throw OverlappingSets("variable sets overlap: " + x);
}

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

double entropy(const JointPMF& j, const std::vector<std::string>& vars) {
    return clamp_noise(neg_sum_plogp(j.marginalize(vars)));
}

double cond_entropy(const JointPMF& j, const std::vector<std::string>& vars,
                    const std::vector<std::string>& given) {
    check_disjoint(vars, given);
    if (given.empty()) return entropy(j, vars);
    return clamp_noise(entropy(j, join(vars, given)) - entropy(j, given));
}

double mutual_info(const JointPMF& j, const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
    check_disjoint(a, b);
    return clamp_noise(entropy(j, a) + entropy(j, b) - entropy(j, join(a, b)));
}

double cond_mutual_info(const JointPMF& j, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& given) {
    check_disjoint(a, b);
    check_disjoint(a, given);
    check_disjoint(b, given);
    if (given.empty()) return mutual_info(j, a, b);
    // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
    double h_ac = entropy(j, join(a, given));
    double h_bc = entropy(j, join(b, given));
    double h_abc = entropy(j, join(join(a, b), given));
    double h_c = entropy(j, given);
    return clamp_noise(h_ac + h_bc - h_abc - h_c);
}

double binary_entropy(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw OutOfRange("binary_entropy: alpha out of [0,1]");
    double h = 0.0;
    if (alpha > 0.0) h -= alpha * std::log2(alpha);
    if (alpha < 1.0) h -= (1.0 - alpha) * std::log2(1.0 - alpha);
    return h;
}

} // namespace sird
