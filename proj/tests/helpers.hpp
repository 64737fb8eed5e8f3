#pragma once

#include <random>
#include <vector>

#include "sird/instance.hpp"
#include "sird/joint_pmf.hpp"

namespace sird::testing {

inline std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) s += (v = exp1(rng));
    for (auto& v : p) v /= s;
    return p;
}

inline std::vector<double> random_channel_probs(std::mt19937_64& rng, std::size_t slices,
                                                std::size_t dim) {
    std::vector<double> p(slices * dim);
    std::exponential_distribution<double> exp1(1.0);
    for (std::size_t s = 0; s < slices; ++s) {
        double sum = 0.0;
        for (std::size_t o = 0; o < dim; ++o) sum += (p[s * dim + o] = exp1(rng));
        for (std::size_t o = 0; o < dim; ++o) p[s * dim + o] /= sum;
    }
    return p;
}

/// Random joint over n A-variables and n B-variables (axes A.t / B.t).
inline JointPMF random_pairs_joint(std::mt19937_64& rng, std::size_t n, std::size_t card) {
    std::vector<Alphabet> axes;
    for (std::size_t t = 1; t <= n; ++t)
        axes.push_back(Alphabet::indexed("A." + std::to_string(t), card));
    for (std::size_t t = 1; t <= n; ++t)
        axes.push_back(Alphabet::indexed("B." + std::to_string(t), card));
    std::size_t cells = 1;
    for (const auto& a : axes) cells *= a.size();
    return JointPMF(std::move(axes), random_pmf(rng, cells));
}

/// Two-source (X1,X2) with physically degraded side information
/// X - Y2 - Y1: Y2 a random channel from (X1,X2), Y1 a random channel from Y2.
inline JointPMF random_degraded_two_source(std::mt19937_64& rng, std::size_t side_card = 2) {
    std::vector<Alphabet> xa{Alphabet::binary("X1"), Alphabet::binary("X2")};
    JointPMF x(xa, random_pmf(rng, 4));
    Channel to_y2({xa[0], xa[1]}, Alphabet::indexed("Y2", side_card),
                  random_channel_probs(rng, 4, side_card));
    JointPMF with_y2 = x.attach_auxiliary(to_y2);
    Channel to_y1({with_y2.axis("Y2")}, Alphabet::indexed("Y1", side_card),
                  random_channel_probs(rng, side_card, side_card));
    return with_y2.attach_auxiliary(to_y1);
}

/// Component-Hamming two-source instance over a joint with axes
/// (X1, X2, Y1, Y2 [, Y3...]).
inline SourceInstance two_source_instance(JointPMF joint, std::size_t receivers = 2) {
    SourceInstance inst{std::move(joint), {"X1", "X2"}, {}, {}, "two-source"};
    for (std::size_t r = 1; r <= receivers; ++r)
        inst.side_axes.push_back("Y" + std::to_string(r));
    // psi projections onto X1 (receiver 1) and X2 (receiver 2); any third
    // receiver reconstructs the pair under Hamming on the flattened source.
    std::vector<std::size_t> t1{0, 0, 1, 1}, t2{0, 1, 0, 1};
    inst.distortions.push_back(
        DistortionSpec::from_psi(Alphabet::indexed("X1_hat", 2), t1));
    inst.distortions.push_back(
        DistortionSpec::from_psi(Alphabet::indexed("X2_hat", 2), t2));
    for (std::size_t r = 3; r <= receivers; ++r) {
        DistortionSpec d;
        d.xhat = Alphabet::indexed("X_hat", 4);
        d.delta.assign(4, std::vector<double>(4, 1.0));
        for (std::size_t i = 0; i < 4; ++i) d.delta[i][i] = 0.0;
        inst.distortions.push_back(d);
    }
    inst.validate();
    return inst;
}

/// Example 2 source: X1 uniform, P[Z=0]=1/3, X2=X1 xor Z, Y2=BEC(2/3)(X1),
/// Y1=BSC(1/4)(X1); component-Hamming receivers.
inline SourceInstance example2_instance() {
    JointPMF x1({Alphabet::binary("X1")}, {0.5, 0.5});
    JointPMF z({Alphabet::binary("Z")}, {1.0 / 3.0, 2.0 / 3.0});
    JointPMF base = JointPMF::product(x1, z);
    // X2 = X1 xor Z
    std::vector<double> xp(2 * 2 * 2, 0.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) xp[(i * 2 + k) * 2 + ((i + k) % 2)] = 1.0;
    base = base.attach_auxiliary(
        Channel({base.axis("X1"), base.axis("Z")}, Alphabet::binary("X2"), xp));
    base = base.attach_auxiliary(Channel::bec(base.axis("X1"), "Y2", 2.0 / 3.0));
    base = base.attach_auxiliary(Channel::bsc(base.axis("X1"), "Y1", 0.25));
    return two_source_instance(base.marginalize({"X1", "X2", "Y1", "Y2"}));
}

/// Example 1 source: X2, Y2, Z independent Bernoulli(p, q, r); X1 = X2 xor Y2,
/// Y1 = X1 xor Z.
inline SourceInstance example1_instance(double p = 0.3, double q = 0.3, double r = 0.1) {
    JointPMF base = JointPMF::product(
        JointPMF({Alphabet::binary("X2")}, {1.0 - p, p}),
        JointPMF({Alphabet::binary("Y2")}, {1.0 - q, q}));
    base = JointPMF::product(base, JointPMF({Alphabet::binary("Z")}, {1.0 - r, r}));
    auto xor_ch = [&](const std::string& a, const std::string& b, const std::string& out) {
        std::vector<double> cp(2 * 2 * 2, 0.0);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) cp[(i * 2 + k) * 2 + ((i + k) % 2)] = 1.0;
        return Channel({base.axis(a), base.axis(b)}, Alphabet::binary(out), cp);
    };
    base = base.attach_auxiliary(xor_ch("X2", "Y2", "X1"));
    base = base.attach_auxiliary(xor_ch("X1", "Z", "Y1"));
    return two_source_instance(base.marginalize({"X1", "X2", "Y1", "Y2"}));
}

/// Single-source instance over (X, Y1, Y2): receiver 1 psi (constant by
/// default => no requirement at receiver 1), receiver 2 Hamming on X.
inline SourceInstance wz_instance(JointPMF joint, std::vector<std::size_t> psi1,
                                  std::size_t psi1_card) {
    SourceInstance inst{std::move(joint), {"X"}, {"Y1", "Y2"}, {}, "wz"};
    inst.distortions.push_back(
        DistortionSpec::from_psi(Alphabet::indexed("Xt_hat", psi1_card), std::move(psi1)));
    inst.distortions.push_back(DistortionSpec::hamming(inst.joint.axis("X")));
    inst.validate();
    return inst;
}

} // namespace sird::testing
