// Acceptance gate: runs all eight release criteria and prints one PASS/FAIL
// line per criterion. Exits non-zero when any criterion fails.
//
// Usage: sird_acceptance <sird-cli-path> <instances-dir>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sird/classifiers.hpp"
#include "sird/identity_lab.hpp"
#include "sird/info.hpp"
#include "sird/problem_io.hpp"
#include "sird/rd_solvers.hpp"
#include "sird/succ_refine.hpp"

using namespace sird;
using namespace sird::testing;

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << std::endl;
    if (!ok) ++g_failures;
}

SolveOptions quick_opts() {
    SolveOptions o;
    o.opt.restarts = 8;
    o.opt.max_iters = 800;
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Example 2 reproduction: R(0,0) within 1e-3 of Hb(1/4)+Hb(1/3).
void criterion1() {
    SourceInstance inst = example2_instance();
    Theorem3Result r = theorem3_rate(inst, 0.0, quick_opts());
    double target = binary_entropy(0.25) + binary_entropy(1.0 / 3.0);
    bool ok = r.conditions_met && std::abs(r.rate - target) < 1e-3 &&
              std::abs(target - 1.729574) < 1e-5;
    std::ostringstream ss;
    ss << "example2 R(0,0) = " << r.rate << " vs closed form " << target;
    report(1, ok, ss.str());
}

// 2. Example 2 side conditions: H(X1|Y2) = 2/3, not stochastically degraded,
//    CLN given X1.
void criterion2() {
    SourceInstance inst = example2_instance();
    double h = cond_entropy(inst.joint, {"X1"}, {"Y2"});
    bool h_ok = std::abs(h - 2.0 / 3.0) <= 1e-12;
    auto deg = stochastic_degradedness(inst.joint, {"X1", "X2"});
    ClnOptions copt;
    copt.opt.restarts = 12;
    ClnVerdict v = cln_margin(inst.joint, {"X1", "X2"}, {"X1"}, copt);
    bool ok = h_ok && !deg.feasible && v.verdict == ClnStatus::CLN &&
              v.margin_bits >= -1e-6;
    std::ostringstream ss;
    ss << "H(X1|Y2) = " << h << ", stochastic degradedness "
       << (deg.feasible ? "feasible" : "infeasible") << ", CLN margin " << v.margin_bits;
    report(2, ok, ss.str());
}

// 3. Corollary-style sandwich: on 20 random degraded two-sources the upper
//    and lower bounds both land within 1e-3 of H(X1|Y1) + H(X2|X1,Y2).
void criterion3() {
    std::mt19937_64 rng(9001);
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
        SourceInstance inst = two_source_instance(random_degraded_two_source(rng));
        double target = cond_entropy(inst.joint, {"X1"}, {"Y1"}) +
                        cond_entropy(inst.joint, {"X2"}, {"X1", "Y2"});
        BoundResult up = hb_upper_bound(inst, 0.0, 0.0, quick_opts());
        ConverseResult low = converse_lower_bound(inst, 0.0, quick_opts());
        double err = std::max(std::abs(up.bits - target), std::abs(low.bits - target));
        worst = std::max(worst, err);
        if (err >= 1e-3) ok = false;
    }
    std::ostringstream ss;
    ss << "20 degraded two-sources, worst sandwich error " << worst << " bits";
    report(3, ok, ss.str());
}

// 4. Identity suite: telescoping/Csiszar < 1e-10 on 100 random joints each;
//    single letterization residuals < 1e-9 on 25 random n = 2 instances.
void criterion4() {
    std::mt19937_64 rng(9002);
    double worst_sum = 0.0, worst_letter = 0.0, worst_markov = 0.0;
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + t % 3;
        std::size_t card = (n == 3) ? 2 : 3;
        JointPMF j = random_pairs_joint(rng, n, card);
        worst_sum = std::max(worst_sum, telescoping_residual(j));
        worst_sum = std::max(worst_sum, csiszar_residual(j));
    }
    for (int t = 0; t < 25; ++t) {
        std::vector<Alphabet> axes{Alphabet::binary("R"), Alphabet::binary("S1"),
                                   Alphabet::binary("S2"), Alphabet::binary("T"),
                                   Alphabet::binary("L")};
        JointPMF base(axes, random_pmf(rng, 32));
        JointPMF ext = base.iid_extension(2);
        std::vector<Alphabet> inputs{ext.axis("R.1"), ext.axis("R.2"), ext.axis("L.1"),
                                     ext.axis("L.2")};
        Channel j_ch(inputs, Alphabet::binary("J"), random_channel_probs(rng, 16, 2));
        LetterizationReport rep = single_letterize(base, j_ch, 2);
        worst_letter = std::max(worst_letter, rep.residual);
        worst_markov = std::max(worst_markov, rep.markov_residual);
    }
    bool ok = worst_sum < 1e-10 && worst_letter < 1e-9 && worst_markov < 1e-9;
    std::ostringstream ss;
    ss << "sum identities worst " << worst_sum << ", letterization worst " << worst_letter
       << ", markov worst " << worst_markov;
    report(4, ok, ss.str());
}

// 5. Wyner-Ziv oracle: no-side-information binary Hamming matches 1 - Hb(D)
//    within 5e-3, cross-checked against a 0.02-resolution grid search.
void criterion5() {
    JointPMF j({Alphabet::binary("X"), Alphabet::indexed("Y1", 1), Alphabet::indexed("Y2", 1)},
               {0.5, 0.5});
    SourceInstance inst = wz_instance(std::move(j), {0, 0}, 1);
    double worst = 0.0;
    bool ok = true;
    for (double d : {0.0, 0.05, 0.1, 0.25}) {
        BoundResult r = wyner_ziv_s(inst, d, quick_opts());
        double closed = (d <= 0.0) ? 1.0 : 1.0 - binary_entropy(d);
        // grid oracle over p(b=1|x), resolution 0.02
        double oracle = 1.0;
        for (int i0 = 0; i0 <= 50; ++i0)
            for (int i1 = 0; i1 <= 50; ++i1) {
                double p0 = i0 / 50.0, p1 = i1 / 50.0;
                JointPMF xb({Alphabet::binary("X"), Alphabet::binary("B")},
                            {0.5 * (1 - p0), 0.5 * p0, 0.5 * (1 - p1), 0.5 * p1});
                double dist =
                    std::min(xb.at(std::vector<std::size_t>{0, 0}),
                             xb.at(std::vector<std::size_t>{1, 0})) +
                    std::min(xb.at(std::vector<std::size_t>{0, 1}),
                             xb.at(std::vector<std::size_t>{1, 1}));
                if (dist <= d + 1e-9)
                    oracle = std::min(oracle, mutual_info(xb, {"X"}, {"B"}));
            }
        double err = std::abs(r.bits - closed);
        worst = std::max(worst, err);
        if (err >= 5e-3 || r.bits > oracle + 1e-6) ok = false;
    }
    std::ostringstream ss;
    ss << "1 - Hb(D) match, worst error " << worst << " bits";
    report(5, ok, ss.str());
}

// 6. Sweep curves: lower bound non-increasing and midpoint-convex within 1e-6.
void criterion6() {
    SourceInstance inst = example2_instance();
    std::vector<double> grid{0.0, 0.05, 0.1, 0.15, 0.2, 0.25};
    auto rows = rd_curve_sweep(inst, grid, quick_opts());
    bool ok = rows.size() == grid.size();
    for (std::size_t i = 0; ok && i < rows.size(); ++i) {
        if (i > 0 && rows[i].lower_bits > rows[i - 1].lower_bits + 1e-9) ok = false;
        if (i > 0 && i + 1 < rows.size() &&
            rows[i - 1].lower_bits + rows[i + 1].lower_bits <
                2.0 * rows[i].lower_bits - 1e-6)
            ok = false;
    }
    report(6, ok, "sweep lower curve monotone and midpoint-convex");
}

// 7. Successive-refinement consistency: specialization equalities to 1e-12 on
//    20 random systems; degraded-triple outer margins and matched corner.
void criterion7() {
    std::mt19937_64 rng(9003);
    auto attach_random = [&](const JointPMF& j, const std::vector<std::string>& inputs,
                             const std::string& name, std::size_t card) {
        std::vector<Alphabet> in;
        std::size_t slices = 1;
        for (const auto& a : inputs) {
            in.push_back(j.axis(a));
            slices *= in.back().size();
        }
        return j.attach_auxiliary(Channel(in, Alphabet::indexed(name, card),
                                          random_channel_probs(rng, slices, card)));
    };
    auto copy_axis = [](const JointPMF& j, const std::string& src, const std::string& dst) {
        const Alphabet& a = j.axis(src);
        std::vector<std::size_t> id(a.size());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        return j.derive_variable(DeterministicMap(a, Alphabet::indexed(dst, a.size()), id),
                                 dst);
    };
    auto const_axis = [](const JointPMF& j, const std::string& name) {
        return j.attach_auxiliary(Channel::constant(j.axes().front(), name));
    };
    auto degraded_triple = [&]() {
        std::vector<Alphabet> xa{Alphabet::binary("X1"), Alphabet::binary("X2")};
        JointPMF x(xa, random_pmf(rng, 4));
        JointPMF j = x.attach_auxiliary(
            Channel({xa[0], xa[1]}, Alphabet::binary("Y3"), random_channel_probs(rng, 4, 2)));
        j = j.attach_auxiliary(
            Channel({j.axis("Y3")}, Alphabet::binary("Y2"), random_channel_probs(rng, 2, 2)));
        j = j.attach_auxiliary(
            Channel({j.axis("Y2")}, Alphabet::binary("Y1"), random_channel_probs(rng, 2, 2)));
        return two_source_instance(j.marginalize({"X1", "X2", "Y1", "Y2", "Y3"}), 3);
    };

    double worst_eq = 0.0;
    for (int t = 0; t < 10; ++t) {
        SourceInstance inst = degraded_triple();
        JointPMF j = attach_random(inst.joint, {"X1", "X2"}, "A1", 2);
        j = attach_random(j, {"X1", "X2", "A1"}, "A2", 2);
        j = attach_random(j, {"X1", "X2", "A1", "A2"}, "A3", 2);
        RegionCorner inner = sr_inner_eval(inst, j, {"A1", "A2", "A3"});
        JointPMF k = copy_axis(j, "A1", "U123");
        k = copy_axis(k, "A2", "U23");
        k = const_axis(k, "U12");
        k = const_axis(k, "U13");
        RegionCorner g = tcg_eval(inst, k, {"U123", "U12", "U13", "U23", "A1", "A2", "A3"});
        worst_eq = std::max({worst_eq, std::abs(g.r1 - inner.r1),
                             std::abs(g.r12 - inner.r12), std::abs(g.r123 - inner.r123)});
    }
    for (int t = 0; t < 10; ++t) {
        SourceInstance inst3 = degraded_triple();
        SourceInstance inst2 =
            two_source_instance(inst3.joint.marginalize({"X1", "X2", "Y1", "Y2"}), 2);
        JointPMF j = attach_random(inst3.joint, {"X1", "X2"}, "A12", 2);
        j = attach_random(j, {"X1", "X2", "A12"}, "A1", 2);
        j = attach_random(j, {"X1", "X2", "A12"}, "A2", 2);
        RatePair sc = scalable_inner_eval(inst2, j, {"A12", "A1", "A2"});
        JointPMF k = const_axis(j, "U123");
        k = const_axis(k, "U13");
        k = const_axis(k, "U23");
        k = const_axis(k, "U3");
        RegionCorner g =
            tcg_eval(inst3, k, {"U123", "A12", "U13", "U23", "A1", "A2", "U3"});
        worst_eq = std::max({worst_eq, std::abs(g.r1 - sc.r1), std::abs(g.r12 - sc.r12)});
    }

    double worst_margin = 0.0, worst_corner = 0.0;
    for (int t = 0; t < 3; ++t) {
        SourceInstance inst = degraded_triple();
        SrOuterResult o = sr_outer_bound(inst, 0.1, quick_opts());
        worst_margin = std::min(worst_margin,
                                std::min(o.cln2.margin_bits, o.cln3.margin_bits));
        Theorem5Result r = theorem5_region(inst, 0.1, quick_opts());
        double h1 = cond_entropy(inst.joint, {"X1"}, {"Y1"});
        double h2 = cond_entropy(inst.joint, {"X2"}, {"X1", "Y2"});
        SprimeResult s = sprime(inst, 0.1, quick_opts());
        worst_corner = std::max(
            {worst_corner, std::abs(r.corner.r1 - h1), std::abs(r.corner.r12 - (h1 + h2)),
             std::abs(r.corner.r123 - (h1 + h2 + s.bits))});
        if (!r.conditions_met) worst_corner = 1.0;
    }
    bool ok = worst_eq < 1e-12 && worst_margin >= -1e-6 && worst_corner < 1e-3;
    std::ostringstream ss;
    ss << "specialization worst gap " << worst_eq << ", outer margin floor " << worst_margin
       << ", corner worst error " << worst_corner;
    report(7, ok, ss.str());
}

// 8. Determinism: identical --seed reruns produce byte-identical CSV output.
void criterion8(const std::string& cli, const std::string& instances) {
    std::string a = "acceptance_sweep_a.csv", b = "acceptance_sweep_b.csv";
    std::string base = "\"" + cli + "\" sweep --instance \"" + instances +
                       "/example2.json\" --d2 0:0.1:0.2 --restarts 6 --seed 1 --out ";
    int rc1 = std::system((base + a).c_str());
    int rc2 = std::system((base + b).c_str());
    std::string ca = read_file(a), cb = read_file(b);
    bool ok = rc1 == 0 && rc2 == 0 && !ca.empty() && ca == cb;
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::ostringstream ss;
    ss << "same-seed sweep reruns byte-identical (" << ca.size() << " bytes)";
    report(8, ok, ss.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: sird_acceptance <sird-cli> <instances-dir>" << std::endl;
        return 2;
    }
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8(argv[1], argv[2]);
    } catch (const std::exception& e) {
        std::cout << "FAIL unexpected exception: " << e.what() << std::endl;
        return 1;
    }
    if (g_failures == 0) {
        std::cout << "ACCEPTANCE: all 8 criteria passed" << std::endl;
        return 0;
    }
    std::cout << "ACCEPTANCE: " << g_failures << " criterion(s) failed" << std::endl;
    return 1;
}
