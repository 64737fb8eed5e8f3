#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "sird/info.hpp"
#include "sird/succ_refine.hpp"

using namespace sird;
using namespace sird::testing;

namespace {

SolveOptions quick_opts() {
    SolveOptions o;
    o.opt.restarts = 8;
    o.opt.max_iters = 800;
    return o;
}

/// Three-receiver two-source instance with X - Y3 - Y2 - Y1 physically
/// degraded side information.
SourceInstance degraded_triple(std::mt19937_64& rng, std::size_t side_card = 2) {
    std::vector<Alphabet> xa{Alphabet::binary("X1"), Alphabet::binary("X2")};
    JointPMF x(xa, random_pmf(rng, 4));
    JointPMF j = x.attach_auxiliary(Channel({xa[0], xa[1]}, Alphabet::indexed("Y3", side_card),
                                            random_channel_probs(rng, 4, side_card)));
    j = j.attach_auxiliary(Channel({j.axis("Y3")}, Alphabet::indexed("Y2", side_card),
                                   random_channel_probs(rng, side_card, side_card)));
    j = j.attach_auxiliary(Channel({j.axis("Y2")}, Alphabet::indexed("Y1", side_card),
                                   random_channel_probs(rng, side_card, side_card)));
    return two_source_instance(j.marginalize({"X1", "X2", "Y1", "Y2", "Y3"}), 3);
}

/// Attaches a random auxiliary channel whose inputs are the listed axes.
JointPMF attach_random(std::mt19937_64& rng, const JointPMF& j,
                       const std::vector<std::string>& inputs, const std::string& name,
                       std::size_t card) {
    std::vector<Alphabet> in;
    std::size_t slices = 1;
    for (const auto& a : inputs) {
        in.push_back(j.axis(a));
        slices *= in.back().size();
    }
    return j.attach_auxiliary(
        Channel(in, Alphabet::indexed(name, card), random_channel_probs(rng, slices, card)));
}

/// Derives an exact copy of an existing binary-or-larger axis.
JointPMF copy_axis(const JointPMF& j, const std::string& src, const std::string& dst) {
    const Alphabet& a = j.axis(src);
    std::vector<std::size_t> id(a.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    return j.derive_variable(DeterministicMap(a, Alphabet::indexed(dst, a.size()), id), dst);
}

/// Attaches a one-symbol constant axis.
JointPMF const_axis(const JointPMF& j, const std::string& name) {
    return j.attach_auxiliary(Channel::constant(j.axes().front(), name));
}

/// Single-source four-letter instance for the two-stage scalable results.
SourceInstance quaternary_instance(std::mt19937_64& rng, std::vector<std::size_t> psi1,
                                   std::size_t card1, std::vector<std::size_t> psi2,
                                   std::size_t card2) {
    JointPMF x({Alphabet::indexed("X", 4)}, random_pmf(rng, 4));
    JointPMF j = x.attach_auxiliary(Channel::identity(x.axis("X"), "Y1"));
    j = j.attach_auxiliary(Channel({j.axis("Y1")}, Alphabet::indexed("Y2", 4),
                                   random_channel_probs(rng, 4, 4)));
    SourceInstance inst{j.marginalize({"X", "Y1", "Y2"}), {"X"}, {"Y1", "Y2"}, {}, "quat"};
    inst.distortions.push_back(
        DistortionSpec::from_psi(Alphabet::indexed("X1_hat", card1), std::move(psi1)));
    inst.distortions.push_back(
        DistortionSpec::from_psi(Alphabet::indexed("X2_hat", card2), std::move(psi2)));
    inst.validate();
    return inst;
}

} // namespace

TEST_SUITE_BEGIN("succ_refine");

TEST_CASE("sprime: maximal third-stage distortion costs nothing") {
    std::mt19937_64 rng(501);
    SourceInstance inst = degraded_triple(rng);
    SprimeResult r = sprime(inst, 1.0, quick_opts());
    CHECK(r.bits < 1e-6);
}

TEST_CASE("inner bound with constant auxiliaries is the origin") {
    std::mt19937_64 rng(502);
    SourceInstance inst = degraded_triple(rng);
    JointPMF j = const_axis(inst.joint, "A1");
    j = const_axis(j, "A2");
    j = const_axis(j, "A3");
    RegionCorner c = sr_inner_eval(inst, j, {"A1", "A2", "A3"});
    CHECK(std::abs(c.r1) < 1e-12);
    CHECK(std::abs(c.r12) < 1e-12);
    CHECK(std::abs(c.r123) < 1e-12);
}

TEST_CASE("degraded side information collapses the max terms") {
    std::mt19937_64 rng(503);
    for (int t = 0; t < 5; ++t) {
        SourceInstance inst = degraded_triple(rng);
        JointPMF j = attach_random(rng, inst.joint, {"X1", "X2"}, "A1", 2);
        j = attach_random(rng, j, {"X1", "X2", "A1"}, "A2", 2);
        j = attach_random(rng, j, {"X1", "X2", "A1", "A2"}, "A3", 2);
        RegionCorner c = sr_inner_eval(inst, j, {"A1", "A2", "A3"});
        // with Y1 the most degraded, every max is attained at its first entry
        double r1 = cond_mutual_info(j, {"X1", "X2"}, {"A1"}, {"Y1"});
        double r12 = r1 + cond_mutual_info(j, {"X1", "X2"}, {"A2"}, {"A1", "Y2"});
        double r123 = r12 + cond_mutual_info(j, {"X1", "X2"}, {"A3"}, {"A1", "A2", "Y3"});
        CHECK(std::abs(c.r1 - r1) < 1e-9);
        CHECK(std::abs(c.r12 - r12) < 1e-9);
        CHECK(std::abs(c.r123 - r123) < 1e-9);
    }
}

TEST_CASE("degraded corner: closed form at zero first-stage distortions") {
    std::mt19937_64 rng(504);
    SourceInstance inst = degraded_triple(rng);
    RegionCorner c = sr_degraded_corner(inst, 0.0, 0.0, 0.1, quick_opts());
    double h1 = cond_entropy(inst.joint, {"X1"}, {"Y1"});
    double h2 = cond_entropy(inst.joint, {"X2"}, {"X1", "Y2"});
    CHECK(c.r1 == doctest::Approx(h1).epsilon(1e-9));
    CHECK(c.r12 == doctest::Approx(h1 + h2).epsilon(1e-9));
    CHECK(c.r123 >= c.r12 - 1e-9);
    SprimeResult s = sprime(inst, 0.1, quick_opts());
    CHECK(std::abs((c.r123 - c.r12) - s.bits) < 1e-6);
}

TEST_CASE("degraded corner: perfect side information everywhere is free") {
    JointPMF x({Alphabet::binary("X1"), Alphabet::binary("X2")}, {0.1, 0.2, 0.3, 0.4});
    JointPMF j = x.derive_grouped({"X1", "X2"}, Alphabet::indexed("Y3", 4), {0, 1, 2, 3});
    j = copy_axis(j, "Y3", "Y2");
    j = copy_axis(j, "Y2", "Y1");
    SourceInstance inst = two_source_instance(j.marginalize({"X1", "X2", "Y1", "Y2", "Y3"}), 3);
    RegionCorner c = sr_degraded_corner(inst, 0.0, 0.0, 0.0, quick_opts());
    CHECK(std::abs(c.r1) < 1e-6);
    CHECK(std::abs(c.r12) < 1e-6);
    CHECK(std::abs(c.r123) < 1e-6);
}

TEST_CASE("degraded corner rejects non-degraded instances") {
    std::mt19937_64 rng(505);
    // independent side variables are not a degradation chain in general
    SourceInstance inst = example1_instance();
    JointPMF j = inst.joint.attach_auxiliary(
        Channel({inst.joint.axis("X1")}, Alphabet::binary("Y3"),
                random_channel_probs(rng, 2, 2)));
    SourceInstance inst3 = two_source_instance(j.marginalize({"X1", "X2", "Y1", "Y2", "Y3"}), 3);
    CHECK_THROWS_AS(sr_degraded_corner(inst3, 0.0, 0.0, 0.1, quick_opts()), NotDegraded);
}

TEST_CASE("outer bound margins vanish under degradedness") {
    std::mt19937_64 rng(506);
    SourceInstance inst = degraded_triple(rng);
    SrOuterResult o = sr_outer_bound(inst, 0.1, quick_opts());
    CHECK(o.cln2.margin_bits >= -1e-6);
    CHECK(o.cln3.margin_bits >= -1e-6);
    CHECK(o.r1 <= o.r12 + 1e-9);
    CHECK(o.r12 <= o.r123 + 1e-9);
}

TEST_CASE("theorem 5 matches the degraded corner") {
    std::mt19937_64 rng(507);
    SourceInstance inst = degraded_triple(rng);
    Theorem5Result r = theorem5_region(inst, 0.1, quick_opts());
    CHECK(r.conditions_met);
    CHECK(r.entropy2_ok);
    CHECK(r.entropy3_ok);
    RegionCorner c = sr_degraded_corner(inst, 0.0, 0.0, 0.1, quick_opts());
    CHECK(std::abs(r.corner.r1 - c.r1) < 1e-3);
    CHECK(std::abs(r.corner.r12 - c.r12) < 1e-3);
    CHECK(std::abs(r.corner.r123 - c.r123) < 1e-3);
}

TEST_CASE("theorem 6: refinement at the second stage (case i)") {
    std::mt19937_64 rng(508);
    SourceInstance inst = quaternary_instance(rng, {0, 1, 2, 3}, 4, {0, 0, 1, 1}, 2);
    Theorem6Result r = theorem6_region(inst, quick_opts());
    CHECK(r.conditions_met);
    CHECK(r.which == Theorem6Case::CaseI);
    CHECK(r.corner.r1 == doctest::Approx(0.0).epsilon(1e-9));
    double h = cond_entropy(with_xtilde(inst, 2), {"Xt2"}, {"Y2"});
    CHECK(r.corner.r12 == doctest::Approx(h).epsilon(1e-9));
}

TEST_CASE("theorem 6: refinement at the first stage (case ii)") {
    std::mt19937_64 rng(509);
    SourceInstance inst = quaternary_instance(rng, {0, 0, 1, 1}, 2, {0, 1, 2, 3}, 4);
    Theorem6Result r = theorem6_region(inst, quick_opts());
    CHECK(r.conditions_met);
    CHECK(r.which == Theorem6Case::CaseII);
    CHECK(r.corner.r1 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.corner.r12 ==
          doctest::Approx(cond_entropy(inst.joint, {"X"}, {"Y2"})).epsilon(1e-9));
}

TEST_CASE("theorem 6: incomparable requirements are rejected") {
    std::mt19937_64 rng(510);
    SourceInstance inst = quaternary_instance(rng, {0, 0, 1, 1}, 2, {0, 1, 0, 1}, 2);
    CHECK_THROWS_AS(theorem6_region(inst, quick_opts()), NoDegradationRelation);
}

TEST_CASE("seven-auxiliary evaluator: all constants give the origin") {
    std::mt19937_64 rng(511);
    SourceInstance inst = degraded_triple(rng);
    JointPMF j = inst.joint;
    std::array<std::string, 7> u{"U123", "U12", "U13", "U23", "U1", "U2", "U3"};
    for (const auto& name : u) j = const_axis(j, name);
    RegionCorner c = tcg_eval(inst, j, u);
    CHECK(std::abs(c.r1) < 1e-12);
    CHECK(std::abs(c.r12) < 1e-12);
    CHECK(std::abs(c.r123) < 1e-12);
}

TEST_CASE("seven-auxiliary evaluator specializes to the three-stage bound") {
    std::mt19937_64 rng(512);
    for (int t = 0; t < 5; ++t) {
        SourceInstance inst = degraded_triple(rng);
        JointPMF j = attach_random(rng, inst.joint, {"X1", "X2"}, "A1", 2);
        j = attach_random(rng, j, {"X1", "X2", "A1"}, "A2", 2);
        j = attach_random(rng, j, {"X1", "X2", "A1", "A2"}, "A3", 2);
        RegionCorner inner = sr_inner_eval(inst, j, {"A1", "A2", "A3"});
        // U123 = U1 = A1, U23 = U2 = A2, U3 = A3, U12 and U13 constant
        JointPMF k = copy_axis(j, "A1", "U123");
        k = copy_axis(k, "A2", "U23");
        k = const_axis(k, "U12");
        k = const_axis(k, "U13");
        RegionCorner tcg = tcg_eval(inst, k, {"U123", "U12", "U13", "U23", "A1", "A2", "A3"});
        CHECK(std::abs(tcg.r1 - inner.r1) < 1e-12);
        CHECK(std::abs(tcg.r12 - inner.r12) < 1e-12);
        CHECK(std::abs(tcg.r123 - inner.r123) < 1e-12);
    }
}

TEST_CASE("seven-auxiliary evaluator specializes to the scalable bound") {
    std::mt19937_64 rng(513);
    for (int t = 0; t < 5; ++t) {
        SourceInstance inst3 = degraded_triple(rng);
        SourceInstance inst2 =
            two_source_instance(inst3.joint.marginalize({"X1", "X2", "Y1", "Y2"}), 2);
        JointPMF j = attach_random(rng, inst3.joint, {"X1", "X2"}, "A12", 2);
        j = attach_random(rng, j, {"X1", "X2", "A12"}, "A1", 2);
        j = attach_random(rng, j, {"X1", "X2", "A12"}, "A2", 2);
        RatePair sc = scalable_inner_eval(inst2, j, {"A12", "A1", "A2"});
        // U12 = A12, U1 = A1, U2 = A2, everything else constant
        JointPMF k = const_axis(j, "U123");
        k = const_axis(k, "U13");
        k = const_axis(k, "U23");
        k = const_axis(k, "U3");
        RegionCorner tcg = tcg_eval(inst3, k, {"U123", "A12", "U13", "U23", "A1", "A2", "U3"});
        CHECK(std::abs(tcg.r1 - sc.r1) < 1e-12);
        CHECK(std::abs(tcg.r12 - sc.r12) < 1e-12);
    }
}

TEST_CASE("greedy expected distortion helper") {
    // perfect context: distortion 0 under Hamming
    JointPMF x({Alphabet::binary("X")}, {0.3, 0.7});
    JointPMF j = x.attach_auxiliary(Channel::identity(x.axis("X"), "C"));
    CHECK(greedy_expected_distortion(j, {"C"}, {"X"}, {{0.0, 1.0}, {1.0, 0.0}}) < 1e-12);
    // no context: best constant guess
    JointPMF k = x.attach_auxiliary(Channel::constant(x.axis("X"), "C"));
    CHECK(greedy_expected_distortion(k, {"C"}, {"X"}, {{0.0, 1.0}, {1.0, 0.0}}) ==
          doctest::Approx(0.3).epsilon(1e-12));
}

TEST_SUITE_END();
