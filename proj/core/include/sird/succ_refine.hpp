#pragma once

#include <array>
#include <optional>
#include <string>

#include "sird/classifiers.hpp"
#include "sird/instance.hpp"
#include "sird/rd_solvers.hpp"

namespace sird {

/// Cumulative sum-rate thresholds (R1, R1+R2, R1+R2+R3).
struct RegionCorner {
    double r1 = 0.0;
    double r12 = 0.0;
    double r123 = 0.0;
};

struct RatePair {
    double r1 = 0.0;
    double r12 = 0.0;
};

struct SprimeResult {
    double bits = 0.0;
    std::optional<Channel> witness;
    double distortion3 = 0.0;
    OptDiagnostics diag;
};

/// S'(D3) = min I(X;A3|X~1,X~2,Y3), |A3| <= |X|+1, with greedy
/// phi3(a3,x~1,x~2,y3) and E delta3 <= D3. Needs psi1 and psi2.
SprimeResult sprime(const SourceInstance& inst3, double d3, const SolveOptions& opts = {});

/// Three-stage inner-bound thresholds for auxiliaries (A1,A2,A3) already
/// present as axes of `joint_aux` (attach channels / derive copies upstream;
/// the evaluator assumes the (A1,A2,A3) - X - (Y1,Y2,Y3) chain held during
/// construction). When `d_check` is given, the greedy reconstructions
/// phi1(A1,Y1), phi2(A1,A2,Y2), phi3(A1,A2,A3,Y3) must meet the distortions.
RegionCorner sr_inner_eval(const SourceInstance& inst3, const JointPMF& joint_aux,
                           const std::array<std::string, 3>& aux,
                           const std::optional<std::array<double, 3>>& d_check = {});

/// Exact corner for physically degraded X - Y3 - Y2 - Y1. With deterministic
/// delta1, delta2 at D1 = D2 = 0 this is the closed form
/// (H(X~1|Y1), +H(X~2|X~1,Y2), +S'(D3)); otherwise the sum rate is minimized
/// over (A1,A2,A3) directly.
RegionCorner sr_degraded_corner(const SourceInstance& inst3, double d1, double d2, double d3,
                                const SolveOptions& opts = {});

struct SrOuterResult {
    double r1 = 0.0;
    double r12 = 0.0;
    double r123 = 0.0;
    double sprime_bits = 0.0;
    ClnVerdict cln2; // min_W I(W;Y2|X~1) - I(W;Y1|X~1)
    ClnVerdict cln3; // min_W I(W;Y3|X~1,X~2) - I(W;Y2|X~1,X~2)
};

/// Outer-bound thresholds for deterministic delta1, delta2 at D1 = D2 = 0.
SrOuterResult sr_outer_bound(const SourceInstance& inst3, double d3,
                             const SolveOptions& opts = {});

struct Theorem5Result {
    bool conditions_met = false;
    RegionCorner corner; // exact when conditions_met; inner corner otherwise
    SrOuterResult outer;
    bool entropy2_ok = false;
    bool entropy3_ok = false;
};

/// Matched region: both CLN conditions plus both entropy comparisons.
Theorem5Result theorem5_region(const SourceInstance& inst3, double d3,
                               const SolveOptions& opts = {});

/// Two-stage scalable inner-bound thresholds for (A12,A1,A2) axes of
/// `joint_aux`. Reconstructions phi1(A12,A1,Y1), phi2(A12,A2,Y2).
RatePair scalable_inner_eval(const SourceInstance& inst2, const JointPMF& joint_aux,
                             const std::array<std::string, 3>& aux, // {A12, A1, A2}
                             const std::optional<std::array<double, 2>>& d_check = {});

enum class Theorem6Case { CaseI, CaseII };

struct Theorem6Result {
    bool conditions_met = false;
    Theorem6Case which = Theorem6Case::CaseI;
    RatePair corner;
    ClnVerdict cln; // case (i) only: min_W I(W;Y1|X~2) - I(W;Y2|X~2)
    double h_gap = 0.0; // slack in the entropy condition of the active case
};

/// Exact two-stage corner when delta2 (case i) or delta1 (case ii) is a
/// degraded version of the other and the matching conditions hold.
Theorem6Result theorem6_region(const SourceInstance& inst2, const SolveOptions& opts = {});

/// General seven-auxiliary achievability thresholds, evaluated verbatim on
/// axes u = {U123,U12,U13,U23,U1,U2,U3} of `joint_aux`. Used as the
/// consistency oracle for the two specializations above.
RegionCorner tcg_eval(const SourceInstance& inst3, const JointPMF& joint_aux,
                      const std::array<std::string, 7>& u,
                      const std::optional<std::array<double, 3>>& d_check = {});

/// Greedy-reconstruction expected distortion: phi(cond_axes) -> xhat chosen
/// per conditioning cell by conditional-expected-distortion argmin.
double greedy_expected_distortion(const JointPMF& j, const std::vector<std::string>& cond_axes,
                                  const std::vector<std::string>& x_axes,
                                  const std::vector<std::vector<double>>& delta);

} // namespace sird
