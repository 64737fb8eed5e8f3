#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sird/classifiers.hpp"
#include "sird/instance.hpp"
#include "sird/simplex_opt.hpp"

namespace sird {

struct SolveOptions {
    OptOptions opt;
    // 0 => defaults: |C| <= |X|+1 and |A|,|B| <= |X|+1. full_caps raises to
    // |C| <= |X|+3, |A|,|B| <= |C||X|+1.
    std::size_t cap_a = 0;
    std::size_t cap_b = 0;
    std::size_t cap_c = 0;
    bool full_caps = false;
    double tolerance = 1e-6; // bits, for condition checks
};

struct BoundResult {
    double bits = 0.0;
    std::optional<Channel> witness; // p(aux | x); flattened (A,B,C) for HB
    double distortion1 = 0.0;
    double distortion2 = 0.0;
    OptDiagnostics diag;
};

/// S(D2) = min I(X;B|X~,Y2) over p(b|x), |B| <= |X|+1, with greedy
/// phi2(b,x~,y2) and E delta2 <= D2. Requires receiver 1's psi (defines X~).
BoundResult wyner_ziv_s(const SourceInstance& inst, double d2, const SolveOptions& opts = {});

/// Heegard-Berger achievability: min over (A,B,C) of
/// max{I(X;C|Y1), I(X;C|Y2)} + I(X;A|C,Y1) + I(X;B|C,Y2).
BoundResult hb_upper_bound(const SourceInstance& inst, double d1, double d2,
                           const SolveOptions& opts = {});

/// Exact RD function for physically degraded side information (X - Y2 - Y1):
/// min over (B,C) of I(X;C|Y1) + I(X;B|C,Y2).
BoundResult degraded_rd(const SourceInstance& inst, double d1, double d2,
                        const SolveOptions& opts = {});

struct ConverseResult {
    double bits = 0.0;
    double h_xtilde_y1 = 0.0;
    double s_d2 = 0.0;
    ClnVerdict cln; // min_W {I(W;Y2|X~) - I(W;Y1|X~)}, |W| <= |X|
};

/// Lemma-style converse for deterministic delta1 at D1 = 0:
/// H(X~|Y1) + S(D2) + min_W {I(W;Y2|X~) - I(W;Y1|X~)}.
ConverseResult converse_lower_bound(const SourceInstance& inst, double d2,
                                    const SolveOptions& opts = {});

struct Theorem3Result {
    bool conditions_met = false;
    double rate = 0.0;  // exact when conditions_met
    double lower = 0.0; // sandwich, always filled
    double upper = 0.0;
    double h_xtilde_y1 = 0.0;
    double h_xtilde_y2 = 0.0;
    ClnVerdict cln;
};

/// R(0,D2) = H(X~|Y1) + S(D2) when CLN(Y2 >= Y1 | X~) and
/// H(X~|Y1) >= H(X~|Y2); otherwise the lower/upper sandwich.
Theorem3Result theorem3_rate(const SourceInstance& inst, double d2,
                             const SolveOptions& opts = {});

struct TwoSourceResult {
    bool conditions_met = false;
    double rate = 0.0; // H(X1|Y1) + H(X2|X1,Y2)
    double h_x1_y1 = 0.0;
    double h_x1_y2 = 0.0;
    ClnVerdict cln; // CLN(Y2 >= Y1 | X1)
};

/// Lossless two-source rate R(0,0) = H(X1|Y1) + H(X2|X1,Y2) under the
/// CLN-given-X1 and entropy conditions.
TwoSourceResult lossless_two_source_rate(const SourceInstance& inst,
                                         const SolveOptions& opts = {});

struct SweepRow {
    double d2 = 0.0;
    double lower_bits = 0.0;
    double upper_bits = 0.0;
    double gap_bits = 0.0;
    double cln_margin = 0.0;
};

std::vector<SweepRow> rd_curve_sweep(const SourceInstance& inst,
                                     const std::vector<double>& d2_grid,
                                     const SolveOptions& opts = {});

} // namespace sird
