#include "sird/rd_solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sird/channel_objective.hpp"
#include "sird/info.hpp"

namespace sird {

namespace {

constexpr double kDistortionTol = 1e-7;

struct Caps {
    std::size_t a, b, c;
};

Caps resolve_caps(const SourceInstance& inst, const SolveOptions& o) {
    const std::size_t xc = inst.x_card();
    Caps caps;
    caps.c = o.cap_c ? o.cap_c : (o.full_caps ? xc + 3 : xc + 1);
    caps.a = o.cap_a ? o.cap_a : (o.full_caps ? caps.c * xc + 1 : xc + 1);
    caps.b = o.cap_b ? o.cap_b : (o.full_caps ? caps.c * xc + 1 : xc + 1);
    return caps;
}

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double ipow(std::size_t base, std::size_t e) {
    double v = 1.0;
    for (std::size_t i = 0; i < e; ++i) v *= double(base);
    return v;
}

OptOptions trim_opts(const OptOptions& in, std::size_t w_dim, std::size_t slices) {
    OptOptions o = in;
    if (ipow(w_dim, slices) <= double(in.enumeration_budget)) {
        o.restarts = std::min<std::size_t>(o.restarts, 8);
    } else {
        o.restarts = std::min<std::size_t>(o.restarts, 12);
        o.max_iters = std::min<std::size_t>(o.max_iters, 800);
    }
    return o;
}

/// One Heegard-Berger-family solve at fixed auxiliary dimensions.
/// dims = (ca, cb, cc); with ca == 1 the A-terms vanish and the objective is
/// the degraded-case I(X;C|Y1) + I(X;B|C,Y2) (no max over receivers).
struct HbProblem {
    ChannelObjective common; // I(X;A|C,Y1) + I(X;B|C,Y2)
    ChannelObjective head1;  // I(X;C|Y1)
    ChannelObjective head2;  // I(X;C|Y2)
    GreedyDistortion g1;
    GreedyDistortion g2;
    double d1, d2;
    bool use_max; // max over the two head terms (HB); otherwise head1 only

    Objective objective() {
        Objective o;
        o.value = [this](std::span<const double> p) {
            double h1 = head1.value(p);
            double h = use_max ? std::max(h1, head2.value(p)) : h1;
            return common.value(p) + h;
        };
        o.gradient = [this](std::span<const double> p, std::span<double> g) {
            common.gradient(p, g);
            std::vector<double> tmp(g.size());
            bool second = use_max && head2.value(p) > head1.value(p);
            (second ? head2 : head1).gradient(p, tmp);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
        };
        o.violation = [this](std::span<const double> p) {
            return std::max(0.0, g1.expected(p) - d1) + std::max(0.0, g2.expected(p) - d2);
        };
        o.violation_gradient = [this](std::span<const double> p, std::span<double> g) {
            std::fill(g.begin(), g.end(), 0.0);
            std::vector<double> tmp(g.size());
            if (g1.expected(p) > d1) {
                g1.gradient(p, tmp);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
            }
            if (g2.expected(p) > d2) {
                g2.gradient(p, tmp);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
            }
        };
        return o;
    }
};

HbProblem make_hb_problem(const SourceInstance& inst, std::size_t ca, std::size_t cb,
                          std::size_t cc, double d1, double d2, bool use_max) {
    const std::vector<std::string>& x = inst.x_axes;
    const std::size_t w = ca * cb * cc;
    const std::vector<std::size_t> dims{ca, cb, cc};
    auto pC = component_proj(dims, {2});
    auto pAC = component_proj(dims, {0, 2});
    auto pBC = component_proj(dims, {1, 2});

    ChannelObjective common(inst.joint, x, w);
    // I(X;A|C,Y1) = H(A,C,Y1) + H(X,C,Y1) - H(X,A,C,Y1) - H(C,Y1)
    if (ca > 1) {
        common.add_entropy_term(+1.0, {"Y1"}, pAC);
        common.add_entropy_term(+1.0, join(x, {"Y1"}), pC);
        common.add_entropy_term(-1.0, join(x, {"Y1"}), pAC);
        common.add_entropy_term(-1.0, {"Y1"}, pC);
    }
    // I(X;B|C,Y2)
    if (cb > 1) {
        common.add_entropy_term(+1.0, {"Y2"}, pBC);
        common.add_entropy_term(+1.0, join(x, {"Y2"}), pC);
        common.add_entropy_term(-1.0, join(x, {"Y2"}), pBC);
        common.add_entropy_term(-1.0, {"Y2"}, pC);
    }

    ChannelObjective head1(inst.joint, x, w);
    head1.add_cmi_term(+1.0, x, {"Y1"}, pC);
    ChannelObjective head2(inst.joint, x, w);
    head2.add_cmi_term(+1.0, x, {"Y2"}, pC);

    GreedyDistortion g1(inst.joint, x, w, pAC, {"Y1"}, x, inst.distortion(1).delta);
    GreedyDistortion g2(inst.joint, x, w, pBC, {"Y2"}, x, inst.distortion(2).delta);
    return HbProblem{std::move(common), std::move(head1), std::move(head2),
                     std::move(g1),     std::move(g2),    d1,
                     d2,                use_max};
}

BoundResult best_over_combos(const SourceInstance& inst,
                             const std::vector<std::array<std::size_t, 3>>& combos,
                             double d1, double d2, bool use_max, const SolveOptions& opts) {
    BoundResult best;
    bool found = false;
    for (const auto& c : combos) {
        HbProblem prob = make_hb_problem(inst, c[0], c[1], c[2], d1, d2, use_max);
        Objective o = prob.objective();
        OptOptions to = trim_opts(opts.opt, c[0] * c[1] * c[2], inst.x_card());
        OptResult r = minimize(prob.common.space(), o, to);
        if (r.violation > kDistortionTol) continue;
        if (!found || r.value < best.bits) {
            found = true;
            best.bits = std::max(0.0, r.value);
            best.witness = prob.common.to_channel(r.point, "ABC");
            best.distortion1 = prob.g1.expected(r.point);
            best.distortion2 = prob.g2.expected(r.point);
            best.diag = r.diag;
        }
    }
    if (!found) throw InfeasibleDistortion("no feasible auxiliary system at the given distortions");
    return best;
}

} // namespace

BoundResult wyner_ziv_s(const SourceInstance& inst, double d2, const SolveOptions& opts) {
    if (d2 < 0.0) throw InfeasibleDistortion("negative distortion target");
    JointPMF base = with_xtilde(inst, 1);
    const std::vector<std::string>& x = inst.x_axes;
    const std::string xt = xtilde_name(1);
    const std::size_t cap = inst.x_card() + 1;

    BoundResult best;
    bool found = false;
    for (std::size_t k = 1; k <= cap; ++k) {
        ChannelObjective obj(base, x, k);
        obj.add_cmi_term(+1.0, x, {xt, "Y2"});
        GreedyDistortion g(base, x, k, identity_proj(k), {xt, "Y2"}, x,
                           inst.distortion(2).delta);

        Objective o;
        o.value = [&obj](std::span<const double> p) { return obj.value(p); };
        o.gradient = [&obj](std::span<const double> p, std::span<double> gr) {
            obj.gradient(p, gr);
        };
        o.violation = [&g, d2](std::span<const double> p) {
            return std::max(0.0, g.expected(p) - d2);
        };
        o.violation_gradient = [&g, d2](std::span<const double> p, std::span<double> gr) {
            if (g.expected(p) > d2)
                g.gradient(p, gr);
            else
                std::fill(gr.begin(), gr.end(), 0.0);
        };

        OptResult r = minimize(obj.space(), o, trim_opts(opts.opt, k, inst.x_card()));
        if (r.violation > kDistortionTol) continue;
        if (!found || r.value < best.bits) {
            found = true;
            best.bits = std::max(0.0, r.value);
            best.witness = obj.to_channel(r.point, "B");
            best.distortion2 = g.expected(r.point);
            best.diag = r.diag;
        }
    }
    if (!found) throw InfeasibleDistortion("D2 below the minimum achievable distortion");
    return best;
}

BoundResult hb_upper_bound(const SourceInstance& inst, double d1, double d2,
                           const SolveOptions& opts) {
    if (d1 < 0.0 || d2 < 0.0) throw InfeasibleDistortion("negative distortion target");
    Caps caps = resolve_caps(inst, opts);
    std::vector<std::array<std::size_t, 3>> combos{
        {1, 1, 1},           {caps.a, 1, 1},      {1, caps.b, 1},
        {1, 1, caps.c},      {caps.a, caps.b, 1}, {caps.a, 1, caps.c},
        {1, caps.b, caps.c}, {caps.a, caps.b, caps.c}};
    std::sort(combos.begin(), combos.end());
    combos.erase(std::unique(combos.begin(), combos.end()), combos.end());
    return best_over_combos(inst, combos, d1, d2, /*use_max=*/true, opts);
}

BoundResult degraded_rd(const SourceInstance& inst, double d1, double d2,
                        const SolveOptions& opts) {
    double res = markov_residual(inst.joint, inst.x_axes, {"Y2"}, {"Y1"});
    if (res > 1e-9) throw NotDegraded("side information is not physically degraded");
    Caps caps = resolve_caps(inst, opts);
    // under degradedness I(X;C|Y1) >= I(X;C|Y2) for any C - X - (Y1,Y2), so
    // the max collapses and the A-refinement layer (useful when D1 > 0) can be
    // searched as well without affecting validity
    std::vector<std::array<std::size_t, 3>> combos{
        {1, 1, 1},           {caps.a, 1, 1},      {1, caps.b, 1},
        {1, 1, caps.c},      {caps.a, caps.b, 1}, {caps.a, 1, caps.c},
        {1, caps.b, caps.c}, {caps.a, caps.b, caps.c}};
    std::sort(combos.begin(), combos.end());
    combos.erase(std::unique(combos.begin(), combos.end()), combos.end());
    return best_over_combos(inst, combos, d1, d2, /*use_max=*/false, opts);
}

ConverseResult converse_lower_bound(const SourceInstance& inst, double d2,
                                    const SolveOptions& opts) {
    JointPMF base = with_xtilde(inst, 1);
    const std::string xt = xtilde_name(1);

    ConverseResult r;
    r.h_xtilde_y1 = cond_entropy(base, {xt}, {"Y1"});
    r.s_d2 = wyner_ziv_s(inst, d2, opts).bits;

    ClnOptions co;
    co.max_cardinality = inst.x_card();
    co.tolerance = opts.tolerance;
    co.opt = opts.opt;
    r.cln = cln_margin(base, inst.x_axes, {xt}, co);
    r.bits = std::max(0.0, r.h_xtilde_y1 + r.s_d2 + r.cln.margin_bits);
    return r;
}

Theorem3Result theorem3_rate(const SourceInstance& inst, double d2, const SolveOptions& opts) {
    JointPMF base = with_xtilde(inst, 1);
    const std::string xt = xtilde_name(1);

    Theorem3Result t;
    t.h_xtilde_y1 = cond_entropy(base, {xt}, {"Y1"});
    t.h_xtilde_y2 = cond_entropy(base, {xt}, {"Y2"});

    ConverseResult lo = converse_lower_bound(inst, d2, opts);
    t.cln = lo.cln;
    t.lower = lo.bits;
    t.conditions_met = (t.cln.verdict == ClnStatus::CLN) &&
                       (t.h_xtilde_y1 >= t.h_xtilde_y2 - opts.tolerance);
    if (t.conditions_met) {
        t.rate = t.h_xtilde_y1 + lo.s_d2;
        t.upper = t.rate;
    } else {
        t.upper = hb_upper_bound(inst, 0.0, d2, opts).bits;
    }
    return t;
}

TwoSourceResult lossless_two_source_rate(const SourceInstance& inst, const SolveOptions& opts) {
    if (!inst.two_source())
        throw NotTwoSource("lossless_two_source_rate requires X = (X1,X2)");
    const std::string& x1 = inst.x_axes[0];
    const std::string& x2 = inst.x_axes[1];

    TwoSourceResult t;
    t.h_x1_y1 = cond_entropy(inst.joint, {x1}, {"Y1"});
    t.h_x1_y2 = cond_entropy(inst.joint, {x1}, {"Y2"});
    t.rate = t.h_x1_y1 + cond_entropy(inst.joint, {x2}, {x1, "Y2"});

    ClnOptions co;
    co.max_cardinality = inst.x_card();
    co.tolerance = opts.tolerance;
    co.opt = opts.opt;
    t.cln = cln_margin(inst.joint, inst.x_axes, {x1}, co);
    t.conditions_met = (t.cln.verdict == ClnStatus::CLN) &&
                       (t.h_x1_y1 >= t.h_x1_y2 - opts.tolerance);
    return t;
}

std::vector<SweepRow> rd_curve_sweep(const SourceInstance& inst,
                                     const std::vector<double>& d2_grid,
                                     const SolveOptions& opts) {
    if (!std::is_sorted(d2_grid.begin(), d2_grid.end()))
        throw OutOfRange("rd_curve_sweep: grid must be sorted ascending");
    JointPMF base = with_xtilde(inst, 1);
    const std::string xt = xtilde_name(1);
    double h1 = cond_entropy(base, {xt}, {"Y1"});
    double h2 = cond_entropy(base, {xt}, {"Y2"});

    ClnOptions co;
    co.max_cardinality = inst.x_card();
    co.tolerance = opts.tolerance;
    co.opt = opts.opt;
    ClnVerdict cln = cln_margin(base, inst.x_axes, {xt}, co);
    bool exact = (cln.verdict == ClnStatus::CLN) && (h1 >= h2 - opts.tolerance);

    // Raw per-point estimates of S(D2). Each is an upper estimate of a convex,
    // non-increasing function, so two post-passes tighten them without losing
    // validity: a witness feasible at a smaller D2 stays feasible at a larger
    // one (monotone clamp), and time-sharing two witnesses achieves any chord
    // (lower convex envelope).
    std::vector<double> s(d2_grid.size());
    for (std::size_t i = 0; i < d2_grid.size(); ++i)
        s[i] = wyner_ziv_s(inst, d2_grid[i], opts).bits;
    for (std::size_t i = 1; i < s.size(); ++i) s[i] = std::min(s[i], s[i - 1]);
    if (s.size() >= 3) {
        // lower convex hull over (d2, s) by monotone chain, then re-sample
        std::vector<std::size_t> hull;
        for (std::size_t i = 0; i < s.size(); ++i) {
            while (hull.size() >= 2) {
                std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
                double cross = (d2_grid[b] - d2_grid[a]) * (s[i] - s[a]) -
                               (d2_grid[i] - d2_grid[a]) * (s[b] - s[a]);
                if (cross <= 0.0)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(i);
        }
        std::vector<double> env(s.size());
        std::size_t seg = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            while (seg + 1 < hull.size() && d2_grid[hull[seg + 1]] < d2_grid[i]) ++seg;
            std::size_t a = hull[seg], b = hull[std::min(seg + 1, hull.size() - 1)];
            if (a == b || d2_grid[b] == d2_grid[a]) {
                env[i] = s[a];
            } else {
                double t = (d2_grid[i] - d2_grid[a]) / (d2_grid[b] - d2_grid[a]);
                env[i] = s[a] + t * (s[b] - s[a]);
            }
        }
        s = std::move(env);
    }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < d2_grid.size(); ++i) {
        SweepRow row;
        row.d2 = d2_grid[i];
        row.cln_margin = cln.margin_bits;
        row.lower_bits = std::max(0.0, h1 + s[i] + cln.margin_bits);
        row.upper_bits =
            exact ? h1 + s[i] : hb_upper_bound(inst, 0.0, d2_grid[i], opts).bits;
        row.gap_bits = row.upper_bits - row.lower_bits;
        rows.push_back(row);
    }
    return rows;
}

} // namespace sird
