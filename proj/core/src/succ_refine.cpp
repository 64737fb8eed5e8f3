#include "sird/succ_refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sird/channel_objective.hpp"
#include "sird/info.hpp"

namespace sird {

namespace {

constexpr double kDistortionTol = 1e-7;
constexpr double kCheckTol = 1e-9;

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void check_distortion(const JointPMF& j, const std::vector<std::string>& cond,
                      const std::vector<std::string>& x_axes,
                      const std::vector<std::vector<double>>& delta, double target,
                      const char* who) {
    double e = greedy_expected_distortion(j, cond, x_axes, delta);
    if (e > target + kCheckTol)
        throw DistortionViolated(std::string(who) + ": expected distortion " +
                                 std::to_string(e) + " exceeds target " +
                                 std::to_string(target));
}

} // namespace

double greedy_expected_distortion(const JointPMF& j, const std::vector<std::string>& cond_axes,
                                  const std::vector<std::string>& x_axes,
                                  const std::vector<std::vector<double>>& delta) {
    JointPMF m = j.marginalize(join(cond_axes, x_axes));
    std::size_t cond_cells = 1;
    for (const auto& a : cond_axes) cond_cells *= j.axis(a).size();
    const std::size_t xc = m.cell_count() / cond_cells;
    if (delta.size() != xc) throw OutOfRange("distortion rows do not match source group");
    const std::size_t hc = delta.empty() ? 0 : delta[0].size();

    double total = 0.0;
    for (std::size_t c = 0; c < cond_cells; ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t h = 0; h < hc; ++h) {
            double d = 0.0;
            for (std::size_t x = 0; x < xc; ++x) d += m.probs()[c * xc + x] * delta[x][h];
            best = std::min(best, d);
        }
        total += best;
    }
    return total;
}

SprimeResult sprime(const SourceInstance& inst3, double d3, const SolveOptions& opts) {
    if (d3 < 0.0) throw InfeasibleDistortion("negative distortion target");
    JointPMF base = with_xtilde(inst3, 2, nullptr);
    base = with_xtilde(inst3, 1, &base);
    const std::vector<std::string>& x = inst3.x_axes;
    const std::string xt1 = xtilde_name(1), xt2 = xtilde_name(2);
    const std::size_t cap = inst3.x_card() + 1;

    SprimeResult best;
    bool found = false;
    for (std::size_t k = 1; k <= cap; ++k) {
        ChannelObjective obj(base, x, k);
        obj.add_cmi_term(+1.0, x, {xt1, xt2, "Y3"});
        GreedyDistortion g(base, x, k, identity_proj(k), {xt1, xt2, "Y3"}, x,
                           inst3.distortion(3).delta);

        Objective o;
        o.value = [&obj](std::span<const double> p) { return obj.value(p); };
        o.gradient = [&obj](std::span<const double> p, std::span<double> gr) {
            obj.gradient(p, gr);
        };
        o.violation = [&g, d3](std::span<const double> p) {
            return std::max(0.0, g.expected(p) - d3);
        };
        o.violation_gradient = [&g, d3](std::span<const double> p, std::span<double> gr) {
            if (g.expected(p) > d3)
                g.gradient(p, gr);
            else
                std::fill(gr.begin(), gr.end(), 0.0);
        };

        OptResult r = minimize(obj.space(), o, opts.opt);
        if (r.violation > kDistortionTol) continue;
        if (!found || r.value < best.bits) {
            found = true;
            best.bits = std::max(0.0, r.value);
            best.witness = obj.to_channel(r.point, "A3");
            best.distortion3 = g.expected(r.point);
            best.diag = r.diag;
        }
    }
    if (!found) throw InfeasibleDistortion("D3 below the minimum achievable distortion");
    return best;
}

RegionCorner sr_inner_eval(const SourceInstance& inst3, const JointPMF& j,
                           const std::array<std::string, 3>& aux,
                           const std::optional<std::array<double, 3>>& d_check) {
    const std::vector<std::string>& x = inst3.x_axes;
    const std::string &a1 = aux[0], &a2 = aux[1], &a3 = aux[2];
    if (d_check) {
        check_distortion(j, {a1, "Y1"}, x, inst3.distortion(1).delta, (*d_check)[0], "phi1");
        check_distortion(j, {a1, a2, "Y2"}, x, inst3.distortion(2).delta, (*d_check)[1],
                         "phi2");
        check_distortion(j, {a1, a2, a3, "Y3"}, x, inst3.distortion(3).delta, (*d_check)[2],
                         "phi3");
    }
    double i11 = cond_mutual_info(j, x, {a1}, {"Y1"});
    double i12 = cond_mutual_info(j, x, {a1}, {"Y2"});
    double i13 = cond_mutual_info(j, x, {a1}, {"Y3"});
    double i22 = cond_mutual_info(j, x, {a2}, {a1, "Y2"});
    double i23 = cond_mutual_info(j, x, {a2}, {a1, "Y3"});
    double i3 = cond_mutual_info(j, x, {a3}, {a1, a2, "Y3"});

    RegionCorner c;
    c.r1 = i11;
    c.r12 = std::max(i11, i12) + i22;
    c.r123 = std::max({i11, i12, i13}) + std::max(i22, i23) + i3;
    return c;
}

RegionCorner sr_degraded_corner(const SourceInstance& inst3, double d1, double d2, double d3,
                                const SolveOptions& opts) {
    const std::vector<std::string>& x = inst3.x_axes;
    double res = std::max(markov_residual(inst3.joint, x, {"Y3"}, {"Y2", "Y1"}),
                          markov_residual(inst3.joint, join(x, {"Y3"}), {"Y2"}, {"Y1"}));
    if (res > 1e-9) throw NotDegraded("side information is not a degraded chain");

    if (inst3.psi_present(1) && inst3.psi_present(2) && d1 <= kCheckTol && d2 <= kCheckTol) {
        JointPMF base = with_xtilde(inst3, 2, nullptr);
        base = with_xtilde(inst3, 1, &base);
        double h1 = cond_entropy(base, {xtilde_name(1)}, {"Y1"});
        double h2 = cond_entropy(base, {xtilde_name(2)}, {xtilde_name(1), "Y2"});
        double sp = sprime(inst3, d3, opts).bits;
        return RegionCorner{h1, h1 + h2, h1 + h2 + sp};
    }

    // General case: minimize the total sum rate over one flattened (A1,A2,A3)
    // channel and report the thresholds at the winning witness.
    const std::size_t xc = inst3.x_card();
    const std::size_t ca = opts.cap_a ? opts.cap_a : xc + 1;
    const std::size_t cb = opts.cap_b ? opts.cap_b : xc + 1;
    const std::size_t cc = opts.cap_c ? opts.cap_c : xc + 1;
    std::vector<std::array<std::size_t, 3>> combos{
        {1, 1, 1}, {ca, 1, 1}, {1, cb, 1}, {1, 1, cc}, {ca, cb, 1}, {ca, cb, cc}};
    std::sort(combos.begin(), combos.end());
    combos.erase(std::unique(combos.begin(), combos.end()), combos.end());

    bool found = false;
    RegionCorner best;
    double best_total = 0.0;
    for (const auto& dims3 : combos) {
        const std::vector<std::size_t> dims{dims3[0], dims3[1], dims3[2]};
        const std::size_t w = dims[0] * dims[1] * dims[2];
        auto p1 = component_proj(dims, {0});
        auto p12 = component_proj(dims, {0, 1});

        ChannelObjective o1(inst3.joint, x, w);
        o1.add_cmi_term(+1.0, x, {"Y1"}, p1);
        ChannelObjective o2(inst3.joint, x, w);
        // I(X;A2|A1,Y2)
        o2.add_entropy_term(+1.0, {"Y2"}, p12);
        o2.add_entropy_term(+1.0, join(x, {"Y2"}), p1);
        o2.add_entropy_term(-1.0, join(x, {"Y2"}), p12);
        o2.add_entropy_term(-1.0, {"Y2"}, p1);
        ChannelObjective o3(inst3.joint, x, w);
        // I(X;A3|A1,A2,Y3)
        o3.add_entropy_term(+1.0, {"Y3"}, identity_proj(w));
        o3.add_entropy_term(+1.0, join(x, {"Y3"}), p12);
        o3.add_entropy_term(-1.0, join(x, {"Y3"}), identity_proj(w));
        o3.add_entropy_term(-1.0, {"Y3"}, p12);

        GreedyDistortion g1(inst3.joint, x, w, p1, {"Y1"}, x, inst3.distortion(1).delta);
        GreedyDistortion g2(inst3.joint, x, w, p12, {"Y2"}, x, inst3.distortion(2).delta);
        GreedyDistortion g3(inst3.joint, x, w, identity_proj(w), {"Y3"}, x,
                            inst3.distortion(3).delta);

        Objective o;
        o.value = [&](std::span<const double> p) {
            return o1.value(p) + o2.value(p) + o3.value(p);
        };
        o.gradient = [&](std::span<const double> p, std::span<double> g) {
            o1.gradient(p, g);
            std::vector<double> tmp(g.size());
            o2.gradient(p, tmp);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
            o3.gradient(p, tmp);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
        };
        o.violation = [&](std::span<const double> p) {
            return std::max(0.0, g1.expected(p) - d1) + std::max(0.0, g2.expected(p) - d2) +
                   std::max(0.0, g3.expected(p) - d3);
        };
        o.violation_gradient = [&](std::span<const double> p, std::span<double> g) {
            std::fill(g.begin(), g.end(), 0.0);
            std::vector<double> tmp(g.size());
            for (auto* gd : {&g1, &g2, &g3}) {
                double tgt = gd == &g1 ? d1 : (gd == &g2 ? d2 : d3);
                if (gd->expected(p) > tgt) {
                    gd->gradient(p, tmp);
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] += tmp[i];
                }
            }
        };

        OptResult r = minimize(o1.space(), o, opts.opt);
        if (r.violation > kDistortionTol) continue;
        double v1 = o1.value(r.point), v2 = o2.value(r.point), v3 = o3.value(r.point);
        if (!found || v1 + v2 + v3 < best_total) {
            found = true;
            best_total = v1 + v2 + v3;
            best = RegionCorner{v1, v1 + v2, v1 + v2 + v3};
        }
    }
    if (!found) throw InfeasibleDistortion("no feasible auxiliary system at the given distortions");
    return best;
}

SrOuterResult sr_outer_bound(const SourceInstance& inst3, double d3, const SolveOptions& opts) {
    JointPMF base = with_xtilde(inst3, 2, nullptr);
    base = with_xtilde(inst3, 1, &base);
    const std::string xt1 = xtilde_name(1), xt2 = xtilde_name(2);

    SrOuterResult out;
    double h1 = cond_entropy(base, {xt1}, {"Y1"});
    double h2 = cond_entropy(base, {xt2}, {xt1, "Y2"});
    out.sprime_bits = sprime(inst3, d3, opts).bits;

    ClnOptions co;
    co.max_cardinality = inst3.x_card();
    co.tolerance = opts.tolerance;
    co.opt = opts.opt;
    out.cln2 = cln_margin(base, inst3.x_axes, {xt1}, co);

    ClnOptions co3 = co;
    co3.y1 = "Y2";
    co3.y2 = "Y3";
    out.cln3 = cln_margin(base, inst3.x_axes, {xt1, xt2}, co3);

    out.r1 = h1;
    out.r12 = h1 + h2 + out.cln2.margin_bits;
    out.r123 = h1 + h2 + out.sprime_bits + out.cln2.margin_bits + out.cln3.margin_bits;
    return out;
}

Theorem5Result theorem5_region(const SourceInstance& inst3, double d3,
                               const SolveOptions& opts) {
    JointPMF base = with_xtilde(inst3, 2, nullptr);
    base = with_xtilde(inst3, 1, &base);
    const std::string xt1 = xtilde_name(1), xt2 = xtilde_name(2);

    Theorem5Result t;
    t.outer = sr_outer_bound(inst3, d3, opts);

    double h11 = cond_entropy(base, {xt1}, {"Y1"});
    double h12 = cond_entropy(base, {xt1}, {"Y2"});
    double h13 = cond_entropy(base, {xt1}, {"Y3"});
    double h22 = cond_entropy(base, {xt2}, {xt1, "Y2"});
    double h23 = cond_entropy(base, {xt2}, {xt1, "Y3"});
    t.entropy2_ok = h11 >= std::max(h12, h13) - opts.tolerance;
    t.entropy3_ok = h22 >= h23 - opts.tolerance;

    t.conditions_met = t.entropy2_ok && t.entropy3_ok &&
                       t.outer.cln2.verdict == ClnStatus::CLN &&
                       t.outer.cln3.verdict == ClnStatus::CLN;
    t.corner = RegionCorner{h11, h11 + h22, h11 + h22 + t.outer.sprime_bits};
    return t;
}

RatePair scalable_inner_eval(const SourceInstance& inst2, const JointPMF& j,
                             const std::array<std::string, 3>& aux,
                             const std::optional<std::array<double, 2>>& d_check) {
    const std::vector<std::string>& x = inst2.x_axes;
    const std::string &a12 = aux[0], &a1 = aux[1], &a2 = aux[2];
    if (d_check) {
        check_distortion(j, {a12, a1, "Y1"}, x, inst2.distortion(1).delta, (*d_check)[0],
                         "phi1");
        check_distortion(j, {a12, a2, "Y2"}, x, inst2.distortion(2).delta, (*d_check)[1],
                         "phi2");
    }
    RatePair r;
    r.r1 = cond_mutual_info(j, x, {a12, a1}, {"Y1"});
    r.r12 = std::max(cond_mutual_info(j, x, {a12}, {"Y1"}),
                     cond_mutual_info(j, x, {a12}, {"Y2"})) +
            cond_mutual_info(j, x, {a1}, {a12, "Y1"}) +
            cond_mutual_info(j, x, {a2}, {a12, "Y2"});
    return r;
}

namespace {

/// ψ2 = ψ' ∘ ψ1 for some map ψ' iff ψ1's fibers refine ψ2's.
bool composes_through(const std::vector<std::size_t>& psi1,
                      const std::vector<std::size_t>& psi2) {
    for (std::size_t x = 0; x < psi1.size(); ++x)
        for (std::size_t y = x + 1; y < psi1.size(); ++y)
            if (psi1[x] == psi1[y] && psi2[x] != psi2[y]) return false;
    return true;
}

} // namespace

Theorem6Result theorem6_region(const SourceInstance& inst2, const SolveOptions& opts) {
    if (!inst2.psi_present(1) || !inst2.psi_present(2))
        throw PsiMissing("theorem6_region needs deterministic delta1 and delta2");
    const auto& t1 = inst2.distortion(1).psi_table;
    const auto& t2 = inst2.distortion(2).psi_table;
    bool rel_i = composes_through(t1, t2);  // delta2 degraded version of delta1
    bool rel_ii = composes_through(t2, t1); // delta1 degraded version of delta2
    if (!rel_i && !rel_ii)
        throw NoDegradationRelation("psi maps are not related by composition");

    JointPMF base = with_xtilde(inst2, 2, nullptr);
    base = with_xtilde(inst2, 1, &base);
    const std::string xt1 = xtilde_name(1), xt2 = xtilde_name(2);

    Theorem6Result r;
    if (rel_i) {
        r.which = Theorem6Case::CaseI;
        double ha = cond_entropy(base, {xt2}, {"Y1"});
        double hb = cond_entropy(base, {xt2}, {"Y2"});
        r.h_gap = hb - ha;
        ClnOptions co;
        co.max_cardinality = inst2.x_card();
        co.tolerance = opts.tolerance;
        co.opt = opts.opt;
        co.y1 = "Y2"; // tests CLN(Y1 >= Y2 | X~2)
        co.y2 = "Y1";
        r.cln = cln_margin(base, inst2.x_axes, {xt2}, co);
        r.corner = RatePair{cond_entropy(base, {xt1}, {"Y1"}),
                            hb + cond_entropy(base, {xt1}, {xt2, "Y1"})};
        r.conditions_met =
            (r.h_gap >= -opts.tolerance) && (r.cln.verdict == ClnStatus::CLN);
        if (r.conditions_met || !rel_ii) return r;
    }
    r = Theorem6Result{};
    r.which = Theorem6Case::CaseII;
    double ha = cond_entropy(base, {xt1}, {"Y1"});
    double hb = cond_entropy(base, {xt1}, {"Y2"});
    r.h_gap = hb - ha;
    r.corner = RatePair{ha, cond_entropy(base, {xt2}, {"Y2"})};
    r.conditions_met = r.h_gap >= -opts.tolerance;
    return r;
}

RegionCorner tcg_eval(const SourceInstance& inst3, const JointPMF& j,
                      const std::array<std::string, 7>& u,
                      const std::optional<std::array<double, 3>>& d_check) {
    const std::vector<std::string>& x = inst3.x_axes;
    const std::string &u123 = u[0], &u12 = u[1], &u13 = u[2], &u23 = u[3], &u1 = u[4],
                      &u2 = u[5], &u3 = u[6];
    if (d_check) {
        check_distortion(j, {u123, u12, u13, u1, "Y1"}, x, inst3.distortion(1).delta,
                         (*d_check)[0], "phi1");
        check_distortion(j, {u123, u12, u23, u2, "Y2"}, x, inst3.distortion(2).delta,
                         (*d_check)[1], "phi2");
        check_distortion(j, {u123, u13, u23, u3, "Y3"}, x, inst3.distortion(3).delta,
                         (*d_check)[2], "phi3");
    }

    double t123 = mutual_info(j, x, {u123});
    double c123_y1 = mutual_info(j, {u123}, {"Y1"});
    double c123_y2 = mutual_info(j, {u123}, {"Y2"});
    double c123_y3 = mutual_info(j, {u123}, {"Y3"});

    double t12 = cond_mutual_info(j, x, {u12}, {u123});
    double c12_y1 = cond_mutual_info(j, {u12}, {"Y1"}, {u123});
    double c12_y2 = cond_mutual_info(j, {u12}, {"Y2"}, {u123});

    double t13 = cond_mutual_info(j, join(x, {u12}), {u13}, {u123});
    double c13_1 = cond_mutual_info(j, {u13}, {u12, "Y1"}, {u123});
    double c13_3 = cond_mutual_info(j, {u13}, {"Y3"}, {u123});

    double t23 = cond_mutual_info(j, join(x, {u12, u13}), {u23}, {u123});
    double c23_2 = cond_mutual_info(j, {u23}, {u12, "Y2"}, {u123});
    double c23_3 = cond_mutual_info(j, {u23}, {u13, "Y3"}, {u123});

    double t1 = cond_mutual_info(j, x, {u1}, {u123, u12, u13});
    double c1 = cond_mutual_info(j, {u1}, {"Y1"}, {u123, u12, u13});
    double t2 = cond_mutual_info(j, x, {u2}, {u123, u12, u23});
    double c2 = cond_mutual_info(j, {u2}, {"Y2"}, {u123, u12, u23});
    double t3 = cond_mutual_info(j, x, {u3}, {u123, u13, u23});
    double c3 = cond_mutual_info(j, {u3}, {"Y3"}, {u123, u13, u23});

    RegionCorner r;
    r.r1 = (t123 - c123_y1) + (t12 - c12_y1) + (t13 - c13_1) + (t1 - c1);
    r.r12 = (t123 - std::min(c123_y1, c123_y2)) + (t12 - std::min(c12_y1, c12_y2)) +
            (t13 - c13_1) + (t23 - c23_2) + (t1 - c1) + (t2 - c2);
    r.r123 = (t123 - std::min({c123_y1, c123_y2, c123_y3})) +
             (t12 - std::min(c12_y1, c12_y2)) + (t13 - std::min(c13_1, c13_3)) +
             (t23 - std::min(c23_2, c23_3)) + (t1 - c1) + (t2 - c2) + (t3 - c3);
    return r;
}

} // namespace sird
