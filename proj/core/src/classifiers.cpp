#include "sird/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sird/channel_objective.hpp"
#include "sird/lp.hpp"

namespace sird {

DegradednessResult stochastic_degradedness(const JointPMF& j,
                                           const std::vector<std::string>& x_axes,
                                           const std::string& y1, const std::string& y2) {
    std::vector<std::string> keep1 = x_axes, keep2 = x_axes;
    keep1.push_back(y1);
    keep2.push_back(y2);
    JointPMF m1 = j.marginalize(keep1);
    JointPMF m2 = j.marginalize(keep2);
    JointPMF mx = j.marginalize(x_axes);

    const std::size_t ny1 = j.axis(y1).size();
    const std::size_t ny2 = j.axis(y2).size();
    const std::size_t nx = mx.cell_count();

    DegradednessResult out;
    Channel c1 = m1.conditional({y1}, x_axes);
    Channel c2 = m2.conditional({y2}, x_axes);
    for (std::size_t x = 0; x < nx; ++x)
        if (mx.probs()[x] <= 0.0) out.dropped_rows.push_back(x);

    // Variables Q[y2][y1], flat y2*ny1+y1.
    // Rows: matching constraints for active x, plus row-sum = 1 for each y2.
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t x = 0; x < nx; ++x) {
        if (mx.probs()[x] <= 0.0) continue;
        for (std::size_t v1 = 0; v1 < ny1; ++v1) {
            std::vector<double> row(ny1 * ny2, 0.0);
            for (std::size_t v2 = 0; v2 < ny2; ++v2)
                row[v2 * ny1 + v1] = c2.probs()[x * ny2 + v2];
            A.push_back(std::move(row));
            b.push_back(c1.probs()[x * ny1 + v1]);
        }
    }
    for (std::size_t v2 = 0; v2 < ny2; ++v2) {
        std::vector<double> row(ny1 * ny2, 0.0);
        for (std::size_t v1 = 0; v1 < ny1; ++v1) row[v2 * ny1 + v1] = 1.0;
        A.push_back(std::move(row));
        b.push_back(1.0);
    }

    LpFeasibility lp = lp_feasible(A, b, 1e-9);
    out.feasible = lp.feasible;
    out.infeasibility = lp.infeasibility;
    if (lp.feasible) {
        // Re-normalize away simplex round-off before handing back a Channel.
        std::vector<double> q = lp.x;
        for (std::size_t v2 = 0; v2 < ny2; ++v2) {
            double s = 0.0;
            for (std::size_t v1 = 0; v1 < ny1; ++v1) s += std::max(q[v2 * ny1 + v1], 0.0);
            for (std::size_t v1 = 0; v1 < ny1; ++v1)
                q[v2 * ny1 + v1] = s > 0.0 ? std::max(q[v2 * ny1 + v1], 0.0) / s : 1.0 / ny1;
        }
        out.witness = Channel({j.axis(y2)}, j.axis(y1), std::move(q));
    }
    return out;
}

namespace {

std::vector<std::string> dedup_union(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
    std::vector<std::string> u = a;
    for (const auto& s : b)
        if (std::find(u.begin(), u.end(), s) == u.end()) u.push_back(s);
    return u;
}

} // namespace

ClnVerdict cln_margin(const JointPMF& j, const std::vector<std::string>& x_axes,
                      const std::vector<std::string>& given, const ClnOptions& opts) {
    const std::vector<std::string> cond = dedup_union(x_axes, given);
    std::size_t l_card = 1;
    for (const auto& n : given) l_card *= j.axis(n).size();
    std::size_t x_card = 1;
    for (const auto& n : x_axes) x_card *= j.axis(n).size();
    const std::size_t cap =
        opts.max_cardinality ? opts.max_cardinality : x_card * l_card + 1;

    ClnVerdict best;
    best.margin_bits = 0.0; // constant W baseline
    bool any_converged = false;
    double prev_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= cap; ++k) {
        ChannelObjective obj(j, cond, k);
        obj.add_cmi_term(+1.0, {opts.y2}, given);
        obj.add_cmi_term(-1.0, {opts.y1}, given);

        Objective o;
        o.value = [&obj](std::span<const double> p) { return obj.value(p); };
        o.gradient = [&obj](std::span<const double> p, std::span<double> g) {
            obj.gradient(p, g);
        };
        OptResult r = minimize(obj.space(), o, opts.opt);

        bool converged = r.diag.winner_from_enumeration ||
                         r.diag.gradient_residual <= 100 * opts.opt.convergence_residual;
        any_converged = any_converged || converged;

        // Search spaces nest, so the best margin cannot increase with k.
        double margin = std::min(r.value, prev_margin);
        prev_margin = std::min(prev_margin, r.value);
        if (margin < best.margin_bits) {
            best.margin_bits = margin;
            best.witness = obj.to_channel(r.point, "W");
            best.diag = r.diag;
        }
        best.searched_cardinality = k;
    }
    if (best.margin_bits > 0.0) best.margin_bits = 0.0;

    if (!any_converged)
        best.verdict = ClnStatus::Inconclusive;
    else if (best.margin_bits >= -opts.tolerance) {
        best.verdict = ClnStatus::CLN;
        best.witness.reset();
    } else {
        best.verdict = ClnStatus::NotCLN;
    }
    return best;
}

ClnVerdict is_less_noisy(const JointPMF& j, const std::vector<std::string>& x_axes,
                         const ClnOptions& opts) {
    return cln_margin(j, x_axes, {}, opts);
}

} // namespace sird
