#include "sird/identity_lab.hpp"

#include <cmath>
#include <set>

#include "sird/info.hpp"

namespace sird {

namespace {

std::string at(const std::string& prefix, std::size_t t) {
    return prefix + "." + std::to_string(t);
}

std::vector<std::string> span_names(const std::string& prefix, std::size_t lo, std::size_t hi) {
    std::vector<std::string> v;
    for (std::size_t t = lo; t <= hi; ++t) v.push_back(at(prefix, t));
    return v;
}

std::size_t detect_n(const JointPMF& j, const std::string& prefix) {
    std::size_t n = 0;
    while (j.has_axis(at(prefix, n + 1))) ++n;
    if (n == 0) throw BadAxisLabeling("no axes with prefix " + prefix + ".<t>");
    return n;
}

std::size_t block_length(const JointPMF& j, const std::string& a_prefix,
                         const std::string& b_prefix) {
    std::size_t n = detect_n(j, a_prefix);
    if (detect_n(j, b_prefix) != n)
        throw BadAxisLabeling("A and B blocks have different lengths");
    if (j.axes().size() != 2 * n)
        throw BadAxisLabeling("joint has axes outside the A and B blocks");
    return n;
}

} // namespace

double telescoping_residual(const JointPMF& j, const std::string& a_prefix,
                            const std::string& b_prefix) {
    const std::size_t n = block_length(j, a_prefix, b_prefix);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        lhs += mutual_info(j, span_names(a_prefix, 1, i), span_names(b_prefix, i + 1, n));
        rhs += mutual_info(j, span_names(a_prefix, 1, i - 1), span_names(b_prefix, i, n));
    }
    return std::abs(lhs - rhs);
}

double csiszar_residual(const JointPMF& j, const std::string& a_prefix,
                        const std::string& b_prefix) {
    const std::size_t n = block_length(j, a_prefix, b_prefix);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        lhs += cond_mutual_info(j, {at(a_prefix, i)}, span_names(b_prefix, i + 1, n),
                                span_names(a_prefix, 1, i - 1));
        rhs += cond_mutual_info(j, {at(b_prefix, i)}, span_names(a_prefix, 1, i - 1),
                                span_names(b_prefix, i + 1, n));
    }
    return std::abs(lhs - rhs);
}

LetterizationReport single_letterize(const JointPMF& base, const Channel& j_channel,
                                     std::size_t n, std::size_t cell_budget) {
    for (const char* name : {"R", "S1", "S2", "T", "L"})
        (void)base.axis_index(name);

    double cells = double(j_channel.output_axis().size());
    for (std::size_t t = 0; t < n; ++t) cells *= double(base.cell_count());
    if (cells > double(cell_budget))
        throw BudgetExceeded("single_letterize: tensor budget exceeded");

    std::set<std::string> want;
    for (std::size_t t = 1; t <= n; ++t) {
        want.insert(at("R", t));
        want.insert(at("L", t));
    }
    std::set<std::string> got;
    for (const auto& a : j_channel.input_axes()) got.insert(a.name);
    if (got != want)
        throw ChannelAxisMismatch("single_letterize: J must be drawn from (R^n, L^n) exactly");

    JointPMF big = base.iid_extension(n, cell_budget).attach_auxiliary(j_channel);
    const std::string J = j_channel.output_axis().name;

    LetterizationReport rep;
    rep.n = n;
    rep.lhs_bits = cond_mutual_info(big, {J}, span_names("S2", 1, n), span_names("L", 1, n)) -
                   cond_mutual_info(big, {J}, span_names("S1", 1, n), span_names("L", 1, n));

    // Time-shared auxiliary: disjoint union over i of
    // W_i = (J, S1_{i+1}^n, S2_1^{i-1}, L_1^{i-1}, L_{i+1}^n); the union tag
    // plays the role of the uniform, independent time index Q.
    const std::size_t jc = j_channel.output_axis().size();
    const std::size_t s1c = base.axis("S1").size();
    const std::size_t s2c = base.axis("S2").size();
    const std::size_t lc = base.axis("L").size();

    std::vector<std::size_t> offset(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t wi = jc;
        for (std::size_t t = i; t < n; ++t) wi *= s1c;
        for (std::size_t t = 1; t < i; ++t) wi *= s2c;
        for (std::size_t t = 1; t <= n; ++t)
            if (t != i) wi *= lc;
        offset[i] = offset[i - 1] + wi;
    }
    const std::size_t w_total = offset[n];

    std::vector<Alphabet> axes{Alphabet::indexed("Wt", w_total), base.axis("R"),
                               base.axis("S1"), base.axis("S2"), base.axis("T"),
                               base.axis("L")};
    std::size_t coord_total = 1;
    for (std::size_t k = 1; k < axes.size(); ++k) coord_total *= axes[k].size();
    std::vector<double> pr(w_total * coord_total, 0.0);

    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::string> keep{J};
        for (const auto& s : span_names("S1", i + 1, n)) keep.push_back(s);
        for (const auto& s : span_names("S2", 1, i - 1)) keep.push_back(s);
        for (const auto& s : span_names("L", 1, i - 1)) keep.push_back(s);
        for (const auto& s : span_names("L", i + 1, n)) keep.push_back(s);
        const std::size_t w_axes = keep.size();
        keep.push_back(at("R", i));
        keep.push_back(at("S1", i));
        keep.push_back(at("S2", i));
        keep.push_back(at("T", i));
        keep.push_back(at("L", i));

        JointPMF m = big.marginalize(keep);
        std::vector<std::size_t> multi(keep.size());
        for (std::size_t f = 0; f < m.cell_count(); ++f) {
            if (m.probs()[f] == 0.0) continue;
            m.unflatten(f, multi);
            std::size_t w = 0;
            for (std::size_t k = 0; k < w_axes; ++k)
                w = w * m.axes()[k].size() + multi[k];
            std::size_t coord = 0;
            for (std::size_t k = w_axes; k < keep.size(); ++k)
                coord = coord * m.axes()[k].size() + multi[k];
            pr[(offset[i - 1] + w) * coord_total + coord] += m.probs()[f] / double(n);
        }
    }

    JointPMF single(std::move(axes), std::move(pr), 1e-6);
    double per = cond_mutual_info(single, {"Wt"}, {"S2"}, {"L"}) -
                 cond_mutual_info(single, {"Wt"}, {"S1"}, {"L"});
    rep.rhs_bits = double(n) * per;
    rep.residual = std::abs(rep.lhs_bits - rep.rhs_bits);
    rep.markov_residual = markov_residual(single, {"Wt"}, {"R", "L"}, {"S1", "S2", "T"});
    rep.w_alphabet_size = w_total;
    return rep;
}

} // namespace sird
