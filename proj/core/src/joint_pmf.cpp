#include "sird/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sird {

Alphabet Alphabet::indexed(std::string name, std::size_t n) {
    Alphabet a;
    a.name = std::move(name);
    a.symbols.reserve(n);
    for (std::size_t i = 0; i < n; ++i) a.symbols.push_back(std::to_string(i));
    return a;
}

DeterministicMap::DeterministicMap(Alphabet dom, Alphabet cod, std::vector<std::size_t> tbl)
    : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(tbl)) {
    if (table.size() != domain.size())
        throw ValidationError("DeterministicMap: table size does not match domain");
    for (std::size_t v : table)
        if (v >= codomain.size())
            throw ValidationError("DeterministicMap: image out of codomain range");
}

namespace {

void validate_axes(const std::vector<Alphabet>& axes) {
    std::set<std::string> names;
    for (const auto& a : axes) {
        if (a.size() == 0) throw ValidationError("empty alphabet: " + a.name);
        if (!names.insert(a.name).second) throw DuplicateAxis("duplicate axis: " + a.name);
        std::set<std::string> syms(a.symbols.begin(), a.symbols.end());
        if (syms.size() != a.symbols.size())
            throw ValidationError("duplicate symbol in alphabet: " + a.name);
    }
}

std::size_t total_cells(const std::vector<Alphabet>& axes) {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

} // namespace

JointPMF::JointPMF(std::vector<Alphabet> axes, std::vector<double> probs, double tol)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
    validate_axes(axes_);
    if (probs_.size() != total_cells(axes_))
        throw ValidationError("JointPMF: tensor size does not match axes");
    double sum = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw NegativeProbability("JointPMF: negative entry");
        sum += p;
    }
    norm_residual_ = std::abs(sum - 1.0);
    if (norm_residual_ > tol) {
        std::ostringstream os;
        os << "JointPMF: entries sum to " << sum;
        throw SumNotOne(os.str());
    }
    init_strides();
}

void JointPMF::init_strides() {
    strides_.assign(axes_.size(), 1);
    for (std::size_t i = axes_.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * axes_[i].size();
}

std::size_t JointPMF::axis_index(const std::string& name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return i;
    throw UnknownVariable("unknown variable: " + name);
}

bool JointPMF::has_axis(const std::string& name) const {
    return std::any_of(axes_.begin(), axes_.end(),
                       [&](const Alphabet& a) { return a.name == name; });
}

std::size_t JointPMF::flat_index(std::span<const std::size_t> multi) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) idx += multi[i] * strides_[i];
    return idx;
}

void JointPMF::unflatten(std::size_t flat, std::span<std::size_t> multi) const {
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        multi[i] = flat / strides_[i];
        flat %= strides_[i];
    }
}

std::vector<std::size_t> JointPMF::resolve(const std::vector<std::string>& names) const {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) throw DuplicateAxis("repeated variable: " + n);
        idx.push_back(axis_index(n));
    }
    return idx;
}

JointPMF JointPMF::marginalize(const std::vector<std::string>& keep) const {
    auto kept = resolve(keep);
    std::vector<Alphabet> out_axes;
    out_axes.reserve(kept.size());
    for (std::size_t k : kept) out_axes.push_back(axes_[k]);

    std::vector<std::size_t> out_strides(kept.size(), 1);
    for (std::size_t i = kept.size(); i-- > 1;)
        out_strides[i - 1] = out_strides[i] * out_axes[i].size();

    std::vector<double> out(total_cells(out_axes), 0.0);
    std::vector<std::size_t> multi(axes_.size());
    for (std::size_t f = 0; f < probs_.size(); ++f) {
        if (probs_[f] == 0.0) continue;
        unflatten(f, multi);
        std::size_t o = 0;
        for (std::size_t i = 0; i < kept.size(); ++i) o += multi[kept[i]] * out_strides[i];
        out[o] += probs_[f];
    }
    // Marginal sums inherit the parent's normalization; skip re-validation noise.
    JointPMF r(std::move(out_axes), std::move(out), 1e-6);
    return r;
}

Channel JointPMF::conditional(const std::vector<std::string>& target,
                              const std::vector<std::string>& given) const {
    auto tgt = resolve(target);
    auto cnd = resolve(given);
    for (std::size_t t : tgt)
        for (std::size_t c : cnd)
            if (t == c) throw OverlappingSets("conditional: target and given overlap");

    std::vector<Alphabet> in_axes;
    for (std::size_t c : cnd) in_axes.push_back(axes_[c]);

    Alphabet out_axis;
    if (tgt.size() == 1) {
        out_axis = axes_[tgt[0]];
    } else {
        // Flatten multiple targets into a product alphabet.
        std::string nm = "(";
        for (std::size_t i = 0; i < target.size(); ++i)
            nm += (i ? "," : "") + target[i];
        nm += ")";
        std::size_t n = 1;
        for (std::size_t t : tgt) n *= axes_[t].size();
        out_axis = Alphabet::indexed(nm, n);
    }

    const std::size_t out_n = out_axis.size();
    std::size_t slices = 1;
    for (const auto& a : in_axes) slices *= a.size();

    std::vector<double> cond(slices * out_n, 0.0);
    std::vector<std::size_t> multi(axes_.size());
    for (std::size_t f = 0; f < probs_.size(); ++f) {
        if (probs_[f] == 0.0) continue;
        unflatten(f, multi);
        std::size_t slice = 0;
        for (std::size_t c : cnd) slice = slice * axes_[c].size() + multi[c];
        std::size_t out = 0;
        for (std::size_t t : tgt) out = out * axes_[t].size() + multi[t];
        cond[slice * out_n + out] += probs_[f];
    }

    std::vector<std::size_t> flagged;
    for (std::size_t s = 0; s < slices; ++s) {
        double mass = 0.0;
        for (std::size_t o = 0; o < out_n; ++o) mass += cond[s * out_n + o];
        if (mass <= 0.0) {
            for (std::size_t o = 0; o < out_n; ++o) cond[s * out_n + o] = 1.0 / double(out_n);
            flagged.push_back(s);
        } else {
            for (std::size_t o = 0; o < out_n; ++o) cond[s * out_n + o] /= mass;
        }
    }

    Channel ch(std::move(in_axes), std::move(out_axis), std::move(cond), 1e-6);
    ch.flagged_ = std::move(flagged);
    return ch;
}

JointPMF JointPMF::attach_auxiliary(const Channel& ch) const {
    if (has_axis(ch.output_axis().name))
        throw AxisCollision("attach_auxiliary: axis exists: " + ch.output_axis().name);
    std::vector<std::size_t> in_idx;
    for (const auto& a : ch.input_axes()) {
        std::size_t k = axis_index(a.name);
        if (axes_[k].size() != a.size())
            throw ChannelAxisMismatch("attach_auxiliary: alphabet mismatch on " + a.name);
        in_idx.push_back(k);
    }
    const std::size_t out_n = ch.output_axis().size();
    std::vector<Alphabet> out_axes = axes_;
    out_axes.push_back(ch.output_axis());

    std::vector<double> out(probs_.size() * out_n, 0.0);
    std::vector<std::size_t> multi(axes_.size());
    for (std::size_t f = 0; f < probs_.size(); ++f) {
        unflatten(f, multi);
        std::size_t slice = 0;
        for (std::size_t i = 0; i < in_idx.size(); ++i)
            slice = slice * axes_[in_idx[i]].size() + multi[in_idx[i]];
        for (std::size_t w = 0; w < out_n; ++w)
            out[f * out_n + w] = probs_[f] * ch.probs()[slice * out_n + w];
    }
    return JointPMF(std::move(out_axes), std::move(out), 1e-6);
}

JointPMF renamed_all_with_index(const JointPMF& j, std::size_t t);

JointPMF JointPMF::iid_extension(std::size_t n, std::size_t cell_budget) const {
    if (n == 0) throw OutOfRange("iid_extension: n must be positive");
    double cells = 1.0;
    for (std::size_t i = 0; i < n; ++i) cells *= double(probs_.size());
    if (cells > double(cell_budget))
        throw BudgetExceeded("iid_extension: tensor budget exceeded");

    JointPMF ext = renamed_all_with_index(*this, 1);
    for (std::size_t t = 2; t <= n; ++t)
        ext = product(ext, renamed_all_with_index(*this, t));
    return ext;
}

JointPMF JointPMF::derive_variable(const DeterministicMap& map, const std::string& new_name) const {
    return derive_grouped({map.domain.name}, Alphabet{new_name, map.codomain.symbols}, map.table);
}

JointPMF JointPMF::derive_grouped(const std::vector<std::string>& group,
                                  const Alphabet& codomain,
                                  const std::vector<std::size_t>& table) const {
    if (has_axis(codomain.name))
        throw AxisCollision("derive: axis exists: " + codomain.name);
    auto grp = resolve(group);
    std::size_t dom_n = 1;
    for (std::size_t g : grp) dom_n *= axes_[g].size();
    if (table.size() != dom_n)
        throw ValidationError("derive: table size does not match group");

    const std::size_t out_n = codomain.size();
    std::vector<Alphabet> out_axes = axes_;
    out_axes.push_back(codomain);
    std::vector<double> out(probs_.size() * out_n, 0.0);
    std::vector<std::size_t> multi(axes_.size());
    for (std::size_t f = 0; f < probs_.size(); ++f) {
        unflatten(f, multi);
        std::size_t d = 0;
        for (std::size_t g : grp) d = d * axes_[g].size() + multi[g];
        out[f * out_n + table[d]] = probs_[f];
    }
    return JointPMF(std::move(out_axes), std::move(out), 1e-6);
}

JointPMF JointPMF::renamed(const std::string& old_name, const std::string& new_name) const {
    std::vector<Alphabet> out_axes = axes_;
    out_axes[axis_index(old_name)].name = new_name;
    return JointPMF(out_axes, probs_, 1e-6);
}

JointPMF JointPMF::product(const JointPMF& a, const JointPMF& b) {
    std::vector<Alphabet> axes = a.axes_;
    for (const auto& ax : b.axes_) {
        if (a.has_axis(ax.name)) throw AxisCollision("product: axis exists: " + ax.name);
        axes.push_back(ax);
    }
    std::vector<double> out(a.probs_.size() * b.probs_.size());
    for (std::size_t i = 0; i < a.probs_.size(); ++i)
        for (std::size_t k = 0; k < b.probs_.size(); ++k)
            out[i * b.probs_.size() + k] = a.probs_[i] * b.probs_[k];
    return JointPMF(std::move(axes), std::move(out), 1e-6);
}

JointPMF renamed_all_with_index(const JointPMF& j, std::size_t t) {
    std::vector<Alphabet> axes = j.axes();
    for (auto& a : axes) a.name = a.name + "." + std::to_string(t);
    return JointPMF(std::move(axes), std::vector<double>(j.probs().begin(), j.probs().end()),
                    1e-6);
}

Channel::Channel(std::vector<Alphabet> input_axes, Alphabet output_axis,
                 std::vector<double> probs, double tol)
    : inputs_(std::move(input_axes)), output_(std::move(output_axis)), probs_(std::move(probs)) {
    std::size_t slices = 1;
    for (const auto& a : inputs_) slices *= a.size();
    const std::size_t out_n = output_.size();
    if (probs_.size() != slices * out_n)
        throw ValidationError("Channel: tensor size mismatch");
    for (std::size_t s = 0; s < slices; ++s) {
        double sum = 0.0;
        for (std::size_t o = 0; o < out_n; ++o) {
            double p = probs_[s * out_n + o];
            if (p < 0.0) throw NegativeProbability("Channel: negative entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol)
            throw SumNotOne("Channel: conditional slice does not sum to 1");
    }
}

std::size_t Channel::slice_count() const {
    std::size_t s = 1;
    for (const auto& a : inputs_) s *= a.size();
    return s;
}

double Channel::at(std::span<const std::size_t> input_multi, std::size_t out) const {
    std::size_t slice = 0;
    for (std::size_t i = 0; i < inputs_.size(); ++i)
        slice = slice * inputs_[i].size() + input_multi[i];
    return probs_[slice * output_.size() + out];
}

Channel Channel::identity(const Alphabet& in, std::string out_name) {
    const std::size_t n = in.size();
    std::vector<double> p(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
    return Channel({in}, Alphabet{std::move(out_name), in.symbols}, std::move(p));
}

Channel Channel::constant(const Alphabet& in, std::string out_name) {
    std::vector<double> p(in.size(), 1.0);
    return Channel({in}, Alphabet{std::move(out_name), {"*"}}, std::move(p));
}

Channel Channel::from_map(const DeterministicMap& map, std::string out_name) {
    const std::size_t n = map.domain.size();
    const std::size_t m = map.codomain.size();
    std::vector<double> p(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) p[i * m + map.table[i]] = 1.0;
    return Channel({map.domain}, Alphabet{std::move(out_name), map.codomain.symbols},
                   std::move(p));
}

Channel Channel::bsc(const Alphabet& in, std::string out_name, double crossover) {
    if (in.size() != 2) throw ValidationError("bsc: input alphabet must be binary");
    if (crossover < 0.0 || crossover > 1.0) throw OutOfRange("bsc: crossover out of [0,1]");
    std::vector<double> p = {1.0 - crossover, crossover, crossover, 1.0 - crossover};
    return Channel({in}, Alphabet{std::move(out_name), in.symbols}, std::move(p));
}

Channel Channel::bec(const Alphabet& in, std::string out_name, double erasure) {
    if (in.size() != 2) throw ValidationError("bec: input alphabet must be binary");
    if (erasure < 0.0 || erasure > 1.0) throw OutOfRange("bec: erasure out of [0,1]");
    std::vector<std::string> out_syms = in.symbols;
    out_syms.push_back("e");
    std::vector<double> p = {1.0 - erasure, 0.0, erasure, 0.0, 1.0 - erasure, erasure};
    return Channel({in}, Alphabet{std::move(out_name), std::move(out_syms)}, std::move(p));
}

JointPMF build_joint(std::vector<Alphabet> axes, std::vector<double> probs) {
    return JointPMF(std::move(axes), std::move(probs));
}

JointPMF uniform_joint(std::vector<Alphabet> axes) {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return JointPMF(std::move(axes), std::vector<double>(n, 1.0 / double(n)));
}

JointPMF independent_joint(
    const std::vector<std::pair<Alphabet, std::vector<double>>>& marginals) {
    if (marginals.empty()) throw ValidationError("independent_joint: no variables");
    auto make_single = [](const std::pair<Alphabet, std::vector<double>>& m) {
        return JointPMF({m.first}, m.second);
    };
    JointPMF j = make_single(marginals[0]);
    for (std::size_t i = 1; i < marginals.size(); ++i)
        j = JointPMF::product(j, make_single(marginals[i]));
    return j;
}

double markov_residual(const JointPMF& j,
                       const std::vector<std::string>& a,
                       const std::vector<std::string>& b,
                       const std::vector<std::string>& c) {
    std::vector<std::string> all = a;
    all.insert(all.end(), b.begin(), b.end());
    all.insert(all.end(), c.begin(), c.end());
    JointPMF abc = j.marginalize(all);

    std::vector<std::string> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    std::vector<std::string> bc = b;
    bc.insert(bc.end(), c.begin(), c.end());

    JointPMF p_ab = abc.marginalize(ab);
    JointPMF p_bc = abc.marginalize(bc);
    JointPMF p_b = abc.marginalize(b);

    const std::size_t na = a.size(), nb = b.size(), nc = c.size();
    std::vector<std::size_t> multi(na + nb + nc);
    std::vector<std::size_t> mab(na + nb), mbc(nb + nc), mb(nb);
    double worst = 0.0;
    for (std::size_t f = 0; f < abc.cell_count(); ++f) {
        abc.unflatten(f, multi);
        for (std::size_t i = 0; i < na + nb; ++i) mab[i] = multi[i];
        for (std::size_t i = 0; i < nb + nc; ++i) mbc[i] = multi[na + i];
        for (std::size_t i = 0; i < nb; ++i) mb[i] = multi[na + i];
        double pb = p_b.at(mb);
        double expected = 0.0;
        if (pb > 0.0) expected = p_ab.at(mab) * p_bc.at(mbc) / pb;
        worst = std::max(worst, std::abs(abc.probs()[f] - expected));
    }
    return worst;
}

} // namespace sird
