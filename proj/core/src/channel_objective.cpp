#include "sird/channel_objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sird {

namespace {

constexpr double kLogFloor = 1e-18; // keeps boundary gradients finite
const double kInvLn2 = 1.0 / std::log(2.0);

double neg_plogp_sum(const std::vector<double>& q) {
    double h = 0.0;
    for (double v : q)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

std::vector<std::size_t> cell_group_map(const JointPMF& base,
                                        const std::vector<std::string>& vars,
                                        std::size_t& group_size) {
    std::vector<std::size_t> axis_idx;
    std::vector<std::size_t> dims;
    axis_idx.reserve(vars.size());
    for (const auto& v : vars) {
        axis_idx.push_back(base.axis_index(v));
        dims.push_back(base.axes()[axis_idx.back()].size());
    }
    group_size = 1;
    for (std::size_t d : dims) group_size *= d;

    std::vector<std::size_t> multi(base.axes().size());
    std::vector<std::size_t> gmap(base.cell_count());
    for (std::size_t cell = 0; cell < base.cell_count(); ++cell) {
        base.unflatten(cell, multi);
        std::size_t g = 0;
        for (std::size_t k = 0; k < axis_idx.size(); ++k) g = g * dims[k] + multi[axis_idx[k]];
        gmap[cell] = g;
    }
    return gmap;
}

} // namespace

ChannelObjective::ChannelObjective(JointPMF base, std::vector<std::string> cond_axes,
                                   std::size_t w_dim)
    : base_(std::move(base)), cond_names_(std::move(cond_axes)), w_dim_(w_dim) {
    if (w_dim_ == 0) throw OutOfRange("ChannelObjective: auxiliary alphabet must be non-empty");
    for (const auto& n : cond_names_) cond_axes_.push_back(base_.axis(n));
    std::size_t sc = 1;
    cell_slice_ = cell_group_map(base_, cond_names_, sc);
    slice_count_ = sc;
}

void ChannelObjective::add_entropy_term(double sign, const std::vector<std::string>& vars,
                                        std::optional<std::vector<std::size_t>> w_proj) {
    Term t;
    t.sign = sign;
    std::size_t gvars = 1;
    t.gmap = cell_group_map(base_, vars, gvars);
    if (w_proj) {
        if (w_proj->size() != w_dim_)
            throw OutOfRange("ChannelObjective: projection size does not match |W|");
        t.w_proj = std::move(*w_proj);
        t.w_reduced_dim = 1 + *std::max_element(t.w_proj.begin(), t.w_proj.end());
        t.group_size = gvars * t.w_reduced_dim;
    } else {
        t.group_size = gvars;
        std::vector<double> q(gvars, 0.0);
        auto p = base_.probs();
        for (std::size_t cell = 0; cell < p.size(); ++cell) q[t.gmap[cell]] += p[cell];
        t.constant = neg_plogp_sum(q);
    }
    terms_.push_back(std::move(t));
}

void ChannelObjective::add_cmi_term(double sign, const std::vector<std::string>& b,
                                    const std::vector<std::string>& c,
                                    std::optional<std::vector<std::size_t>> w_proj) {
    auto join = [](std::vector<std::string> x, const std::vector<std::string>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    std::vector<std::size_t> proj = w_proj ? *w_proj : identity_proj(w_dim_);
    // I(W;B|C) = H(W,C) + H(B,C) - H(W,B,C) - H(C)
    add_entropy_term(sign, c, proj);
    add_entropy_term(sign, join(b, c));
    add_entropy_term(-sign, join(b, c), proj);
    add_entropy_term(-sign, c);
}

double ChannelObjective::value(std::span<const double> channel) const {
    auto p = base_.probs();
    double val = 0.0;
    std::vector<double> q;
    for (const auto& t : terms_) {
        if (t.w_proj.empty()) {
            val += t.sign * t.constant;
            continue;
        }
        q.assign(t.group_size, 0.0);
        for (std::size_t cell = 0; cell < p.size(); ++cell) {
            if (p[cell] <= 0.0) continue;
            const double* slice = channel.data() + cell_slice_[cell] * w_dim_;
            const std::size_t gbase = t.gmap[cell] * t.w_reduced_dim;
            for (std::size_t w = 0; w < w_dim_; ++w)
                q[gbase + t.w_proj[w]] += p[cell] * slice[w];
        }
        val += t.sign * neg_plogp_sum(q);
    }
    return val;
}

void ChannelObjective::gradient(std::span<const double> channel, std::span<double> grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    auto p = base_.probs();
    std::vector<double> q;
    for (const auto& t : terms_) {
        if (t.w_proj.empty()) continue;
        q.assign(t.group_size, 0.0);
        for (std::size_t cell = 0; cell < p.size(); ++cell) {
            if (p[cell] <= 0.0) continue;
            const double* slice = channel.data() + cell_slice_[cell] * w_dim_;
            const std::size_t gbase = t.gmap[cell] * t.w_reduced_dim;
            for (std::size_t w = 0; w < w_dim_; ++w)
                q[gbase + t.w_proj[w]] += p[cell] * slice[w];
        }
        // d(-q log2 q)/dq = -(log2 q + 1/ln 2)
        for (std::size_t cell = 0; cell < p.size(); ++cell) {
            if (p[cell] <= 0.0) continue;
            double* g = grad.data() + cell_slice_[cell] * w_dim_;
            const std::size_t gbase = t.gmap[cell] * t.w_reduced_dim;
            for (std::size_t w = 0; w < w_dim_; ++w) {
                double qv = std::max(q[gbase + t.w_proj[w]], kLogFloor);
                g[w] -= t.sign * p[cell] * (std::log2(qv) + kInvLn2);
            }
        }
    }
}

Channel ChannelObjective::to_channel(std::span<const double> channel,
                                     const std::string& w_name) const {
    return Channel(cond_axes_, Alphabet::indexed(w_name, w_dim_),
                   std::vector<double>(channel.begin(), channel.end()));
}

GreedyDistortion::GreedyDistortion(const JointPMF& base, std::vector<std::string> cond_axes,
                                   std::size_t w_dim, std::vector<std::size_t> w_proj,
                                   std::vector<std::string> context_axes,
                                   std::vector<std::string> source_axes,
                                   std::vector<std::vector<double>> delta)
    : w_dim_(w_dim), w_proj_(std::move(w_proj)), delta_(std::move(delta)) {
    if (w_proj_.size() != w_dim_)
        throw OutOfRange("GreedyDistortion: projection size does not match |W|");
    aux_count_ = 1 + *std::max_element(w_proj_.begin(), w_proj_.end());
    std::size_t sc = 1, cc = 1, xc = 1;
    cell_slice_ = cell_group_map(base, cond_axes, sc);
    cell_ctx_ = cell_group_map(base, context_axes, cc);
    cell_x_ = cell_group_map(base, source_axes, xc);
    ctx_count_ = cc;
    if (delta_.size() != xc)
        throw OutOfRange("GreedyDistortion: distortion rows do not match source alphabet");
    auto p = base.probs();
    cell_p_.assign(p.begin(), p.end());
}

void GreedyDistortion::accumulate(std::span<const double> channel,
                                  std::vector<double>& mass) const {
    const std::size_t xc = delta_.size();
    mass.assign(aux_count_ * ctx_count_ * xc, 0.0);
    for (std::size_t cell = 0; cell < cell_p_.size(); ++cell) {
        if (cell_p_[cell] <= 0.0) continue;
        const double* slice = channel.data() + cell_slice_[cell] * w_dim_;
        for (std::size_t w = 0; w < w_dim_; ++w)
            mass[(w_proj_[w] * ctx_count_ + cell_ctx_[cell]) * xc + cell_x_[cell]] +=
                cell_p_[cell] * slice[w];
    }
}

std::vector<std::size_t> GreedyDistortion::reconstruction(std::span<const double> channel) const {
    const std::size_t xc = delta_.size();
    const std::size_t hc = xhat_count();
    std::vector<double> mass;
    accumulate(channel, mass);
    std::vector<std::size_t> recon(aux_count_ * ctx_count_, 0);
    for (std::size_t key = 0; key < recon.size(); ++key) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t xh = 0; xh < hc; ++xh) {
            double d = 0.0;
            for (std::size_t x = 0; x < xc; ++x) d += mass[key * xc + x] * delta_[x][xh];
            if (d < best) {
                best = d;
                arg = xh;
            }
        }
        recon[key] = arg;
    }
    return recon;
}

double GreedyDistortion::expected(std::span<const double> channel) const {
    const std::size_t xc = delta_.size();
    std::vector<double> mass;
    accumulate(channel, mass);
    auto recon = reconstruction(channel);
    double e = 0.0;
    for (std::size_t key = 0; key < recon.size(); ++key)
        for (std::size_t x = 0; x < xc; ++x) e += mass[key * xc + x] * delta_[x][recon[key]];
    return e;
}

void GreedyDistortion::gradient(std::span<const double> channel, std::span<double> grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    auto recon = reconstruction(channel);
    for (std::size_t cell = 0; cell < cell_p_.size(); ++cell) {
        if (cell_p_[cell] <= 0.0) continue;
        double* g = grad.data() + cell_slice_[cell] * w_dim_;
        for (std::size_t w = 0; w < w_dim_; ++w) {
            std::size_t xh = recon[w_proj_[w] * ctx_count_ + cell_ctx_[cell]];
            g[w] += cell_p_[cell] * delta_[cell_x_[cell]][xh];
        }
    }
}

std::vector<std::size_t> identity_proj(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::vector<std::size_t> component_proj(const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& keep) {
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    std::vector<std::size_t> proj(total);
    std::vector<std::size_t> multi(dims.size());
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t k = dims.size(); k-- > 0;) {
            multi[k] = rem % dims[k];
            rem /= dims[k];
        }
        std::size_t out = 0;
        for (std::size_t k : keep) out = out * dims[k] + multi[k];
        proj[flat] = out;
    }
    return proj;
}

} // namespace sird
