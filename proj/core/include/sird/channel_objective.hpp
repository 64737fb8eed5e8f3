#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sird/joint_pmf.hpp"
#include "sird/simplex_opt.hpp"

namespace sird {

/// Linear combination of entropy terms, in bits, evaluated on the joint
/// obtained by attaching an auxiliary channel W to a fixed base joint.
/// The optimization point is the channel tensor p(w | conditioning cell),
/// laid out slice-major (conditioning cells in base-axis order, W fastest).
///
/// Entropy groups may include W through an optional projection of the W
/// alphabet, which is how a component of a flattened product auxiliary
/// (e.g. the C part of W = (A,B,C)) enters a measure.
class ChannelObjective {
  public:
    ChannelObjective(JointPMF base, std::vector<std::string> cond_axes, std::size_t w_dim);

    /// sign * H(vars [, proj(W)]). Pass w_proj to include the (projected)
    /// auxiliary in the group; omit it for a constant term.
    void add_entropy_term(double sign, const std::vector<std::string>& vars,
                          std::optional<std::vector<std::size_t>> w_proj = std::nullopt);

    /// sign * I(proj(W); b | c) with b, c subsets of base axes.
    void add_cmi_term(double sign, const std::vector<std::string>& b,
                      const std::vector<std::string>& c,
                      std::optional<std::vector<std::size_t>> w_proj = std::nullopt);

    double value(std::span<const double> channel) const;
    void gradient(std::span<const double> channel, std::span<double> grad) const;

    std::size_t slice_count() const { return slice_count_; }
    std::size_t w_dim() const { return w_dim_; }
    SearchSpace space() const { return SearchSpace{{{slice_count_, w_dim_}}}; }

    const JointPMF& base() const { return base_; }

    /// Materializes the point as a Channel (for witness reporting).
    Channel to_channel(std::span<const double> channel, const std::string& w_name) const;

  private:
    struct Term {
        double sign;
        std::vector<std::size_t> w_proj; // empty => W not in the group
        std::size_t w_reduced_dim = 1;
        std::vector<std::size_t> gmap;   // base cell -> group cell
        std::size_t group_size = 1;
        double constant = 0.0;           // value when W not in the group
    };

    JointPMF base_;
    std::vector<std::string> cond_names_;
    std::vector<Alphabet> cond_axes_;
    std::size_t w_dim_;
    std::size_t slice_count_;
    std::vector<std::size_t> cell_slice_; // base cell -> conditioning slice
    std::vector<Term> terms_;
};

/// Expected distortion E delta(X, phi(aux, context)) with the reconstruction
/// map phi chosen greedily (conditional-expected-distortion argmin, ties to
/// the lowest reconstruction index) for the current channel point.
class GreedyDistortion {
  public:
    /// w_proj maps a W symbol to the aux argument phi sees (identity for a
    /// plain auxiliary, a component projection for flattened products).
    GreedyDistortion(const JointPMF& base, std::vector<std::string> cond_axes,
                     std::size_t w_dim, std::vector<std::size_t> w_proj,
                     std::vector<std::string> context_axes,
                     std::vector<std::string> source_axes,
                     std::vector<std::vector<double>> delta); // [x_group][x_hat]

    double expected(std::span<const double> channel) const;
    /// Subgradient with phi held at the current greedy argmin.
    void gradient(std::span<const double> channel, std::span<double> grad) const;

    /// Greedy reconstruction table: [aux_key * ctx_count + ctx] -> x_hat.
    std::vector<std::size_t> reconstruction(std::span<const double> channel) const;

    std::size_t xhat_count() const { return delta_.empty() ? 0 : delta_[0].size(); }

  private:
    std::size_t w_dim_;
    std::vector<std::size_t> w_proj_;
    std::size_t aux_count_;
    std::size_t ctx_count_;
    std::vector<std::size_t> cell_slice_;
    std::vector<std::size_t> cell_ctx_;
    std::vector<std::size_t> cell_x_;
    std::vector<double> cell_p_;
    std::vector<std::vector<double>> delta_;

    void accumulate(std::span<const double> channel, std::vector<double>& mass) const;
};

/// Identity projection helper.
std::vector<std::size_t> identity_proj(std::size_t n);

/// Projection of a flattened product alphabet onto a subset of its factors.
/// dims: factor sizes (row-major, last fastest); keep: indices of factors kept.
std::vector<std::size_t> component_proj(const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& keep);

} // namespace sird
