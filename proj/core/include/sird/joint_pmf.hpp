#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sird/errors.hpp"

namespace sird {

/// Named finite alphabet of a random variable.
struct Alphabet {
    std::string name;
    std::vector<std::string> symbols;

    std::size_t size() const { return symbols.size(); }

    static Alphabet indexed(std::string name, std::size_t n);
    static Alphabet binary(std::string name) { return indexed(std::move(name), 2); }
};

/// Total function between two alphabets, given as an image table.
struct DeterministicMap {
    Alphabet domain;
    Alphabet codomain;
    std::vector<std::size_t> table; // table[i] = codomain index of domain symbol i

    DeterministicMap(Alphabet dom, Alphabet cod, std::vector<std::size_t> tbl);

    std::size_t operator()(std::size_t i) const { return table[i]; }
};

constexpr double kPmfValidationTol = 1e-9;
constexpr std::size_t kDefaultCellBudget = 10'000'000;

class Channel;

/// Dense joint PMF over an ordered list of named axes. Immutable after
/// construction; all operations return new objects.
class JointPMF {
  public:
    JointPMF(std::vector<Alphabet> axes, std::vector<double> probs,
             double validation_tol = kPmfValidationTol);

    const std::vector<Alphabet>& axes() const { return axes_; }
    std::span<const double> probs() const { return probs_; }
    std::size_t cell_count() const { return probs_.size(); }
    double normalization_residual() const { return norm_residual_; }

    std::size_t axis_index(const std::string& name) const;
    bool has_axis(const std::string& name) const;
    const Alphabet& axis(const std::string& name) const { return axes_[axis_index(name)]; }

    // Row-major cell addressing: the last axis varies fastest.
    std::size_t flat_index(std::span<const std::size_t> multi) const;
    void unflatten(std::size_t flat, std::span<std::size_t> multi) const;
    double at(std::span<const std::size_t> multi) const { return probs_[flat_index(multi)]; }

    JointPMF marginalize(const std::vector<std::string>& keep) const;
    Channel conditional(const std::vector<std::string>& target,
                        const std::vector<std::string>& given) const;
    JointPMF attach_auxiliary(const Channel& ch) const;
    JointPMF iid_extension(std::size_t n, std::size_t cell_budget = kDefaultCellBudget) const;
    JointPMF derive_variable(const DeterministicMap& map, const std::string& new_name) const;

    /// Derived variable over a group of axes (flattened in the listed order).
    JointPMF derive_grouped(const std::vector<std::string>& group,
                            const Alphabet& codomain,
                            const std::vector<std::size_t>& table) const;

    /// Renames an axis in place (returns a copy with the new name).
    JointPMF renamed(const std::string& old_name, const std::string& new_name) const;

    static JointPMF product(const JointPMF& a, const JointPMF& b);

  private:
    std::vector<Alphabet> axes_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;
    double norm_residual_ = 0.0;

    void init_strides();
    std::vector<std::size_t> resolve(const std::vector<std::string>& names) const;
    friend class Channel;
};

/// Conditional PMF from a tuple of input axes to one output axis.
/// Stored as a dense tensor over (inputs..., output); each input-conditioned
/// slice is a PMF.
class Channel {
  public:
    Channel(std::vector<Alphabet> input_axes, Alphabet output_axis,
            std::vector<double> probs, double validation_tol = kPmfValidationTol);

    const std::vector<Alphabet>& input_axes() const { return inputs_; }
    const Alphabet& output_axis() const { return output_; }
    std::span<const double> probs() const { return probs_; }

    /// Conditioning cells whose marginal probability was zero (filled with a
    /// uniform slice by JointPMF::conditional).
    const std::vector<std::size_t>& flagged_cells() const { return flagged_; }
    bool has_flagged_cells() const { return !flagged_.empty(); }

    std::size_t slice_count() const;
    double at(std::span<const std::size_t> input_multi, std::size_t out) const;

    static Channel identity(const Alphabet& in, std::string out_name);
    static Channel constant(const Alphabet& in, std::string out_name);
    static Channel from_map(const DeterministicMap& map, std::string out_name);
    static Channel bsc(const Alphabet& in, std::string out_name, double crossover);
    static Channel bec(const Alphabet& in, std::string out_name, double erasure);

  private:
    std::vector<Alphabet> inputs_;
    Alphabet output_;
    std::vector<double> probs_; // inputs-major, output fastest
    std::vector<std::size_t> flagged_;

    friend class JointPMF;
};

JointPMF build_joint(std::vector<Alphabet> axes, std::vector<double> probs);

/// Uniform product distribution over the given axes.
JointPMF uniform_joint(std::vector<Alphabet> axes);

/// Independent product of single-variable marginals.
JointPMF independent_joint(const std::vector<std::pair<Alphabet, std::vector<double>>>& marginals);

/// Max factorization gap of the chain A — B — C on cells of j, where A, B, C
/// are disjoint axis groups: max |p(a,b,c) - p(a|b) p(c|b) p(b)|.
double markov_residual(const JointPMF& j,
                       const std::vector<std::string>& a,
                       const std::vector<std::string>& b,
                       const std::vector<std::string>& c);

} // namespace sird
