#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sird/joint_pmf.hpp"

namespace sird {

/// Per-receiver distortion: a matrix over the (flattened) source alphabet and
/// a reconstruction alphabet, optionally declared deterministic through a psi
/// map (0/1 distortion requiring exact recovery of X~ = psi(X)).
struct DistortionSpec {
    std::vector<std::vector<double>> delta; // [x][xhat]
    Alphabet xhat;
    std::optional<Alphabet> psi_codomain;
    std::vector<std::size_t> psi_table; // size |X| when psi present

    bool deterministic() const { return psi_codomain.has_value(); }

    static DistortionSpec hamming(const Alphabet& x);
    /// 0/1 distortion from a psi map over the flattened source alphabet.
    static DistortionSpec from_psi(Alphabet codomain, std::vector<std::size_t> table);
};

struct SourceInstance {
    JointPMF joint;                       // over x_axes then side_axes
    std::vector<std::string> x_axes;      // {"X"} or {"X1","X2"}
    std::vector<std::string> side_axes;   // {"Y1","Y2"} or {"Y1","Y2","Y3"}
    std::vector<DistortionSpec> distortions; // one per receiver
    std::string name;

    std::size_t receivers() const { return side_axes.size(); }
    std::size_t x_card() const;
    bool two_source() const { return x_axes.size() == 2; }

    /// Normality of every delta (each x has a zero-distortion xhat), psi
    /// consistency, axis presence.
    void validate() const;

    const DistortionSpec& distortion(std::size_t receiver /*1-based*/) const;
    bool psi_present(std::size_t receiver) const;
};

/// Joint extended with the derived variable Xt<j> = psi_j(X) (axis name
/// "Xt1", "Xt2", ...). Throws PsiMissing when receiver j has no psi.
JointPMF with_xtilde(const SourceInstance& inst, std::size_t receiver,
                     const JointPMF* base = nullptr);

std::string xtilde_name(std::size_t receiver);

} // namespace sird
