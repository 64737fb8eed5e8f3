#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sird/joint_pmf.hpp"
#include "sird/simplex_opt.hpp"

namespace sird {

/// Result of the stochastic-degradedness linear feasibility test: does a
/// channel Q(y1|y2) exist with P(y1|x) = sum_{y2} P(y2|x) Q(y1|y2)?
struct DegradednessResult {
    bool feasible = false;
    std::optional<Channel> witness;  // Q(y1|y2) when feasible
    double infeasibility = 0.0;      // phase-1 certificate margin when not
    std::vector<std::size_t> dropped_rows; // zero-probability x cells (flagged)
};

DegradednessResult stochastic_degradedness(const JointPMF& j,
                                           const std::vector<std::string>& x_axes,
                                           const std::string& y1 = "Y1",
                                           const std::string& y2 = "Y2");

enum class ClnStatus { CLN, NotCLN, Inconclusive };

struct ClnVerdict {
    double margin_bits = 0.0;
    std::optional<Channel> witness; // p(w | x, l); attached when NotCLN
    std::size_t searched_cardinality = 0;
    ClnStatus verdict = ClnStatus::Inconclusive;
    OptDiagnostics diag;
};

struct ClnOptions {
    std::size_t max_cardinality = 0; // 0 => |X||L| + 1
    double tolerance = 1e-6;         // bits
    std::string y1 = "Y1";
    std::string y2 = "Y2";
    OptOptions opt;
};

/// Minimizes I(W;Y2|L) - I(W;Y1|L) over channels p(w|x,l) for cardinalities
/// |W| = 1..cap; Y2 is conditionally less noisy than Y1 given L iff the
/// minimum is >= 0 (up to tolerance). `given` may overlap `x_axes`.
ClnVerdict cln_margin(const JointPMF& j, const std::vector<std::string>& x_axes,
                      const std::vector<std::string>& given, const ClnOptions& opts = {});

/// Less-noisy test: cln_margin with constant L.
ClnVerdict is_less_noisy(const JointPMF& j, const std::vector<std::string>& x_axes,
                         const ClnOptions& opts = {});

} // namespace sird
