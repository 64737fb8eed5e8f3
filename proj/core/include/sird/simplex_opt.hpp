#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sird/errors.hpp"

namespace sird {

/// One auxiliary channel: `slice_count` conditioning cells, each a PMF over
/// `dim` output symbols.
struct SimplexBlock {
    std::size_t slice_count;
    std::size_t dim;
};

/// Product of probability simplices; points are stored as one flat vector,
/// block by block, slice by slice.
struct SearchSpace {
    std::vector<SimplexBlock> blocks;

    std::size_t total_vars() const;
    std::size_t total_slices() const;
};

struct OptOptions {
    std::size_t restarts = 64;
    std::size_t max_iters = 2000;
    double convergence_residual = 1e-7;
    std::uint64_t seed = 0;
    std::optional<double> grid_resolution;
    std::size_t enumeration_budget = 1'000'000;
    double feasibility_tol = 1e-7;
};

/// Smooth objective over a SearchSpace, in bits. `violation` (when present)
/// returns the constraint excess, >= 0, feasible iff 0; it is driven to zero
/// by a quadratic penalty ramp during descent.
struct Objective {
    std::function<double(std::span<const double>)> value;
    std::function<void(std::span<const double>, std::span<double>)> gradient; // optional
    std::function<double(std::span<const double>)> violation;                 // optional
    std::function<void(std::span<const double>, std::span<double>)> violation_gradient;
};

struct OptDiagnostics {
    std::vector<double> restart_values;
    double gradient_residual = 0.0;
    std::size_t winner_restart = 0;
    bool winner_from_enumeration = false;
    std::size_t enumerated_points = 0;
};

struct OptResult {
    std::vector<double> point;
    double value = 0.0;
    double violation = 0.0;
    OptDiagnostics diag;
};

/// Multi-start projected-gradient descent, with exhaustive enumeration of
/// deterministic channels merged in when within budget. Deterministic under a
/// fixed seed.
OptResult minimize(const SearchSpace& space, const Objective& obj, const OptOptions& opts);

/// Euclidean projection of one slice onto the probability simplex
/// (sort-and-threshold).
void project_to_simplex(std::span<double> slice);

/// Max relative error between the analytic simplex-tangent gradient and a
/// central-difference gradient (h = 1e-5) at `point`.
double finite_difference_gradient_check(const SearchSpace& space, const Objective& obj,
                                        std::span<const double> point);

} // namespace sird
