#include "sird/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sird {

std::size_t SearchSpace::total_vars() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.slice_count * b.dim;
    return n;
}

std::size_t SearchSpace::total_slices() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.slice_count;
    return n;
}

void project_to_simplex(std::span<double> slice) {
    const std::size_t n = slice.size();
    std::vector<double> u(slice.begin(), slice.end());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    std::size_t rho = 0;
    for (std::size_t i = 0; i < n; ++i) {
        css += u[i];
        double t = (css - 1.0) / double(i + 1);
        if (u[i] - t > 0.0) {
            rho = i + 1;
            tau = t;
        }
    }
    (void)rho;
    for (auto& v : slice) v = std::max(0.0, v - tau);
}

namespace {

struct SliceView {
    std::size_t offset;
    std::size_t dim;
};

std::vector<SliceView> slice_views(const SearchSpace& space) {
    std::vector<SliceView> views;
    std::size_t off = 0;
    for (const auto& b : space.blocks)
        for (std::size_t s = 0; s < b.slice_count; ++s) {
            views.push_back({off, b.dim});
            off += b.dim;
        }
    return views;
}

void project_all(const std::vector<SliceView>& views, std::span<double> x) {
    for (const auto& v : views) project_to_simplex(x.subspan(v.offset, v.dim));
}

void numeric_gradient(const std::function<double(std::span<const double>)>& f,
                      std::span<const double> x, std::span<double> g, double h = 1e-6) {
    std::vector<double> p(x.begin(), x.end());
    for (std::size_t i = 0; i < p.size(); ++i) {
        double orig = p[i];
        p[i] = orig + h;
        double fp = f(p);
        p[i] = orig - h;
        double fm = f(p);
        p[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
}

struct Penalized {
    const Objective& obj;
    double mu;

    double value(std::span<const double> x) const {
        double v = obj.value(x);
        if (obj.violation) {
            double c = obj.violation(x);
            v += mu * c * c;
        }
        return v;
    }

    void gradient(std::span<const double> x, std::span<double> g) const {
        if (obj.gradient)
            obj.gradient(x, g);
        else
            numeric_gradient(obj.value, x, g);
        if (obj.violation) {
            double c = obj.violation(x);
            if (c > 0.0) {
                std::vector<double> cg(x.size());
                if (obj.violation_gradient)
                    obj.violation_gradient(x, cg);
                else
                    numeric_gradient(obj.violation, x, cg);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * mu * c * cg[i];
            }
        }
    }
};

// One projected-gradient descent run with Armijo backtracking and the
// quadratic penalty ramp (x10 per 200 iterations).
void descend(const std::vector<SliceView>& views, const Objective& obj,
             const OptOptions& opts, std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> g(n), trial(n);
    Penalized pen{obj, 10.0};
    double fx = pen.value(x);
    if (!std::isfinite(fx)) return;

    // one Armijo projected-gradient step; returns {moved, converged}
    auto take_step = [&]() -> std::pair<bool, bool> {
        pen.gradient(x, g);
        double step = 1.0;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
            project_all(views, trial);
            double ft = pen.value(trial);
            double decr = 0.0;
            for (std::size_t i = 0; i < n; ++i) decr += g[i] * (trial[i] - x[i]);
            if (std::isfinite(ft) && ft <= fx + 1e-4 * decr) {
                double delta = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    delta = std::max(delta, std::abs(trial[i] - x[i]));
                x.swap(trial);
                fx = ft;
                return {true, delta < opts.convergence_residual};
            }
            step *= 0.5;
        }
        return {false, false};
    };

    constexpr double kMuCap = 1e12;
    for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
        if (obj.violation && iter > 0 && iter % 100 == 0 && pen.mu < kMuCap) {
            pen.mu *= 10.0;
            fx = pen.value(x);
        }
        auto [moved, converged] = take_step();
        if (moved) {
            if (converged && !obj.violation) return;
            if (converged && obj.violation && pen.mu >= kMuCap) break;
        } else {
            if (obj.violation && pen.mu < kMuCap) {
                pen.mu *= 10.0;
                fx = pen.value(x);
                continue;
            }
            break;
        }
    }

    // feasibility push: the penalty leaves a residual violation of roughly
    // (multiplier)/(2 mu); keep stiffening mu and polishing until the iterate
    // is feasible (or the cap is reached)
    if (obj.violation) {
        for (int phase = 0; phase < 8 && obj.violation(x) > opts.feasibility_tol; ++phase) {
            if (pen.mu >= kMuCap) break;
            pen.mu = std::min(pen.mu * 10.0, kMuCap);
            fx = pen.value(x);
            for (std::size_t it = 0; it < 100; ++it) {
                auto [moved, converged] = take_step();
                if (!moved || converged) break;
            }
        }
    }
}

double projected_gradient_residual(const std::vector<SliceView>& views, const Objective& obj,
                                   std::span<const double> x) {
    std::vector<double> g(x.size()), trial(x.begin(), x.end());
    if (obj.gradient)
        obj.gradient(x, g);
    else
        numeric_gradient(obj.value, x, g);
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - g[i];
    project_all(views, trial);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(trial[i] - x[i]));
    return r;
}

// Enumerates all deterministic channels (each slice a point mass). Returns
// the best feasible one, or nullopt when none is feasible.
struct EnumBest {
    std::vector<double> point;
    double value = std::numeric_limits<double>::infinity();
    double violation = std::numeric_limits<double>::infinity();
    bool found = false;
    std::size_t count = 0;
};

EnumBest enumerate_deterministic(const std::vector<SliceView>& views, const Objective& obj,
                                 const OptOptions& opts, std::size_t total_vars) {
    EnumBest best;
    double combos = 1.0;
    for (const auto& v : views) combos *= double(v.dim);
    if (combos > double(opts.enumeration_budget)) return best;

    std::vector<std::size_t> choice(views.size(), 0);
    std::vector<double> x(total_vars, 0.0);
    while (true) {
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t s = 0; s < views.size(); ++s) x[views[s].offset + choice[s]] = 1.0;
        ++best.count;
        double viol = obj.violation ? obj.violation(x) : 0.0;
        if (viol <= opts.feasibility_tol) {
            double v = obj.value(x);
            if (std::isfinite(v) && (!best.found || v < best.value)) {
                best.point = x;
                best.value = v;
                best.violation = viol;
                best.found = true;
            }
        }
        // odometer
        std::size_t s = views.size();
        bool wrapped = true;
        while (s-- > 0) {
            if (++choice[s] < views[s].dim) {
                wrapped = false;
                break;
            }
            choice[s] = 0;
        }
        if (wrapped) return best;
    }
}

// Exhaustive grid over each slice simplex at the given resolution (used as a
// cross-check oracle on tiny spaces).
void grid_recurse(const std::vector<SliceView>& views, std::size_t slice,
                  std::vector<double>& x, const std::size_t k, const Objective& obj,
                  const OptOptions& opts, EnumBest& best) {
    if (slice == views.size()) {
        ++best.count;
        double viol = obj.violation ? obj.violation(x) : 0.0;
        if (viol <= opts.feasibility_tol) {
            double v = obj.value(x);
            if (std::isfinite(v) && (!best.found || v < best.value)) {
                best.point = x;
                best.value = v;
                best.violation = viol;
                best.found = true;
            }
        }
        return;
    }
    const auto& view = views[slice];
    // compositions of k into view.dim parts
    std::vector<std::size_t> comp(view.dim, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos + 1 == view.dim) {
            comp[pos] = left;
            for (std::size_t i = 0; i < view.dim; ++i)
                x[view.offset + i] = double(comp[i]) / double(k);
            grid_recurse(views, slice + 1, x, k, obj, opts, best);
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            comp[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, k);
}

} // namespace

OptResult minimize(const SearchSpace& space, const Objective& obj, const OptOptions& opts) {
    if (opts.restarts < 1) throw OutOfRange("minimize: restarts must be >= 1");
    const auto views = slice_views(space);
    const std::size_t n = space.total_vars();

    OptResult result;
    result.diag.restart_values.reserve(opts.restarts);

    bool have_winner = false;
    double best_val = std::numeric_limits<double>::infinity();
    double best_viol = std::numeric_limits<double>::infinity();
    std::size_t best_restart = 0;
    std::vector<double> best_point;

    auto consider = [&](const std::vector<double>& x, double v, double viol, std::size_t idx,
                        bool from_enum) {
        if (!std::isfinite(v)) return;
        bool feas = viol <= opts.feasibility_tol;
        bool cur_feas = best_viol <= opts.feasibility_tol;
        bool better;
        if (feas && !cur_feas)
            better = true;
        else if (!feas && cur_feas)
            better = false;
        else if (feas)
            better = v < best_val;
        else
            better = viol < best_viol;
        if (!have_winner || better) {
            have_winner = true;
            best_val = v;
            best_viol = viol;
            best_point = x;
            best_restart = idx;
            result.diag.winner_from_enumeration = from_enum;
        }
    };

    EnumBest enum_best = enumerate_deterministic(views, obj, opts, n);
    result.diag.enumerated_points = enum_best.count;
    if (enum_best.found)
        consider(enum_best.point, enum_best.value, enum_best.violation, 0, true);

    if (opts.grid_resolution) {
        std::size_t k = std::size_t(std::llround(1.0 / *opts.grid_resolution));
        EnumBest grid_best;
        std::vector<double> x(n, 0.0);
        grid_recurse(views, 0, x, k, obj, opts, grid_best);
        result.diag.enumerated_points += grid_best.count;
        if (grid_best.found)
            consider(grid_best.point, grid_best.value, grid_best.violation, 0, true);
    }

    for (std::size_t r = 0; r < opts.restarts; ++r) {
        std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ull + r + 1);
        std::vector<double> x(n);
        if (r == 0 && enum_best.found) {
            // polish the best enumerated corner from slightly inside the simplex
            for (std::size_t i = 0; i < n; ++i) x[i] = 0.98 * enum_best.point[i];
            for (const auto& v : views)
                for (std::size_t i = 0; i < v.dim; ++i) x[v.offset + i] += 0.02 / double(v.dim);
        } else {
            std::exponential_distribution<double> expo(1.0);
            for (const auto& v : views) {
                double sum = 0.0;
                for (std::size_t i = 0; i < v.dim; ++i) {
                    x[v.offset + i] = expo(rng) + 1e-12;
                    sum += x[v.offset + i];
                }
                for (std::size_t i = 0; i < v.dim; ++i) x[v.offset + i] /= sum;
            }
        }
        descend(views, obj, opts, x);
        double v = obj.value(x);
        double viol = obj.violation ? obj.violation(x) : 0.0;
        result.diag.restart_values.push_back(v);
        consider(x, v, viol, r, false);
    }

    if (!have_winner) throw OptimizerDiverged("minimize: no restart produced a finite value");

    result.point = std::move(best_point);
    result.value = best_val;
    result.violation = best_viol;
    result.diag.winner_restart = best_restart;
    result.diag.gradient_residual = projected_gradient_residual(views, obj, result.point);
    return result;
}

double finite_difference_gradient_check(const SearchSpace& space, const Objective& obj,
                                        std::span<const double> point) {
    const auto views = slice_views(space);
    const std::size_t n = space.total_vars();
    std::vector<double> ga(n), gn(n);
    if (obj.gradient)
        obj.gradient(point, ga);
    else
        return 0.0;
    numeric_gradient(obj.value, point, gn, 1e-5);

    // compare tangent components (slice-mean removed)
    auto detrend = [&](std::vector<double>& g) {
        for (const auto& v : views) {
            double mean = 0.0;
            for (std::size_t i = 0; i < v.dim; ++i) mean += g[v.offset + i];
            mean /= double(v.dim);
            for (std::size_t i = 0; i < v.dim; ++i) g[v.offset + i] -= mean;
        }
    };
    detrend(ga);
    detrend(gn);
    double scale = 1e-6;
    for (double v : gn) scale = std::max(scale, std::abs(v));
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(ga[i] - gn[i]) / scale);
    return err;
}

} // namespace sird
