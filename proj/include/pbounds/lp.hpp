#pragma once

#include "pbounds/belief_set.hpp"
#include "pbounds/errors.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace pbounds {

enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

/// min or max c.x subject to A x = rhs, x >= 0. A is dense, row-major.
struct LinearProgram {
    std::vector<double> objective;
    Sense sense = Sense::minimize;
    std::vector<double> constraints;   ///< rows() x variables(), row-major
    std::vector<double> rhs;

    std::size_t variables() const noexcept { return objective.size(); }
    std::size_t rows() const noexcept { return rhs.size(); }
    double& at(std::size_t r, std::size_t c) { return constraints[r * variables() + c]; }
    double at(std::size_t r, std::size_t c) const { return constraints[r * variables() + c]; }
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;
    double objective_value = 0.0;
};

namespace detail {

/// Dense simplex tableau with Bland's rule. Column `cols` holds the right-hand side.
class Tableau {
public:
    static constexpr double kPivotTolerance = 1e-10;

    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double& cost(std::size_t c) { return at(rows_, c); }
    std::vector<std::size_t>& basis() { return basis_; }
    std::size_t rows() const { return rows_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
    }

    /// Minimizes the cost row over columns [0, active). Returns false when unbounded.
    bool optimize(std::size_t active) {
        for (;;) {
            std::size_t enter = active;
            for (std::size_t c = 0; c < active; ++c) {
                if (cost(c) < -kPivotTolerance) {
                    enter = c;
                    break;
                }
            }
            if (enter == active) return true;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, enter);
                if (a > kPivotTolerance) best = std::min(best, std::max(rhs(r), 0.0) / a);
            }
            if (!std::isfinite(best)) return false;
            std::size_t leave = rows_;
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, enter);
                if (a <= kPivotTolerance) continue;
                if (std::max(rhs(r), 0.0) / a <= best + 1e-12 && (leave == rows_ || basis_[r] < basis_[leave]))
                    leave = r;
            }
            pivot(leave, enter);
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

} // namespace detail

constexpr double kLpFeasibilityTolerance = 1e-7;
constexpr double kLpClampTolerance = 1e-10;

/// Two-phase simplex with Bland's anti-cycling rule. Deterministic for a given input.
inline LpSolution solve(const LinearProgram& lp) {
    const std::size_t m = lp.rows();
    const std::size_t n = lp.variables();
    if (lp.constraints.size() != m * n) throw UsageError("linear program: constraint matrix has wrong size");
    for (double r : lp.rhs)
        if (!std::isfinite(r)) throw UsageError("linear program: non-finite right-hand side");

    LpSolution out;
    detail::Tableau tab(m, n + m);
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = lp.rhs[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = sign * lp.at(r, c);
        tab.at(r, n + r) = 1.0;
        tab.rhs(r) = sign * lp.rhs[r];
        tab.basis()[r] = n + r;
    }
    // Phase 1: minimize the sum of artificials, written in reduced form.
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) tab.cost(c) -= tab.at(r, c);
        tab.cost(n + m) -= tab.rhs(r);
    }
    tab.optimize(n);
    if (-tab.cost(n + m) > kLpFeasibilityTolerance) return out;

    // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
    std::vector<bool> redundant(m, false);
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis()[r] < n) continue;
        std::size_t pc = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(tab.at(r, c)) > detail::Tableau::kPivotTolerance) {
                pc = c;
                break;
            }
        }
        if (pc == n)
            redundant[r] = true;
        else
            tab.pivot(r, pc);
    }

    // Phase 2 cost row: c - c_B B^-1 A over the structural columns.
    const double sense = lp.sense == Sense::maximize ? -1.0 : 1.0;
    for (std::size_t c = 0; c <= n + m; ++c) tab.cost(c) = 0.0;
    for (std::size_t c = 0; c < n; ++c) tab.cost(c) = sense * lp.objective[c];
    for (std::size_t r = 0; r < m; ++r) {
        if (redundant[r]) continue;
        const std::size_t b = tab.basis()[r];
        const double cb = tab.cost(b);
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) tab.cost(c) -= cb * tab.at(r, c);
        tab.cost(n + m) -= cb * tab.rhs(r);
    }
    if (!tab.optimize(n)) {
        out.status = LpStatus::unbounded;
        return out;
    }

    out.status = LpStatus::optimal;
    out.values.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (redundant[r]) continue;
        const std::size_t b = tab.basis()[r];
        if (b < n) {
            double v = tab.rhs(r);
            if (v < 0.0 && v >= -kLpClampTolerance) v = 0.0;
            out.values[b] = v;
        }
    }
    out.objective_value = 0.0;
    for (std::size_t c = 0; c < n; ++c) out.objective_value += lp.objective[c] * out.values[c];
    return out;
}

/// Nonnegative weights over point-set members expressing a belief as a convex combination.
struct WeightFunction {
    SparseVector weights;   ///< point-set index -> weight

    double total() const {
        double t = 0.0;
        for (const auto& w : weights) t += w.value;
        return t;
    }
};

/**
 * Optimizes sum_j objective[j] w_j over weight functions for `target`
 * restricted to the given candidate members. Members whose support leaves the
 * target's support must get weight zero, so callers pass only members inside
 * it (BeliefSet::members_within_support); constraints are the target's states.
 * Returns std::nullopt when the target is outside the candidates' hull.
 */
inline std::optional<WeightFunction> weight_lp(std::span<const Belief> point_set,
                                               std::span<const int> candidates, const Belief& target,
                                               std::span<const double> objective, Sense sense) {
    if (objective.size() != point_set.size())
        throw UsageError("weight_lp: objective length differs from point-set size");
    if (candidates.empty()) return std::nullopt;
    auto support = target.entries();
    LinearProgram lp;
    lp.sense = sense;
    lp.objective.reserve(candidates.size());
    for (int j : candidates) lp.objective.push_back(objective[static_cast<std::size_t>(j)]);
    lp.constraints.assign(support.size() * candidates.size(), 0.0);
    lp.rhs.reserve(support.size());
    for (std::size_t r = 0; r < support.size(); ++r) {
        lp.rhs.push_back(support[r].value);
        for (std::size_t c = 0; c < candidates.size(); ++c)
            lp.at(r, c) = point_set[static_cast<std::size_t>(candidates[c])][support[r].index];
    }
    // A candidate outside the target support would make the problem infeasible.
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double inside = 0.0;
        for (std::size_t r = 0; r < support.size(); ++r) inside += lp.at(r, c);
        if (inside < 1.0 - 1e-9) throw UsageError("weight_lp: candidate support leaves the target support");
    }
    auto sol = solve(lp);
    if (sol.status != LpStatus::optimal) return std::nullopt;
    WeightFunction w;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (sol.values[c] > 0.0) w.weights.push_back({candidates[c], sol.values[c]});
    return w;
}

/// weight_lp over every member of a BeliefSet that fits inside the target support.
inline std::optional<WeightFunction> weight_lp(const BeliefSet& point_set, const Belief& target,
                                               std::span<const double> objective, Sense sense) {
    auto candidates = point_set.members_within_support(target);
    return weight_lp(point_set.beliefs(), candidates, target, objective, sense);
}

} // namespace pbounds
