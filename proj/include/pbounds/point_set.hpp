#pragma once

#include "pbounds/belief_set.hpp"
#include "pbounds/lp.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

namespace pbounds {

/// Sum_{b'} w(b') Q(b', a) for a table laid out as values[i * num_actions + a].
inline double pointset_upper(std::span<const double> values, int num_actions,
                             const WeightFunction& w, int a) {
    double v = 0.0;
    for (const auto& e : w.weights)
        v += e.value * values[static_cast<std::size_t>(e.index) * num_actions + static_cast<std::size_t>(a)];
    return v;
}

/// Largest violation of b(s) = sum w(b') b'(s) over all states touched by either side.
inline double reconstruction_error(std::span<const Belief> point_set, const WeightFunction& w,
                                   const Belief& b) {
    SparseVector mix;
    for (const auto& e : w.weights)
        for (const auto& p : point_set[static_cast<std::size_t>(e.index)].entries())
            mix.push_back({p.index, e.value * p.value});
    mix = canonicalize(std::move(mix));
    double err = 0.0;
    std::size_t j = 0;
    for (const auto& m : mix) {
        while (j < b.entries().size() && b.entries()[j].index < m.index) err = std::max(err, b.entries()[j++].value);
        if (j < b.entries().size() && b.entries()[j].index == m.index)
            err = std::max(err, std::abs(m.value - b.entries()[j++].value));
        else
            err = std::max(err, m.value);
    }
    while (j < b.entries().size()) err = std::max(err, b.entries()[j++].value);
    return err;
}

/// w_{b,a,o}(b_{s,a,o}) = b(s) Pr(o | s, a) / Pr(o | b, a), merged onto stored indices.
inline WeightFunction canonical_tib_weights(const PomdpModel& m, const BeliefSet& set, const Belief& b,
                                            int a, int o) {
    m.check_action(a);
    m.check_observation(o);
    for (auto& br : tib_branches(m, set, b, a))
        if (br.observation == o) return {std::move(br.weights)};
    throw UnreachableObservation("canonical weights: observation " + m.observation_name(o) +
                                 " is unreachable after action " + m.action_name(a));
}

/// min_s b(s) / p(s) over p's support; 0 when p has mass where b has none.
inline double min_ratio(const Belief& b, const Belief& p) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& e : p.entries()) {
        const double bs = b[e.index];
        if (bs <= 0.0) return 0.0;
        r = std::min(r, bs / e.value);
    }
    return std::isfinite(r) ? r : 0.0;
}

/**
 * Closest-belief weights: weight lambda on the non-unit member with the
 * largest minimum ratio, the residual b - lambda b' on unit beliefs.
 */
inline WeightFunction ctib_weights(const BeliefSet& set, std::span<const int> candidates, const Belief& b) {
    int closest = -1;
    double lambda = 0.0;
    for (int j : candidates) {
        if (set.belief(j).is_unit()) continue;
        const double r = min_ratio(b, set.belief(j));
        if (r > lambda + 1e-15) {
            lambda = r;
            closest = j;
        }
    }
    lambda = std::min(lambda, 1.0);
    SparseVector w;
    if (closest >= 0) w.push_back({closest, lambda});
    SparseVector residual;
    double total = 0.0;
    for (const auto& e : b.entries()) {
        const double r = std::max(0.0, e.value - (closest >= 0 ? lambda * set.belief(closest)[e.index] : 0.0));
        if (r > 0.0) {
            residual.push_back({e.index, r});
            total += r;
        }
    }
    if (total > 0.0) {
        const double scale = (1.0 - lambda) / total;
        for (const auto& r : residual) w.push_back({set.unit_index(r.index), r.value * scale});
    }
    return {canonicalize(std::move(w))};
}

inline WeightFunction ctib_weights(const BeliefSet& set, const Belief& b) {
    auto candidates = set.members_within_support(b);
    return ctib_weights(set, candidates, b);
}

/**
 * Upper values at unit beliefs plus interior points, queried through the
 * sawtooth interpolation.
 */
class UpperBoundSet {
public:
    struct Point {
        Belief belief;
        double value = 0.0;
        double corner_gap = 0.0;   ///< V_corner(belief) - value, always > 0
    };

    UpperBoundSet() = default;
    explicit UpperBoundSet(std::vector<double> corner_values) : corners_(std::move(corner_values)) {}

    std::span<const double> corner_values() const noexcept { return corners_; }
    std::span<const Point> points() const noexcept { return points_; }

    double corner_interpolation(const Belief& b) const {
        double v = 0.0;
        for (const auto& e : b.entries()) v += e.value * corners_[static_cast<std::size_t>(e.index)];
        return v;
    }

    double value(const Belief& b) const {
        const double base = corner_interpolation(b);
        double best = base;
        if (b.is_unit()) return base;
        for (const auto& p : points_) {
            const double r = min_ratio(b, p.belief);
            if (r > 0.0) best = std::min(best, base - r * p.corner_gap);
        }
        return best;
    }

    /// Lowers the corner value of state s when `value` is smaller.
    bool lower_corner(int s, double value) {
        auto& c = corners_[static_cast<std::size_t>(s)];
        if (!(value < c)) return false;
        c = value;
        refresh_gaps();
        return true;
    }

    /// Stores (b, value) when it improves on the current interpolation at b.
    bool insert(const Belief& b, double value) {
        if (b.is_unit()) return lower_corner(b.entries()[0].index, value);
        if (!(value < this->value(b) - 1e-12)) return false;
        auto found = index_.find(b);
        if (found) {
            auto& p = points_[static_cast<std::size_t>(*found)];
            p.value = std::min(p.value, value);
            p.corner_gap = corner_interpolation(p.belief) - p.value;
            return true;
        }
        index_.insert(b);
        points_.push_back({b, value, corner_interpolation(b) - value});
        return true;
    }

    /// Drops points whose value no longer improves on the corner interpolation.
    std::size_t prune() {
        std::vector<Point> kept;
        for (auto& p : points_)
            if (p.corner_gap > 1e-12) kept.push_back(std::move(p));
        const std::size_t removed = points_.size() - kept.size();
        points_ = std::move(kept);
        index_ = BeliefIndex();
        for (const auto& p : points_) index_.insert(p.belief);
        return removed;
    }

private:
    void refresh_gaps() {
        for (auto& p : points_) p.corner_gap = corner_interpolation(p.belief) - p.value;
    }

    std::vector<double> corners_;
    std::vector<Point> points_;
    BeliefIndex index_;
};

inline double sawtooth_upper(const UpperBoundSet& ub, const Belief& b) { return ub.value(b); }

} // namespace pbounds
