#pragma once

#include "pbounds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pbounds {

/// One stored coordinate of a sparse vector.
struct SparseEntry {
    int index = 0;
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseVector = std::vector<SparseEntry>;

/// Sorts by index, merges duplicate indices and drops non-positive values.
inline SparseVector canonicalize(SparseVector v) {
    std::sort(v.begin(), v.end(),
              [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
    SparseVector out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!out.empty() && out.back().index == e.index)
            out.back().value += e.value;
        else
            out.push_back(e);
    }
    std::erase_if(out, [](const SparseEntry& e) { return !(e.value > 0.0); });
    return out;
}

/**
 * Probability distribution over states, stored sparsely.
 *
 * Entries are sorted by state index and every stored probability is strictly
 * positive; the probabilities sum to one within 1e-9.
 */
class Belief {
public:
    static constexpr double kSumTolerance = 1e-9;

    Belief() = default;

    static Belief unit(int state) {
        if (state < 0) throw UsageError("unit belief: negative state index");
        Belief b;
        b.entries_.push_back({state, 1.0});
        return b;
    }

    static Belief uniform(int num_states) {
        if (num_states <= 0) throw UsageError("uniform belief: empty state space");
        Belief b;
        b.entries_.reserve(static_cast<std::size_t>(num_states));
        for (int s = 0; s < num_states; ++s) b.entries_.push_back({s, 1.0 / num_states});
        return b;
    }

    /// Normalizes arbitrary nonnegative mass; throws if the total mass is zero.
    static Belief normalized(SparseVector mass) {
        Belief b;
        b.entries_ = canonicalize(std::move(mass));
        double total = 0.0;
        for (const auto& e : b.entries_) total += e.value;
        if (!(total > 0.0)) throw UsageError("belief: total probability mass is zero");
        for (auto& e : b.entries_) e.value /= total;
        return b;
    }

    /// Builds a belief from a dense probability vector that must already sum to one.
    static Belief from_dense(std::span<const double> p) {
        SparseVector v;
        double total = 0.0;
        for (std::size_t s = 0; s < p.size(); ++s) {
            if (p[s] < 0.0 || !std::isfinite(p[s]))
                throw UsageError("belief: negative or non-finite probability");
            total += p[s];
            if (p[s] > 0.0) v.push_back({static_cast<int>(s), p[s]});
        }
        if (std::abs(total - 1.0) > kSumTolerance)
            throw UsageError("belief: probabilities sum to " + std::to_string(total));
        Belief b;
        b.entries_ = std::move(v);
        return b;
    }

    std::span<const SparseEntry> entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    bool is_unit() const noexcept { return entries_.size() == 1; }

    double operator[](int state) const noexcept {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), state,
            [](const SparseEntry& e, int s) { return e.index < s; });
        return (it != entries_.end() && it->index == state) ? it->value : 0.0;
    }

    std::vector<double> dense(int num_states) const {
        std::vector<double> out(static_cast<std::size_t>(num_states), 0.0);
        for (const auto& e : entries_) out[static_cast<std::size_t>(e.index)] = e.value;
        return out;
    }

    friend bool operator==(const Belief&, const Belief&) = default;

private:
    SparseVector entries_;
};

/// Largest coordinate-wise difference between two beliefs.
inline double sup_distance(const Belief& x, const Belief& y) {
    auto a = x.entries();
    auto b = y.entries();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
            d = std::max(d, a[i++].value);
        } else if (i == a.size() || b[j].index < a[i].index) {
            d = std::max(d, b[j++].value);
        } else {
            d = std::max(d, std::abs(a[i++].value - b[j++].value));
        }
    }
    return d;
}

/// Shannon entropy in nats, with 0 ln 0 = 0.
inline double belief_entropy(const Belief& b) {
    double h = 0.0;
    for (const auto& e : b.entries()) h -= e.value * std::log(e.value);
    return std::max(h, 0.0);
}

} // namespace pbounds
