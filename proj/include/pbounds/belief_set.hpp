#pragma once

#include "pbounds/belief.hpp"
#include "pbounds/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace pbounds {

/**
 * Deduplicating store of beliefs. Two beliefs are equal when they have the
 * same support and their sup-norm distance is below the tolerance.
 */
class BeliefIndex {
public:
    static constexpr double kDedupTolerance = 1e-9;

    explicit BeliefIndex(double tolerance = kDedupTolerance) : tolerance_(tolerance) {}

    std::optional<int> find(const Belief& b) const {
        auto it = buckets_.find(support_hash(b));
        if (it == buckets_.end()) return std::nullopt;
        for (int i : it->second)
            if (same(beliefs_[static_cast<std::size_t>(i)], b)) return i;
        return std::nullopt;
    }

    /// Returns the index of an equal stored belief, inserting `b` if none exists.
    std::pair<int, bool> insert(Belief b) {
        const auto h = support_hash(b);
        auto& bucket = buckets_[h];
        for (int i : bucket)
            if (same(beliefs_[static_cast<std::size_t>(i)], b)) return {i, false};
        const int id = static_cast<int>(beliefs_.size());
        beliefs_.push_back(std::move(b));
        bucket.push_back(id);
        return {id, true};
    }

    std::size_t size() const noexcept { return beliefs_.size(); }
    const Belief& operator[](int i) const { return beliefs_[static_cast<std::size_t>(i)]; }
    std::span<const Belief> beliefs() const noexcept { return beliefs_; }

private:
    static std::uint64_t support_hash(const Belief& b) {
        std::uint64_t h = 1469598103934665603ULL;
        for (const auto& e : b.entries()) {
            h ^= static_cast<std::uint64_t>(e.index) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 1099511628211ULL;
        }
        return h;
    }

    bool same(const Belief& x, const Belief& y) const {
        if (x.support_size() != y.support_size()) return false;
        auto a = x.entries();
        auto b = y.entries();
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].index != b[k].index) return false;
            if (std::abs(a[k].value - b[k].value) >= tolerance_) return false;
        }
        return true;
    }

    double tolerance_;
    std::vector<Belief> beliefs_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

enum class OriginKind { initial, unit, one_step };

/// How a stored belief was produced; b_{s,a,o} carries its (s, a, o).
struct Origin {
    OriginKind kind = OriginKind::initial;
    int state = -1;
    int action = -1;
    int observation = -1;

    friend bool operator==(const Origin&, const Origin&) = default;
};

/// Cached data for one reachable (b, a, o) triple of a stored belief b.
struct CachedBranch {
    int observation = 0;
    double probability = 0.0;     ///< Pr(o | b, a)
    SparseVector tib_weights;     ///< canonical weights w_{b,a,o} over stored beliefs
    int posterior = -1;           ///< index into BeliefSet::posteriors()
};

/**
 * Unit beliefs, b0 and all one-step beliefs b_{s,a,o}, deduplicated, with
 * the per-(b, a, o) successor data the two-step bounds need.
 *
 * Index 0 is always b0. Several origins may share one stored belief. The
 * posteriors b_{b,a,o} of stored beliefs are kept in a second deduplicated
 * table so that weight problems are solved once per distinct posterior.
 */
class BeliefSet {
public:
    BeliefSet() = default;

    std::size_t size() const noexcept { return index_.size(); }
    const Belief& belief(int i) const { return index_[i]; }
    std::span<const Belief> beliefs() const noexcept { return index_.beliefs(); }
    std::span<const Origin> origins(int i) const { return origins_[static_cast<std::size_t>(i)]; }
    std::optional<int> find(const Belief& b) const { return index_.find(b); }

    int initial_index() const noexcept { return 0; }
    int unit_index(int s) const { return unit_index_[static_cast<std::size_t>(s)]; }
    int num_states() const noexcept { return static_cast<int>(unit_index_.size()); }
    int num_actions() const noexcept { return num_actions_; }
    bool has_successor_cache() const noexcept { return !branches_.empty(); }

    /// Stored index of b_{s,a,o}, aligned with PomdpModel::outcomes(s, a).
    std::span<const int> one_step_indices(int s, int a) const {
        return one_step_[static_cast<std::size_t>(s) * num_actions_ + static_cast<std::size_t>(a)];
    }

    std::span<const CachedBranch> branches(int i, int a) const {
        return branches_[static_cast<std::size_t>(i) * num_actions_ + static_cast<std::size_t>(a)];
    }
    double expected_reward(int i, int a) const {
        return rewards_[static_cast<std::size_t>(i) * num_actions_ + static_cast<std::size_t>(a)];
    }

    std::size_t num_posteriors() const noexcept { return posteriors_.size(); }
    const Belief& posterior(int p) const { return posteriors_[p]; }
    std::optional<int> find_posterior(const Belief& b) const { return posteriors_.find(b); }
    /// Stored beliefs whose support lies inside the posterior's support.
    std::span<const int> posterior_candidates(int p) const {
        return posterior_candidates_[static_cast<std::size_t>(p)];
    }

    /// Stored beliefs whose support is a subset of `b`'s support, in index order.
    std::vector<int> members_within_support(const Belief& b) const {
        std::vector<int> out;
        std::vector<int> hits;
        std::vector<int> touched;
        hits.assign(size(), 0);
        for (const auto& e : b.entries()) {
            if (e.index >= num_states()) continue;
            for (int m : by_state_[static_cast<std::size_t>(e.index)]) {
                if (hits[static_cast<std::size_t>(m)]++ == 0) touched.push_back(m);
            }
        }
        for (int m : touched)
            if (static_cast<std::size_t>(hits[static_cast<std::size_t>(m)]) == belief(m).support_size())
                out.push_back(m);
        std::sort(out.begin(), out.end());
        return out;
    }

    friend BeliefSet enumerate_unit_beliefs(const PomdpModel& model);
    friend BeliefSet enumerate_one_step_beliefs(const PomdpModel& model);

private:
    int add(Belief b, Origin origin) {
        auto [id, fresh] = index_.insert(std::move(b));
        if (fresh) {
            origins_.emplace_back();
            for (const auto& e : index_[id].entries())
                by_state_[static_cast<std::size_t>(e.index)].push_back(id);
        }
        origins_[static_cast<std::size_t>(id)].push_back(origin);
        return id;
    }

    void init(const PomdpModel& m) {
        num_actions_ = m.num_actions();
        by_state_.assign(static_cast<std::size_t>(m.num_states()), {});
        unit_index_.assign(static_cast<std::size_t>(m.num_states()), -1);
    }

    void build_cache(const PomdpModel& m);

    BeliefIndex index_;
    std::vector<std::vector<Origin>> origins_;
    std::vector<int> unit_index_;
    std::vector<std::vector<int>> by_state_;
    int num_actions_ = 0;
    std::vector<std::vector<int>> one_step_;
    std::vector<std::vector<CachedBranch>> branches_;
    std::vector<double> rewards_;
    BeliefIndex posteriors_;
    std::vector<std::vector<int>> posterior_candidates_;
};

/// Canonical weights w_{b,a,o} and Pr(o | b, a) for an arbitrary belief, over a set with one-step indices.
struct BranchWeights {
    int observation = 0;
    double probability = 0.0;
    SparseVector weights;
};

inline std::vector<BranchWeights> tib_branches(const PomdpModel& m, const BeliefSet& set,
                                               const Belief& b, int a) {
    std::vector<SparseVector> by_obs(static_cast<std::size_t>(m.num_observations()));
    std::vector<int> touched;
    for (const auto& e : b.entries()) {
        auto outs = m.outcomes(e.index, a);
        auto idx = set.one_step_indices(e.index, a);
        for (std::size_t k = 0; k < outs.size(); ++k) {
            auto& bucket = by_obs[static_cast<std::size_t>(outs[k].observation)];
            if (bucket.empty()) touched.push_back(outs[k].observation);
            bucket.push_back({idx[k], e.value * outs[k].probability});
        }
    }
    std::sort(touched.begin(), touched.end());
    std::vector<BranchWeights> out;
    out.reserve(touched.size());
    for (int o : touched) {
        BranchWeights br;
        br.observation = o;
        br.weights = canonicalize(std::move(by_obs[static_cast<std::size_t>(o)]));
        for (const auto& w : br.weights) br.probability += w.value;
        if (!(br.probability > 0.0)) continue;
        for (auto& w : br.weights) w.value /= br.probability;
        out.push_back(std::move(br));
    }
    return out;
}

inline void BeliefSet::build_cache(const PomdpModel& m) {
    const int A = m.num_actions();
    branches_.assign(size() * static_cast<std::size_t>(A), {});
    rewards_.assign(size() * static_cast<std::size_t>(A), 0.0);
    for (int i = 0; i < static_cast<int>(size()); ++i) {
        const Belief b = belief(i);
        for (int a = 0; a < A; ++a) {
            rewards_[static_cast<std::size_t>(i) * A + a] = pbounds::expected_reward(m, b, a);
            auto& dst = branches_[static_cast<std::size_t>(i) * A + a];
            auto posts = observation_branches(m, b, a);
            auto weights = tib_branches(m, *this, b, a);
            for (std::size_t k = 0; k < weights.size(); ++k) {
                CachedBranch cb;
                cb.observation = weights[k].observation;
                cb.probability = weights[k].probability;
                cb.tib_weights = std::move(weights[k].weights);
                auto [pid, fresh] = posteriors_.insert(posts[k].posterior);
                if (fresh) posterior_candidates_.push_back(members_within_support(posts[k].posterior));
                cb.posterior = pid;
                dst.push_back(std::move(cb));
            }
        }
    }
}

/// B_S: one stored unit belief per state, index equal to the state. b0 is not added.
inline BeliefSet enumerate_unit_beliefs(const PomdpModel& model) {
    BeliefSet set;
    set.init(model);
    for (int s = 0; s < model.num_states(); ++s)
        set.unit_index_[static_cast<std::size_t>(s)] = set.add(Belief::unit(s), {OriginKind::unit, s});
    return set;
}

/// b0, B_S and every b_{s,a,o} with Pr(o | s, a) > 0, deduplicated, with successor cache.
inline BeliefSet enumerate_one_step_beliefs(const PomdpModel& model) {
    BeliefSet set;
    set.init(model);
    set.add(model.initial_belief(), {OriginKind::initial});
    for (int s = 0; s < model.num_states(); ++s)
        set.unit_index_[static_cast<std::size_t>(s)] = set.add(Belief::unit(s), {OriginKind::unit, s});
    const int A = model.num_actions();
    set.one_step_.assign(static_cast<std::size_t>(model.num_states()) * A, {});
    for (int s = 0; s < model.num_states(); ++s) {
        for (int a = 0; a < A; ++a) {
            auto& idx = set.one_step_[static_cast<std::size_t>(s) * A + a];
            for (const auto& oc : model.outcomes(s, a))
                idx.push_back(set.add(Belief::normalized(oc.joint), {OriginKind::one_step, s, a, oc.observation}));
        }
    }
    set.build_cache(model);
    return set;
}

} // namespace pbounds
