#pragma once

#include "pbounds/belief.hpp"
#include "pbounds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pbounds {

/// Pr(s', o | s, a) for a fixed (s, a, o), together with Pr(o | s, a).
struct ObservationOutcome {
    int observation = 0;
    double probability = 0.0;   ///< Pr(o | s, a)
    SparseVector joint;         ///< s' -> Pr(s', o | s, a)
};

/**
 * Finite discrete POMDP with sparse transition and observation kernels.
 *
 * Transition rows are indexed by (s, a), observation rows by (a, s'), rewards
 * are R(s, a). The joint outcome table Pr(s', o | s, a) grouped by o is built
 * once at construction, since every bound and the solver iterate over it.
 * Immutable after construction.
 */
class PomdpModel {
public:
    static constexpr double kRowTolerance = 1e-9;

    struct Names {
        std::vector<std::string> states;
        std::vector<std::string> actions;
        std::vector<std::string> observations;
    };

    PomdpModel(int num_states, int num_actions, int num_observations,
               std::vector<SparseVector> transition, std::vector<SparseVector> observation,
               std::vector<double> reward, double discount, Belief initial_belief,
               Names names = {})
        : S_(num_states), A_(num_actions), O_(num_observations),
          transition_(std::move(transition)), observation_(std::move(observation)),
          reward_(std::move(reward)), discount_(discount),
          initial_(std::move(initial_belief)), names_(std::move(names)) {
        validate();
        build_outcomes();
    }

    int num_states() const noexcept { return S_; }
    int num_actions() const noexcept { return A_; }
    int num_observations() const noexcept { return O_; }
    double discount() const noexcept { return discount_; }
    const Belief& initial_belief() const noexcept { return initial_; }
    const Names& names() const noexcept { return names_; }

    std::span<const SparseEntry> transition(int s, int a) const {
        return transition_[row(s, a)];
    }
    std::span<const SparseEntry> observation(int a, int next_state) const {
        return observation_[static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(next_state)];
    }
    double reward(int s, int a) const { return reward_[row(s, a)]; }

    double transition_probability(int s, int a, int next_state) const {
        return lookup(transition(s, a), next_state);
    }
    double observation_probability(int a, int next_state, int o) const {
        return lookup(observation(a, next_state), o);
    }

    /// Observations with Pr(o | s, a) > 0, sorted by observation index.
    std::span<const ObservationOutcome> outcomes(int s, int a) const {
        return outcomes_[row(s, a)];
    }

    double max_reward() const { return *std::max_element(reward_.begin(), reward_.end()); }
    double min_reward() const { return *std::min_element(reward_.begin(), reward_.end()); }

    std::string state_name(int s) const { return name_or_index(names_.states, s); }
    std::string action_name(int a) const { return name_or_index(names_.actions, a); }
    std::string observation_name(int o) const { return name_or_index(names_.observations, o); }

    void check_state(int s) const {
        if (s < 0 || s >= S_) throw UsageError("state index out of range: " + std::to_string(s));
    }
    void check_action(int a) const {
        if (a < 0 || a >= A_) throw UsageError("action index out of range: " + std::to_string(a));
    }
    void check_observation(int o) const {
        if (o < 0 || o >= O_)
            throw UsageError("observation index out of range: " + std::to_string(o));
    }

private:
    std::size_t row(int s, int a) const {
        return static_cast<std::size_t>(s) * A_ + static_cast<std::size_t>(a);
    }

    static double lookup(std::span<const SparseEntry> v, int index) {
        auto it = std::lower_bound(v.begin(), v.end(), index,
                                   [](const SparseEntry& e, int i) { return e.index < i; });
        return (it != v.end() && it->index == index) ? it->value : 0.0;
    }

    static std::string name_or_index(const std::vector<std::string>& names, int i) {
        return i < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(i)]
                                                  : std::to_string(i);
    }

    static void check_row(const SparseVector& v, int bound, const std::string& what) {
        double total = 0.0;
        int prev = -1;
        for (const auto& e : v) {
            if (e.index < 0 || e.index >= bound) throw ModelError(what + ": index out of range");
            if (e.index <= prev) throw ModelError(what + ": entries not sorted or duplicated");
            if (!(e.value > 0.0) || e.value > 1.0 + kRowTolerance)
                throw ModelError(what + ": probability outside (0, 1]");
            prev = e.index;
            total += e.value;
        }
        if (std::abs(total - 1.0) > kRowTolerance)
            throw ModelError(what + ": row sums to " + std::to_string(total));
    }

    void validate() const {
        if (S_ <= 0 || A_ <= 0 || O_ <= 0) throw ModelError("model: empty state, action or observation space");
        if (!(discount_ > 0.0 && discount_ < 1.0)) throw ModelError("model: discount must lie in (0, 1)");
        const auto SA = static_cast<std::size_t>(S_) * static_cast<std::size_t>(A_);
        if (transition_.size() != SA || reward_.size() != SA || observation_.size() != SA)
            throw ModelError("model: kernel dimensions do not match |S| x |A|");
        for (int s = 0; s < S_; ++s)
            for (int a = 0; a < A_; ++a)
                check_row(transition_[row(s, a)], S_,
                          "T(. | " + std::to_string(s) + ", " + std::to_string(a) + ")");
        for (int a = 0; a < A_; ++a)
            for (int sp = 0; sp < S_; ++sp)
                check_row(observation_[static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(sp)], O_,
                          "O(. | " + std::to_string(a) + ", " + std::to_string(sp) + ")");
        for (double r : reward_)
            if (!std::isfinite(r)) throw ModelError("model: non-finite reward");
        if (initial_.empty()) throw ModelError("model: missing initial belief");
        for (const auto& e : initial_.entries())
            if (e.index >= S_) throw ModelError("model: initial belief outside state space");
    }

    void build_outcomes() {
        outcomes_.resize(static_cast<std::size_t>(S_) * A_);
        std::vector<SparseVector> by_obs(static_cast<std::size_t>(O_));
        std::vector<int> touched;
        for (int s = 0; s < S_; ++s) {
            for (int a = 0; a < A_; ++a) {
                touched.clear();
                for (const auto& t : transition(s, a)) {
                    for (const auto& z : observation(a, t.index)) {
                        auto& bucket = by_obs[static_cast<std::size_t>(z.index)];
                        if (bucket.empty()) touched.push_back(z.index);
                        bucket.push_back({t.index, t.value * z.value});
                    }
                }
                std::sort(touched.begin(), touched.end());
                auto& out = outcomes_[row(s, a)];
                for (int o : touched) {
                    auto& bucket = by_obs[static_cast<std::size_t>(o)];
                    ObservationOutcome oc;
                    oc.observation = o;
                    oc.joint = canonicalize(std::move(bucket));
                    bucket.clear();
                    for (const auto& e : oc.joint) oc.probability += e.value;
                    if (oc.probability > 0.0) out.push_back(std::move(oc));
                }
            }
        }
    }

    int S_, A_, O_;
    std::vector<SparseVector> transition_;
    std::vector<SparseVector> observation_;
    std::vector<double> reward_;
    double discount_;
    Belief initial_;
    Names names_;
    std::vector<std::vector<ObservationOutcome>> outcomes_;
};

/// Pr(s', o | s, a) = O(o | a, s') T(s' | s, a).
inline double joint_probability(const PomdpModel& m, int s, int a, int next_state, int o) {
    m.check_state(s);
    m.check_action(a);
    m.check_state(next_state);
    m.check_observation(o);
    return m.observation_probability(a, next_state, o) * m.transition_probability(s, a, next_state);
}

/// R(b, a) = sum_s b(s) R(s, a).
inline double expected_reward(const PomdpModel& m, const Belief& b, int a) {
    m.check_action(a);
    double r = 0.0;
    for (const auto& e : b.entries()) r += e.value * m.reward(e.index, a);
    return r;
}

/// Unnormalized posterior s' -> Pr(s', o | b, a); empty when o is unreachable.
inline SparseVector joint_successor_mass(const PomdpModel& m, const Belief& b, int a, int o) {
    SparseVector mass;
    for (const auto& e : b.entries()) {
        for (const auto& oc : m.outcomes(e.index, a)) {
            if (oc.observation != o) continue;
            for (const auto& j : oc.joint) mass.push_back({j.index, e.value * j.value});
        }
    }
    return canonicalize(std::move(mass));
}

/// Pr(o | b, a) = sum_{s'} Pr(s', o | b, a).
inline double observation_probability(const PomdpModel& m, const Belief& b, int a, int o) {
    m.check_action(a);
    m.check_observation(o);
    double p = 0.0;
    for (const auto& e : b.entries())
        for (const auto& oc : m.outcomes(e.index, a))
            if (oc.observation == o) p += e.value * oc.probability;
    return p;
}

/// Posterior belief after taking `a` in `b` and observing `o`.
inline Belief belief_update(const PomdpModel& m, const Belief& b, int a, int o) {
    m.check_action(a);
    m.check_observation(o);
    auto mass = joint_successor_mass(m, b, a, o);
    if (mass.empty())
        throw UnreachableObservation("observation " + m.observation_name(o) +
                                     " has probability zero after action " + m.action_name(a));
    return Belief::normalized(std::move(mass));
}

/// One reachable observation of a belief-action pair with its posterior.
struct ObservationBranch {
    int observation = 0;
    double probability = 0.0;
    Belief posterior;
};

/// All observations with Pr(o | b, a) > 0, sorted by observation index.
inline std::vector<ObservationBranch> observation_branches(const PomdpModel& m, const Belief& b, int a) {
    m.check_action(a);
    std::vector<SparseVector> by_obs(static_cast<std::size_t>(m.num_observations()));
    std::vector<int> touched;
    for (const auto& e : b.entries()) {
        for (const auto& oc : m.outcomes(e.index, a)) {
            auto& bucket = by_obs[static_cast<std::size_t>(oc.observation)];
            if (bucket.empty()) touched.push_back(oc.observation);
            for (const auto& j : oc.joint) bucket.push_back({j.index, e.value * j.value});
        }
    }
    std::sort(touched.begin(), touched.end());
    std::vector<ObservationBranch> out;
    out.reserve(touched.size());
    for (int o : touched) {
        auto mass = canonicalize(std::move(by_obs[static_cast<std::size_t>(o)]));
        double p = 0.0;
        for (const auto& e : mass) p += e.value;
        if (!(p > 0.0)) continue;
        out.push_back({o, p, Belief::normalized(std::move(mass))});
    }
    return out;
}

} // namespace pbounds
