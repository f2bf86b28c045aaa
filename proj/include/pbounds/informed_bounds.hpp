#pragma once

#include "pbounds/belief_set.hpp"
#include "pbounds/errors.hpp"
#include "pbounds/lp.hpp"
#include "pbounds/model.hpp"
#include "pbounds/parallel.hpp"
#include "pbounds/point_set.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbounds {

enum class BoundKind { qmdp, fib, tib, otib, etib, ctib };

inline constexpr std::array<BoundKind, 6> kAllBounds = {BoundKind::qmdp, BoundKind::fib, BoundKind::tib,
                                                       BoundKind::otib, BoundKind::etib, BoundKind::ctib};

inline std::string_view to_string(BoundKind k) {
    switch (k) {
    case BoundKind::qmdp: return "qmdp";
    case BoundKind::fib: return "fib";
    case BoundKind::tib: return "tib";
    case BoundKind::otib: return "otib";
    case BoundKind::etib: return "etib";
    case BoundKind::ctib: return "ctib";
    }
    return "?";
}

inline std::optional<BoundKind> parse_bound_kind(std::string_view name) {
    for (auto k : kAllBounds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

/// True for bounds whose table lives on the one-step belief set.
inline bool uses_one_step_set(BoundKind k) { return k != BoundKind::qmdp && k != BoundKind::fib; }

struct BoundConfig {
    double epsilon = 1e-3;
    int max_iterations = 250;
    bool reuse_weights = true;   ///< ETIB/CTIB: keep weights fixed across iterations
    unsigned threads = 0;        ///< 0 picks the hardware concurrency

    void validate() const {
        if (!(epsilon > 0.0)) throw UsageError("bound config: epsilon must be positive");
        if (max_iterations < 1) throw UsageError("bound config: max_iterations must be at least 1");
    }
};

class BellmanOperator;

/// Bound values over a point set, values[i * num_actions + a].
struct QTable {
    std::shared_ptr<const BeliefSet> point_set;
    std::shared_ptr<const BellmanOperator> op;
    int num_actions = 0;
    std::vector<double> values;
    BoundKind kind = BoundKind::qmdp;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double discount = 0.0;
    double seconds = 0.0;

    double at(int i, int a) const {
        return values[static_cast<std::size_t>(i) * num_actions + static_cast<std::size_t>(a)];
    }
    std::span<const double> row(int i) const {
        return std::span<const double>(values).subspan(static_cast<std::size_t>(i) * num_actions,
                                                       static_cast<std::size_t>(num_actions));
    }
    double max_value(int i) const {
        auto r = row(i);
        return *std::max_element(r.begin(), r.end());
    }
};

/**
 * One of the Bellman operators, bound to a model and the point set its
 * tables are defined on. `q` arguments are table values laid out as in QTable.
 */
class BellmanOperator {
public:
    BellmanOperator(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const BeliefSet> set)
        : model_(std::move(model)), set_(std::move(set)) {}
    virtual ~BellmanOperator() = default;

    virtual BoundKind kind() const = 0;

    /// (H q)(b_i, a) for a stored belief.
    virtual double backup_member(std::span<const double> q, int i, int a) const = 0;

    /// (H q)(b, a) for an arbitrary belief.
    virtual double backup(std::span<const double> q, const Belief& b, int a) const = 0;

    /// next = H q on every (member, action), each entry reading only q.
    virtual void sweep(std::span<const double> q, std::span<double> next, unsigned threads) const {
        const int A = model_->num_actions();
        parallel_for(set_->size(), threads, [&](std::size_t i) {
            for (int a = 0; a < A; ++a)
                next[i * static_cast<std::size_t>(A) + static_cast<std::size_t>(a)] =
                    backup_member(q, static_cast<int>(i), a);
        });
    }

    const PomdpModel& model() const noexcept { return *model_; }
    const BeliefSet& point_set() const noexcept { return *set_; }
    std::shared_ptr<const PomdpModel> model_ptr() const noexcept { return model_; }
    std::shared_ptr<const BeliefSet> point_set_ptr() const noexcept { return set_; }

protected:
    double q_at(std::span<const double> q, int i, int a) const {
        return q[static_cast<std::size_t>(i) * model_->num_actions() + static_cast<std::size_t>(a)];
    }

    std::shared_ptr<const PomdpModel> model_;
    std::shared_ptr<const BeliefSet> set_;
};

/// Q over unit beliefs: R(b,a) + gamma sum_{s'} Pr(s'|b,a) max_{a'} Q(b_{s'},a').
class QmdpOperator final : public BellmanOperator {
public:
    using BellmanOperator::BellmanOperator;
    BoundKind kind() const override { return BoundKind::qmdp; }

    double backup_member(std::span<const double> q, int i, int a) const override {
        return backup(q, set_->belief(i), a);
    }

    double backup(std::span<const double> q, const Belief& b, int a) const override {
        const auto& m = *model_;
        double future = 0.0;
        for (const auto& e : b.entries())
            for (const auto& t : m.transition(e.index, a))
                future += e.value * t.value * state_max(q, t.index);
        return expected_reward(m, b, a) + m.discount() * future;
    }

private:
    double state_max(std::span<const double> q, int s) const {
        const int i = set_->unit_index(s);
        double v = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < model_->num_actions(); ++a) v = std::max(v, q_at(q, i, a));
        return v;
    }
};

/// Q over unit beliefs: R(b,a) + gamma sum_o max_{a'} sum_{s'} Pr(o,s'|b,a) Q(b_{s'},a').
class FibOperator final : public BellmanOperator {
public:
    using BellmanOperator::BellmanOperator;
    BoundKind kind() const override { return BoundKind::fib; }

    double backup_member(std::span<const double> q, int i, int a) const override {
        return backup(q, set_->belief(i), a);
    }

    double backup(std::span<const double> q, const Belief& b, int a) const override {
        const auto& m = *model_;
        const int A = m.num_actions();
        std::map<int, std::vector<double>> by_obs;
        for (const auto& e : b.entries()) {
            for (const auto& oc : m.outcomes(e.index, a)) {
                auto& acc = by_obs[oc.observation];
                if (acc.empty()) acc.assign(static_cast<std::size_t>(A), 0.0);
                for (const auto& j : oc.joint) {
                    const int u = set_->unit_index(j.index);
                    for (int ap = 0; ap < A; ++ap)
                        acc[static_cast<std::size_t>(ap)] += e.value * j.value * q_at(q, u, ap);
                }
            }
        }
        double future = 0.0;
        for (const auto& [o, acc] : by_obs) future += *std::max_element(acc.begin(), acc.end());
        return expected_reward(m, b, a) + m.discount() * future;
    }
};

/// Shared machinery of the operators over the one-step set.
class TwoStepOperator : public BellmanOperator {
public:
    TwoStepOperator(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const BeliefSet> set)
        : BellmanOperator(std::move(model), std::move(set)) {
        if (!set_->has_successor_cache())
            throw UsageError("two-step bounds need the one-step belief set with successor cache");
    }

    double backup_member(std::span<const double> q, int i, int a) const override {
        double future = 0.0;
        for (const auto& br : set_->branches(i, a)) future += branch_value(q, br.probability, br.tib_weights, br.posterior, nullptr);
        return set_->expected_reward(i, a) + model_->discount() * future;
    }

    double backup(std::span<const double> q, const Belief& b, int a) const override {
        const auto& m = *model_;
        auto canonical = tib_branches(m, *set_, b, a);
        std::vector<ObservationBranch> posts;
        if (needs_posterior()) posts = observation_branches(m, b, a);
        double future = 0.0;
        for (std::size_t k = 0; k < canonical.size(); ++k) {
            const Belief* post = needs_posterior() ? &posts[k].posterior : nullptr;
            int pid = -1;
            if (post) {
                if (auto found = set_->find_posterior(*post)) pid = *found;
            }
            future += branch_value(q, canonical[k].probability, canonical[k].weights, pid, post);
        }
        return expected_reward(m, b, a) + m.discount() * future;
    }

protected:
    virtual bool needs_posterior() const { return false; }

    /// max_{a'} Pr(o|b,a) * (weighted value of the posterior under action a').
    /// `pid` indexes the cached posterior table, or is -1 with `post` set for an uncached posterior.
    virtual double branch_value(std::span<const double> q, double prob, const SparseVector& canonical, int pid,
                                const Belief* post) const = 0;

    double weighted(std::span<const double> q, const SparseVector& w, int a) const {
        double v = 0.0;
        for (const auto& e : w) v += e.value * q_at(q, e.index, a);
        return v;
    }

    double best_weighted(std::span<const double> q, const SparseVector& w) const {
        double best = -std::numeric_limits<double>::infinity();
        for (int ap = 0; ap < model_->num_actions(); ++ap) best = std::max(best, weighted(q, w, ap));
        return best;
    }
};

/// Canonical weights w_{b,a,o}: R(b,a) + gamma sum_o max_{a'} sum_s b(s) Pr(o|s,a) Q(b_{s,a,o},a').
class TibOperator final : public TwoStepOperator {
public:
    using TwoStepOperator::TwoStepOperator;
    BoundKind kind() const override { return BoundKind::tib; }

protected:
    double branch_value(std::span<const double> q, double prob, const SparseVector& canonical, int,
                        const Belief*) const override {
        return prob * best_weighted(q, canonical);
    }
};

/// Weights fixed per posterior (ETIB: maximal entropy, CTIB: closest belief plus unit residual).
class FixedWeightOperator : public TwoStepOperator {
public:
    FixedWeightOperator(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const BeliefSet> set,
                        bool reuse_weights, unsigned threads)
        : TwoStepOperator(std::move(model), std::move(set)), reuse_(reuse_weights), threads_(threads) {}

    /// Frozen weights for cached posterior p; empty optional when the fallback is used.
    const std::optional<WeightFunction>& weights(int p) const { return weights_[static_cast<std::size_t>(p)]; }

protected:
    void precompute() {
        weights_.assign(set_->num_posteriors(), std::nullopt);
        if (!reuse_) return;
        parallel_for(set_->num_posteriors(), threads_, [&](std::size_t p) {
            weights_[p] = compute(set_->posterior(static_cast<int>(p)),
                                  set_->posterior_candidates(static_cast<int>(p)));
        });
    }

    virtual std::optional<WeightFunction> compute(const Belief& post, std::span<const int> candidates) const = 0;

    bool needs_posterior() const override { return true; }

    double branch_value(std::span<const double> q, double prob, const SparseVector& canonical, int pid,
                        const Belief* post) const override {
        std::optional<WeightFunction> fresh;
        const std::optional<WeightFunction>* w = nullptr;
        if (pid >= 0 && reuse_) {
            w = &weights_[static_cast<std::size_t>(pid)];
        } else {
            const Belief& target = post ? *post : set_->posterior(pid);
            if (pid >= 0)
                fresh = compute(target, set_->posterior_candidates(pid));
            else
                fresh = compute(target, set_->members_within_support(target));
            w = &fresh;
        }
        return prob * best_weighted(q, *w ? (*w)->weights : canonical);
    }

    bool reuse_;
    unsigned threads_;
    std::vector<std::optional<WeightFunction>> weights_;
};

/// Maximal-entropy weights sum_{b'} H(b') w(b') over the whole point set, solved once per posterior.
class EtibOperator final : public FixedWeightOperator {
public:
    EtibOperator(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const BeliefSet> set,
                 bool reuse_weights = true, unsigned threads = 0)
        : FixedWeightOperator(std::move(model), std::move(set), reuse_weights, threads) {
        entropy_.reserve(set_->size());
        for (const auto& b : set_->beliefs()) entropy_.push_back(belief_entropy(b));
        precompute();
    }
    BoundKind kind() const override { return BoundKind::etib; }

protected:
    std::optional<WeightFunction> compute(const Belief& post, std::span<const int> candidates) const override {
        return weight_lp(set_->beliefs(), candidates, post, entropy_, Sense::maximize);
    }

private:
    std::vector<double> entropy_;
};

/// Closest-belief weights (largest minimum ratio) with the residual on unit beliefs.
class CtibOperator final : public FixedWeightOperator {
public:
    CtibOperator(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const BeliefSet> set,
                 bool reuse_weights = true, unsigned threads = 0)
        : FixedWeightOperator(std::move(model), std::move(set), reuse_weights, threads) {
        precompute();
    }
    BoundKind kind() const override { return BoundKind::ctib; }

protected:
    std::optional<WeightFunction> compute(const Belief& post, std::span<const int> candidates) const override {
        return ctib_weights(*set_, candidates, post);
    }
};

/**
 * Minimal point-set bound: per posterior and next action, the weight LP
 * minimizing sum w(b') Q(b', a'). The canonical weights are always feasible,
 * so the value is capped by theirs; a failed LP leaves the canonical value.
 */
class OtibOperator final : public TwoStepOperator {
public:
    using TwoStepOperator::TwoStepOperator;
    BoundKind kind() const override { return BoundKind::otib; }

    void sweep(std::span<const double> q, std::span<double> next, unsigned threads) const override {
        const int A = model_->num_actions();
        const auto P = set_->num_posteriors();
        std::vector<std::vector<double>> columns = action_columns(q);
        std::vector<double> minima(P * static_cast<std::size_t>(A));
        parallel_for(P, threads, [&](std::size_t p) {
            for (int ap = 0; ap < A; ++ap)
                minima[p * A + ap] = lp_min(columns[static_cast<std::size_t>(ap)], set_->posterior(static_cast<int>(p)),
                                            set_->posterior_candidates(static_cast<int>(p)));
        });
        parallel_for(set_->size(), threads, [&](std::size_t i) {
            for (int a = 0; a < A; ++a) {
                double future = 0.0;
                for (const auto& br : set_->branches(static_cast<int>(i), a)) {
                    double best = -std::numeric_limits<double>::infinity();
                    for (int ap = 0; ap < A; ++ap)
                        best = std::max(best, std::min(minima[static_cast<std::size_t>(br.posterior) * A + ap],
                                                       weighted(q, br.tib_weights, ap)));
                    future += br.probability * best;
                }
                next[i * A + a] = set_->expected_reward(static_cast<int>(i), a) + model_->discount() * future;
            }
        });
    }

protected:
    bool needs_posterior() const override { return true; }

    double branch_value(std::span<const double> q, double prob, const SparseVector& canonical, int pid,
                        const Belief* post) const override {
        const Belief& target = post ? *post : set_->posterior(pid);
        std::vector<int> own;
        std::span<const int> candidates;
        if (pid >= 0) {
            candidates = set_->posterior_candidates(pid);
        } else {
            own = set_->members_within_support(target);
            candidates = own;
        }
        auto columns = action_columns(q);
        double best = -std::numeric_limits<double>::infinity();
        for (int ap = 0; ap < model_->num_actions(); ++ap)
            best = std::max(best, std::min(lp_min(columns[static_cast<std::size_t>(ap)], target, candidates),
                                           weighted(q, canonical, ap)));
        return prob * best;
    }

private:
    std::vector<std::vector<double>> action_columns(std::span<const double> q) const {
        const int A = model_->num_actions();
        std::vector<std::vector<double>> cols(static_cast<std::size_t>(A), std::vector<double>(set_->size()));
        for (std::size_t i = 0; i < set_->size(); ++i)
            for (int a = 0; a < A; ++a) cols[static_cast<std::size_t>(a)][i] = q[i * A + a];
        return cols;
    }

    double lp_min(const std::vector<double>& column, const Belief& target, std::span<const int> candidates) const {
        if (candidates.size() == 1) return column[static_cast<std::size_t>(candidates[0])];
        auto w = weight_lp(set_->beliefs(), candidates, target, column, Sense::minimize);
        if (!w) return std::numeric_limits<double>::infinity();
        double v = 0.0;
        for (const auto& e : w->weights) v += e.value * column[static_cast<std::size_t>(e.index)];
        return v;
    }
};

/// Maximal-entropy weight function for the cached posterior (b_i, a, o), or nullopt on fallback.
inline std::optional<WeightFunction> etib_weights(const EtibOperator& op, int i, int a, int o) {
    for (const auto& br : op.point_set().branches(i, a))
        if (br.observation == o) return op.weights(br.posterior);
    throw UnreachableObservation("etib weights: unreachable observation");
}

/**
 * Jacobi value iteration: every backup of a sweep reads the previous table.
 * Stops once gamma/(1-gamma) * max |Q'-Q| / max(|Q|, 1) < epsilon or after
 * max_iterations sweeps, and returns the last post-operator iterate.
 */
inline QTable value_iterate(std::shared_ptr<const BellmanOperator> op, const QTable& init, const BoundConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto& set = op->point_set();
    const int A = op->model().num_actions();
    const double g = op->model().discount();
    if (init.values.size() != set.size() * static_cast<std::size_t>(A))
        throw UsageError("value_iterate: initial table does not match the point set");
    std::vector<double> q = init.values;
    std::vector<double> next(q.size());
    QTable out;
    out.point_set = op->point_set_ptr();
    out.num_actions = A;
    out.kind = op->kind();
    out.discount = g;
    for (int it = 1; it <= config.max_iterations; ++it) {
        op->sweep(q, next, config.threads);
        double d = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k)
            d = std::max(d, std::abs(next[k] - q[k]) / std::max(std::abs(q[k]), 1.0));
        q.swap(next);
        out.iterations = it;
        out.residual = d;
        if (g / (1.0 - g) * d < config.epsilon) {
            out.converged = true;
            break;
        }
    }
    out.values = std::move(q);
    out.op = std::move(op);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// One operator application at an arbitrary belief, maximized over actions.
inline double query_bound(const QTable& table, const Belief& b) {
    if (!table.op) throw UsageError("query_bound: table has no operator");
    const auto& m = table.op->model();
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < m.num_actions(); ++a) best = std::max(best, table.op->backup(table.values, b, a));
    return best;
}

/// The per-action version of query_bound.
inline double query_bound(const QTable& table, const Belief& b, int a) {
    if (!table.op) throw UsageError("query_bound: table has no operator");
    table.op->model().check_action(a);
    return table.op->backup(table.values, b, a);
}

/// max_a sum_s b(s) Q(b_s, a) for tables over unit beliefs.
inline double unit_interpolation(const QTable& table, const Belief& b) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < table.num_actions; ++a) {
        double v = 0.0;
        for (const auto& e : b.entries()) v += e.value * table.at(table.point_set->unit_index(e.index), a);
        best = std::max(best, v);
    }
    return best;
}

/**
 * Computes bounds with their initialization chain:
 * QMDP from max R / (1 - gamma), FIB from QMDP, TIB/ETIB/CTIB from FIB
 * evaluated on the one-step set, OTIB from the pointwise minimum of TIB and ETIB.
 * Tables are computed on first request and cached.
 */
class InformedBounds {
public:
    explicit InformedBounds(std::shared_ptr<const PomdpModel> model, BoundConfig config = {})
        : model_(std::move(model)), config_(config) {
        config_.validate();
    }

    const PomdpModel& model() const noexcept { return *model_; }
    const BoundConfig& config() const noexcept { return config_; }

    const BeliefSet& unit_set() { return *units(); }
    const BeliefSet& one_step_set() { return *one_step(); }

    const QTable& table(BoundKind kind) {
        auto& slot = tables_[static_cast<std::size_t>(kind)];
        if (!slot) slot = compute(kind);
        return *slot;
    }

    /// Wall time of the table plus every table it was initialized from.
    double total_seconds(BoundKind kind) {
        table(kind);
        return chain_seconds_[static_cast<std::size_t>(kind)];
    }

    /// Bound at b0: interpolation for unit tables, the stored entry for one-step tables.
    double initial_value(BoundKind kind) {
        const auto& t = table(kind);
        if (!uses_one_step_set(kind)) return unit_interpolation(t, model_->initial_belief());
        return t.max_value(t.point_set->initial_index());
    }

    double query(BoundKind kind, const Belief& b) { return query_bound(table(kind), b); }

    /// max_a Q(b_s, a) for every state s.
    std::vector<double> corner_values(BoundKind kind) {
        const auto& t = table(kind);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(model_->num_states()));
        for (int s = 0; s < model_->num_states(); ++s) out.push_back(t.max_value(t.point_set->unit_index(s)));
        return out;
    }

private:
    using Clock = std::chrono::steady_clock;

    std::shared_ptr<const BeliefSet> units() {
        if (!units_) units_ = std::make_shared<const BeliefSet>(enumerate_unit_beliefs(*model_));
        return units_;
    }
    std::shared_ptr<const BeliefSet> one_step() {
        if (!one_step_) {
            const auto t0 = Clock::now();
            one_step_ = std::make_shared<const BeliefSet>(enumerate_one_step_beliefs(*model_));
            enumerate_seconds_ = std::chrono::duration<double>(Clock::now() - t0).count();
        }
        return one_step_;
    }

    std::shared_ptr<const BellmanOperator> make_operator(BoundKind kind) {
        switch (kind) {
        case BoundKind::qmdp: return std::make_shared<QmdpOperator>(model_, units());
        case BoundKind::fib: return std::make_shared<FibOperator>(model_, units());
        case BoundKind::tib: return std::make_shared<TibOperator>(model_, one_step());
        case BoundKind::otib: return std::make_shared<OtibOperator>(model_, one_step());
        case BoundKind::etib:
            return std::make_shared<EtibOperator>(model_, one_step(), config_.reuse_weights, config_.threads);
        case BoundKind::ctib:
            return std::make_shared<CtibOperator>(model_, one_step(), config_.reuse_weights, config_.threads);
        }
        throw UsageError("unknown bound kind");
    }

    QTable fib_on_one_step() {
        const auto& fib = table(BoundKind::fib);
        auto set = one_step();
        QTable init;
        init.point_set = set;
        init.num_actions = model_->num_actions();
        init.values.resize(set->size() * static_cast<std::size_t>(model_->num_actions()));
        parallel_for(set->size(), config_.threads, [&](std::size_t i) {
            for (int a = 0; a < model_->num_actions(); ++a)
                init.values[i * model_->num_actions() + a] = fib.op->backup(fib.values, set->belief(static_cast<int>(i)), a);
        });
        return init;
    }

    std::unique_ptr<QTable> compute(BoundKind kind) {
        auto chain = [&](BoundKind k) { return total_seconds(k); };
        double before = 0.0;
        switch (kind) {
        case BoundKind::qmdp: break;
        case BoundKind::fib: before = chain(BoundKind::qmdp); break;
        case BoundKind::tib:
        case BoundKind::etib:
        case BoundKind::ctib:
            before = chain(BoundKind::fib);
            one_step();
            before += enumerate_seconds_;
            break;
        case BoundKind::otib:
            before = chain(BoundKind::tib) + chain(BoundKind::etib) - chain(BoundKind::fib) - enumerate_seconds_;
            break;
        }
        const auto t0 = Clock::now();
        QTable init;
        switch (kind) {
        case BoundKind::qmdp: {
            auto set = units();
            init.point_set = set;
            init.num_actions = model_->num_actions();
            init.values.assign(set->size() * static_cast<std::size_t>(model_->num_actions()),
                               model_->max_reward() / (1.0 - model_->discount()));
            break;
        }
        case BoundKind::fib: init = table(BoundKind::qmdp); break;
        case BoundKind::tib:
        case BoundKind::etib:
        case BoundKind::ctib: init = fib_on_one_step(); break;
        case BoundKind::otib: {
            const auto& tib = table(BoundKind::tib);
            const auto& etib = table(BoundKind::etib);
            init = tib;
            for (std::size_t k = 0; k < init.values.size(); ++k)
                init.values[k] = std::min(tib.values[k], etib.values[k]);
            break;
        }
        }
        auto out = std::make_unique<QTable>(value_iterate(make_operator(kind), init, config_));
        out->seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        chain_seconds_[static_cast<std::size_t>(kind)] = before + out->seconds;
        return out;
    }

    std::shared_ptr<const PomdpModel> model_;
    BoundConfig config_;
    std::shared_ptr<const BeliefSet> units_;
    std::shared_ptr<const BeliefSet> one_step_;
    double enumerate_seconds_ = 0.0;
    std::array<std::unique_ptr<QTable>, 6> tables_;
    std::array<double, 6> chain_seconds_{};
};

} // namespace pbounds
