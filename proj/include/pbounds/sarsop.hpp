#pragma once

#include "pbounds/belief.hpp"
#include "pbounds/informed_bounds.hpp"
#include "pbounds/model.hpp"
#include "pbounds/point_set.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace pbounds {

/// Lower-bound hyperplane over beliefs, certified by `action`.
struct AlphaVector {
    std::vector<double> values;
    int action = 0;

    double dot(const Belief& b) const {
        double v = 0.0;
        for (const auto& e : b.entries()) v += e.value * values[static_cast<std::size_t>(e.index)];
        return v;
    }
};

struct SolverConfig {
    double epsilon = 1e-3;               ///< target relative gap at b0
    double timeout = 60.0;               ///< wall-clock seconds, bound precomputation included
    int schedule_horizon = 1000;         ///< N of the planning-precision schedule
    BoundKind init_bound = BoundKind::fib;
    BoundConfig bound_config{};
    int prune_every = 10;
    std::vector<double> extra_checkpoints;   ///< trace times besides the 0.1 * 2^k grid

    void validate() const {
        if (!(epsilon > 0.0)) throw UsageError("solver config: epsilon must be positive");
        if (!(timeout > 0.0)) throw UsageError("solver config: timeout must be positive");
        if (schedule_horizon < 1) throw UsageError("solver config: schedule horizon must be at least 1");
        bound_config.validate();
    }
};

struct Checkpoint {
    double time = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double gap = 0.0;
};

struct SolveReport {
    double lower_value = 0.0;
    double upper_value = 0.0;
    double relative_gap = 0.0;
    double initial_upper = 0.0;   ///< upper bound at b0 before the first backup
    int iterations = 0;
    double seconds = 0.0;
    double init_seconds = 0.0;    ///< bound precomputation and lower-bound initialization
    bool converged = false;
    std::size_t alpha_count = 0;
    std::size_t point_count = 0;
    std::vector<Checkpoint> trace;
};

/// (U - L) / max(|L|, 1e-9).
inline double relative_gap(double lower, double upper) {
    return (upper - lower) / std::max(std::abs(lower), 1e-9);
}

/// Latest report published by a running solver; safe to read from another thread.
class SolverMonitor {
public:
    SolveReport snapshot() const {
        std::lock_guard lock(mutex_);
        return report_;
    }
    void publish(const SolveReport& r) {
        std::lock_guard lock(mutex_);
        report_ = r;
    }

private:
    mutable std::mutex mutex_;
    SolveReport report_;
};

/// For each action, the value of repeating it forever, iterated upward from R_min / (1 - gamma).
inline std::vector<AlphaVector> blind_policy_alphas(const PomdpModel& m, double tolerance = 1e-10,
                                                    int max_sweeps = 100000) {
    const int S = m.num_states();
    const double g = m.discount();
    std::vector<AlphaVector> out;
    for (int a = 0; a < m.num_actions(); ++a) {
        AlphaVector alpha{std::vector<double>(static_cast<std::size_t>(S), m.min_reward() / (1.0 - g)), a};
        std::vector<double> next(static_cast<std::size_t>(S));
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double change = 0.0;
            for (int s = 0; s < S; ++s) {
                double v = m.reward(s, a);
                for (const auto& t : m.transition(s, a)) v += g * t.value * alpha.values[static_cast<std::size_t>(t.index)];
                next[static_cast<std::size_t>(s)] = v;
                change = std::max(change, std::abs(v - alpha.values[static_cast<std::size_t>(s)]));
            }
            alpha.values.swap(next);
            if (change < tolerance) break;
        }
        out.push_back(std::move(alpha));
    }
    return out;
}

inline double lower_value(std::span<const AlphaVector> alphas, const Belief& b) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : alphas) best = std::max(best, a.dot(b));
    return best;
}

/// Point-based backup at b: the best per-action vector built from the alphas maximizing each posterior.
inline AlphaVector backup_alpha(const PomdpModel& m, std::span<const AlphaVector> alphas, const Belief& b) {
    if (alphas.empty()) throw UsageError("backup_alpha: empty alpha set");
    const int S = m.num_states();
    const double g = m.discount();
    AlphaVector best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < m.num_actions(); ++a) {
        std::vector<const AlphaVector*> chosen(static_cast<std::size_t>(m.num_observations()), &alphas[0]);
        for (const auto& br : observation_branches(m, b, a)) {
            const AlphaVector* arg = &alphas[0];
            double v = -std::numeric_limits<double>::infinity();
            for (const auto& alpha : alphas) {
                const double d = alpha.dot(br.posterior);
                if (d > v) {
                    v = d;
                    arg = &alpha;
                }
            }
            chosen[static_cast<std::size_t>(br.observation)] = arg;
        }
        AlphaVector cand{std::vector<double>(static_cast<std::size_t>(S)), a};
        for (int s = 0; s < S; ++s) {
            double v = m.reward(s, a);
            for (const auto& oc : m.outcomes(s, a)) {
                const auto& alpha = *chosen[static_cast<std::size_t>(oc.observation)];
                for (const auto& j : oc.joint) v += g * j.value * alpha.values[static_cast<std::size_t>(j.index)];
            }
            cand.values[static_cast<std::size_t>(s)] = v;
        }
        const double v = cand.dot(b);
        if (v > best_value) {
            best_value = v;
            best = std::move(cand);
        }
    }
    return best;
}

/// R(b,a) + gamma sum_o Pr(o|b,a) U(b_{b,a,o}) with U the sawtooth bound.
inline double upper_q(const UpperBoundSet& ub, const PomdpModel& m, const Belief& b, int a) {
    double future = 0.0;
    for (const auto& br : observation_branches(m, b, a)) future += br.probability * ub.value(br.posterior);
    return expected_reward(m, b, a) + m.discount() * future;
}

/// Bellman update of the upper bound at b; stores and returns the improved value.
inline double update_upper(UpperBoundSet& ub, const PomdpModel& m, const Belief& b) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < m.num_actions(); ++a) best = std::max(best, upper_q(ub, m, b, a));
    const double current = ub.value(b);
    if (best < current) {
        ub.insert(b, best);
        return best;
    }
    return current;
}

/// Keeps only alphas that are maximal at one of the witness beliefs.
inline std::vector<AlphaVector> prune_alphas(std::vector<AlphaVector> alphas, std::span<const Belief> witnesses) {
    std::vector<bool> keep(alphas.size(), false);
    for (const auto& b : witnesses) {
        std::size_t arg = 0;
        double v = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            const double d = alphas[k].dot(b);
            if (d > v) {
                v = d;
                arg = k;
            }
        }
        if (!alphas.empty()) keep[arg] = true;
    }
    std::vector<AlphaVector> out;
    for (std::size_t k = 0; k < alphas.size(); ++k)
        if (keep[k]) out.push_back(std::move(alphas[k]));
    return out;
}

namespace detail {

class PointBasedSolver {
public:
    using Clock = std::chrono::steady_clock;

    PointBasedSolver(std::shared_ptr<const PomdpModel> model, const SolverConfig& config, SolverMonitor* monitor)
        : model_(std::move(model)), m_(*model_), config_(config), monitor_(monitor), start_(Clock::now()) {}

    SolveReport run() {
        config_.validate();
        InformedBounds bounds(model_, config_.bound_config);
        ub_ = UpperBoundSet(bounds.corner_values(config_.init_bound));
        alphas_ = blind_policy_alphas(m_);
        const Belief& b0 = m_.initial_belief();
        report_.initial_upper = ub_.value(b0);
        report_.init_seconds = elapsed();
        max_depth_ = depth_guard(report_.initial_upper);

        refresh(b0);
        build_checkpoints();
        while (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] < report_.init_seconds)
            ++next_checkpoint_;
        record_until(elapsed());
        publish();

        int i = 0;
        while (!report_.converged && elapsed() < config_.timeout) {
            const double eps_p = std::max(config_.epsilon, 1.0 - static_cast<double>(i) / config_.schedule_horizon);
            explore(eps_p * std::max(std::abs(report_.lower_value), 1e-9));
            ++i;
            report_.iterations = i;
            if (config_.prune_every > 0 && i % config_.prune_every == 0) prune();
            const double now = elapsed();
            record_until(now);
            refresh(b0);
            publish();
        }
        // The state reached persists until the budget ends.
        record_until(config_.timeout);
        report_.seconds = elapsed();
        publish();
        return report_;
    }

private:
    void build_checkpoints() {
        for (int k = 0; 0.1 * std::ldexp(1.0, k) <= config_.timeout; ++k) checkpoints_.push_back(0.1 * std::ldexp(1.0, k));
        for (double t : config_.extra_checkpoints)
            if (t > 0.0 && t <= config_.timeout) checkpoints_.push_back(t);
        std::sort(checkpoints_.begin(), checkpoints_.end());
        checkpoints_.erase(std::unique(checkpoints_.begin(), checkpoints_.end()), checkpoints_.end());
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

    int depth_guard(double upper0) const {
        const double g = m_.discount();
        double range = m_.max_reward() - m_.min_reward();
        if (!(range > 0.0)) range = 1.0;
        const double x = config_.epsilon * (1.0 - g) * std::max(1.0, std::abs(upper0)) / range;
        if (x >= 1.0) return 1;
        return std::max(1, static_cast<int>(std::ceil(std::log(x) / std::log(g))));
    }

    void refresh(const Belief& b0) {
        report_.lower_value = lower_value(alphas_, b0);
        report_.upper_value = ub_.value(b0);
        report_.relative_gap = relative_gap(report_.lower_value, report_.upper_value);
        report_.converged = report_.relative_gap <= config_.epsilon;
        report_.alpha_count = alphas_.size();
        report_.point_count = ub_.points().size();
    }

    Checkpoint current_checkpoint(double t) const {
        return {t, report_.lower_value, report_.upper_value, report_.relative_gap};
    }

    /// Grid times passed before `now` see the bounds as they were before the last iteration finished.
    void record_until(double now) {
        while (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] <= now) {
            report_.trace.push_back(current_checkpoint(checkpoints_[next_checkpoint_]));
            ++next_checkpoint_;
        }
    }

    void publish() {
        if (monitor_) {
            report_.seconds = elapsed();
            monitor_->publish(report_);
        }
    }

    double gap(const Belief& b) const { return ub_.value(b) - lower_value(alphas_, b); }

    void explore(double root_target) {
        const double g = m_.discount();
        std::vector<Belief> path;
        Belief b = m_.initial_belief();
        double target = root_target;
        for (int depth = 0; depth < max_depth_; ++depth) {
            if (gap(b) <= target) break;
            path.push_back(b);
            int best_a = 0;
            double best_q = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < m_.num_actions(); ++a) {
                const double q = upper_q(ub_, m_, b, a);
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            target /= g;
            double best_score = -std::numeric_limits<double>::infinity();
            const Belief* next = nullptr;
            auto branches = observation_branches(m_, b, best_a);
            for (const auto& br : branches) {
                const double score = br.probability * (gap(br.posterior) - target);
                if (score > best_score) {
                    best_score = score;
                    next = &br.posterior;
                }
            }
            if (!next || best_score <= 0.0) break;
            b = *next;
        }
        if (path.empty()) path.push_back(m_.initial_belief());
        for (auto it = path.rbegin(); it != path.rend(); ++it) backup(*it);
    }

    void backup(const Belief& b) {
        update_upper(ub_, m_, b);
        auto alpha = backup_alpha(m_, alphas_, b);
        if (alpha.dot(b) > lower_value(alphas_, b) + 1e-12) alphas_.push_back(std::move(alpha));
    }

    void prune() {
        ub_.prune();
        std::vector<Belief> witnesses;
        witnesses.push_back(m_.initial_belief());
        for (const auto& p : ub_.points()) witnesses.push_back(p.belief);
        for (int s = 0; s < m_.num_states(); ++s) witnesses.push_back(Belief::unit(s));
        alphas_ = prune_alphas(std::move(alphas_), witnesses);
    }

    std::shared_ptr<const PomdpModel> model_;
    const PomdpModel& m_;
    SolverConfig config_;
    SolverMonitor* monitor_;
    Clock::time_point start_;
    UpperBoundSet ub_;
    std::vector<AlphaVector> alphas_;
    SolveReport report_;
    int max_depth_ = 1;
    std::vector<double> checkpoints_;
    std::size_t next_checkpoint_ = 0;
};

} // namespace detail

/**
 * Gap-directed point-based solver. The upper bound starts from the corner
 * values of the chosen informed bound and is refined by sawtooth points; the
 * lower bound starts from blind-policy alpha vectors. Runs until the relative
 * gap at b0 reaches epsilon or the timeout expires.
 */
inline SolveReport solve(std::shared_ptr<const PomdpModel> model, const SolverConfig& config,
                         SolverMonitor* monitor = nullptr) {
    return detail::PointBasedSolver(std::move(model), config, monitor).run();
}

} // namespace pbounds
