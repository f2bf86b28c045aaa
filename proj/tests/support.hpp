#pragma once
// Random instances and brute-force reference computations shared by the tests.

#include "pbounds/lp.hpp"
#include "pbounds/model.hpp"
#include "pbounds/sarsop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace pbounds::testing {

using Rng = std::mt19937_64;

/// Random distribution over n outcomes; each outcome is dropped with probability `sparsity` (at least one stays).
inline SparseVector random_distribution(Rng& rng, int n, double sparsity) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) {
        x = u(rng) < sparsity ? 0.0 : u(rng) + 0.05;
        total += x;
    }
    if (total == 0.0) {
        w[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1.0;
        total = 1.0;
    }
    SparseVector out;
    for (int i = 0; i < n; ++i)
        if (w[static_cast<std::size_t>(i)] > 0.0) out.push_back({i, w[static_cast<std::size_t>(i)] / total});
    return out;
}

inline PomdpModel random_model(Rng& rng, int S = 4, int A = 3, int O = 3, double gamma = 0.9,
                               double sparsity = 0.4) {
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    std::vector<SparseVector> T, Z;
    std::vector<double> R;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            T.push_back(random_distribution(rng, S, sparsity));
            R.push_back(r(rng));
        }
    for (int a = 0; a < A; ++a)
        for (int sp = 0; sp < S; ++sp) Z.push_back(random_distribution(rng, O, sparsity));
    return PomdpModel(S, A, O, std::move(T), std::move(Z), std::move(R), gamma,
                      Belief::normalized(random_distribution(rng, S, 0.0)));
}

/// Mix of unit, sparse and dense beliefs.
inline Belief random_belief(Rng& rng, int S) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pick = u(rng);
    if (pick < 0.15) return Belief::unit(std::uniform_int_distribution<int>(0, S - 1)(rng));
    std::gamma_distribution<double> g(pick < 0.6 ? 0.5 : 1.0, 1.0);
    const double sparsity = pick < 0.6 ? 0.5 : 0.0;
    SparseVector v;
    for (int s = 0; s < S; ++s)
        if (u(rng) >= sparsity) v.push_back({s, g(rng) + 1e-6});
    if (v.empty()) v.push_back({std::uniform_int_distribution<int>(0, S - 1)(rng), 1.0});
    return Belief::normalized(std::move(v));
}

// ---- linear programs --------------------------------------------------------

/// Solves the square system M x = y by Gaussian elimination; nullopt when (near) singular.
inline std::optional<std::vector<double>> solve_square(std::vector<double> M, std::vector<double> y) {
    const std::size_t n = y.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(M[r * n + c]) > std::abs(M[p * n + c])) p = r;
        if (std::abs(M[p * n + c]) < 1e-10) return std::nullopt;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(M[p * n + k], M[c * n + k]);
            std::swap(y[p], y[c]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = M[r * n + c] / M[c * n + c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) M[r * n + k] -= f * M[c * n + k];
            y[r] -= f * y[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) y[c] /= M[c * n + c];
    return y;
}

/// Row-reduces [A | b] and drops dependent rows; nullopt when the system is inconsistent.
inline std::optional<LinearProgram> full_rank(const LinearProgram& lp) {
    const std::size_t m = lp.rows(), n = lp.variables();
    std::vector<std::vector<double>> rows(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) rows[r].push_back(lp.at(r, j));
        rows[r].push_back(lp.rhs[r]);
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t p = rank;
        for (std::size_t r = rank + 1; r < m; ++r)
            if (std::abs(rows[r][c]) > std::abs(rows[p][c])) p = r;
        if (std::abs(rows[p][c]) < 1e-10) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank) continue;
            const double f = rows[r][c] / rows[rank][c];
            for (std::size_t k = 0; k <= n; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    for (std::size_t r = rank; r < m; ++r)
        if (std::abs(rows[r][n]) > 1e-9) return std::nullopt;
    LinearProgram out;
    out.objective = lp.objective;
    out.sense = lp.sense;
    for (std::size_t r = 0; r < rank; ++r) {
        out.constraints.insert(out.constraints.end(), rows[r].begin(), rows[r].end() - 1);
        out.rhs.push_back(rows[r][n]);
    }
    return out;
}

/// Best objective over all basic feasible solutions of a bounded LP; nullopt if none.
inline std::optional<double> vertex_enumeration(const LinearProgram& input) {
    const auto reduced = full_rank(input);
    if (!reduced) return std::nullopt;
    const LinearProgram& lp = *reduced;
    const std::size_t m = lp.rows(), n = lp.variables();
    if (m == 0) return std::nullopt;
    std::optional<double> best;
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(m), pick.end(), 1);
    do {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j)
            if (pick[j]) cols.push_back(j);
        std::vector<double> M(m * m);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t k = 0; k < m; ++k) M[r * m + k] = lp.at(r, cols[k]);
        auto x = solve_square(M, lp.rhs);
        if (!x) continue;
        if (*std::min_element(x->begin(), x->end()) < -1e-9) continue;
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) v += lp.objective[cols[k]] * (*x)[k];
        if (!best || (lp.sense == Sense::minimize ? v < *best : v > *best)) best = v;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
}

/// Random equality LP with a sum-of-variables row, so the feasible region is bounded.
inline LinearProgram random_lp(Rng& rng, bool feasible_by_construction) {
    std::uniform_int_distribution<int> rows(1, 6);
    std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
    LinearProgram lp;
    const std::size_t m = static_cast<std::size_t>(rows(rng));
    const std::size_t n = static_cast<std::size_t>(std::uniform_int_distribution<int>(static_cast<int>(m), 10)(rng));
    lp.sense = p(rng) < 0.5 ? Sense::minimize : Sense::maximize;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(u(rng));
    lp.constraints.assign(m * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) lp.at(0, j) = 1.0;
    for (std::size_t r = 1; r < m; ++r)
        for (std::size_t j = 0; j < n; ++j) lp.at(r, j) = p(rng) < 0.2 ? 0.0 : u(rng);
    if (feasible_by_construction) {
        // Sparse nonnegative point so many instances are degenerate.
        std::vector<double> x(n);
        for (auto& v : x) v = p(rng) < 0.5 ? 0.0 : p(rng);
        x[0] += 0.1;
        for (std::size_t r = 0; r < m; ++r) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += lp.at(r, j) * x[j];
            lp.rhs.push_back(s);
        }
    } else {
        lp.rhs.push_back(p(rng) + 0.1);
        for (std::size_t r = 1; r < m; ++r) lp.rhs.push_back(2.0 * u(rng));
    }
    return lp;
}

// ---- value of the POMDP from below ------------------------------------------

/**
 * Exhaustive expectimax over the belief tree to a fixed depth. Leaves take
 * the best blind-policy value, which no policy from that belief falls below.
 */
class BeliefTreeOracle {
public:
    BeliefTreeOracle(const PomdpModel& m, int depth) : m_(m), depth_(depth), leaves_(blind_policy_alphas(m)) {}

    double value(const Belief& b) { return value(b, depth_); }

private:
    using Key = std::pair<int, std::vector<std::pair<int, long long>>>;

    double value(const Belief& b, int d) {
        if (d == 0) return lower_value(leaves_, b);
        Key key{d, {}};
        for (const auto& e : b.entries()) key.second.push_back({e.index, std::llround(e.value * 1e12)});
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < m_.num_actions(); ++a) {
            double v = expected_reward(m_, b, a);
            for (const auto& br : observation_branches(m_, b, a))
                v += m_.discount() * br.probability * value(br.posterior, d - 1);
            best = std::max(best, v);
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    const PomdpModel& m_;
    int depth_;
    std::vector<AlphaVector> leaves_;
    std::map<Key, double> memo_;
};

} // namespace pbounds::testing
