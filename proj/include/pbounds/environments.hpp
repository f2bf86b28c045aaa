#pragma once

#include "pbounds/belief.hpp"
#include "pbounds/errors.hpp"
#include "pbounds/model.hpp"

#include <array>
#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pbounds {

namespace detail {

inline void check_discount(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("discount must lie in (0, 1)");
}

inline SparseVector point_mass(int i) { return {{i, 1.0}}; }

} // namespace detail

/**
 * Two guessable states and an absorbing sink. Guessing x or y pays 1 when it
 * matches the state and moves to the sink; waiting swaps the state with
 * probability 0.2. There is a single uninformative observation.
 */
inline PomdpModel build_guessing_game(double gamma = 0.95) {
    detail::check_discount(gamma);
    enum { sx, sy, sink };
    enum { x, y, w };
    const int S = 3, A = 3;
    std::vector<SparseVector> T(S * A);
    std::vector<SparseVector> Z(A * S, detail::point_mass(0));
    std::vector<double> R(S * A, 0.0);
    for (int s = 0; s < S; ++s) {
        T[s * A + x] = detail::point_mass(sink);
        T[s * A + y] = detail::point_mass(sink);
    }
    T[sx * A + w] = {{sx, 0.8}, {sy, 0.2}};
    T[sy * A + w] = {{sx, 0.2}, {sy, 0.8}};
    T[sink * A + w] = detail::point_mass(sink);
    R[sx * A + x] = 1.0;
    R[sy * A + y] = 1.0;
    return PomdpModel(S, A, 1, std::move(T), std::move(Z), std::move(R), gamma,
                      Belief::normalized({{sx, 0.5}, {sy, 0.5}}),
                      {{"sx", "sy", "sink"}, {"x", "y", "w"}, {"none"}});
}

/// The classic tiger problem: listening is 85% accurate and costs 1, opening resets.
inline PomdpModel build_tiger(double gamma = 0.95) {
    detail::check_discount(gamma);
    enum { left, right };
    enum { listen, open_left, open_right };
    const int S = 2, A = 3;
    const SparseVector reset = {{left, 0.5}, {right, 0.5}};
    std::vector<SparseVector> T(S * A);
    std::vector<SparseVector> Z(A * S);
    std::vector<double> R(S * A);
    for (int s = 0; s < S; ++s) {
        T[s * A + listen] = detail::point_mass(s);
        T[s * A + open_left] = reset;
        T[s * A + open_right] = reset;
        R[s * A + listen] = -1.0;
    }
    R[left * A + open_left] = -100.0;
    R[left * A + open_right] = 10.0;
    R[right * A + open_left] = 10.0;
    R[right * A + open_right] = -100.0;
    Z[listen * S + left] = {{0, 0.85}, {1, 0.15}};
    Z[listen * S + right] = {{0, 0.15}, {1, 0.85}};
    for (int a : {open_left, open_right})
        for (int s = 0; s < S; ++s) Z[a * S + s] = reset;
    return PomdpModel(S, A, 2, std::move(T), std::move(Z), std::move(R), gamma, Belief::uniform(S),
                      {{"tiger-left", "tiger-right"}, {"listen", "open-left", "open-right"},
                       {"tiger-left", "tiger-right"}});
}

/**
 * 6x6 grid, state r * 6 + c with row 0 at the bottom. Moves succeed with
 * probability 0.6; each other move and staying get 0.1, and mass that would
 * leave the grid stays put. Staying always succeeds. The reward is the
 * probability of landing on the top-right cell; the observation is the column.
 */
inline PomdpModel build_grid(double gamma = 0.95) {
    detail::check_discount(gamma);
    constexpr int n = 6;
    const int S = n * n, A = 5;
    const std::array<std::array<int, 2>, 5> moves = {{{0, 0}, {1, 0}, {-1, 0}, {0, -1}, {0, 1}}};
    auto idx = [](int r, int c) { return r * n + c; };
    const int goal = idx(n - 1, n - 1);
    std::vector<SparseVector> T(S * A);
    std::vector<SparseVector> Z(A * S);
    std::vector<double> R(S * A, 0.0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int s = idx(r, c);
            T[s * A] = detail::point_mass(s);
            for (int a = 1; a < A; ++a) {
                SparseVector row;
                for (int k = 0; k < A; ++k) {
                    const double p = k == a ? 0.6 : 0.1;
                    const int rr = r + moves[k][0], cc = c + moves[k][1];
                    row.push_back({(rr >= 0 && rr < n && cc >= 0 && cc < n) ? idx(rr, cc) : s, p});
                }
                T[s * A + a] = canonicalize(std::move(row));
            }
            for (int a = 0; a < A; ++a) {
                for (const auto& e : T[s * A + a])
                    if (e.index == goal) R[s * A + a] = e.value;
                Z[a * S + s] = detail::point_mass(c);
            }
        }
    }
    PomdpModel::Names names;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) names.states.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
    names.actions = {"stay", "up", "down", "left", "right"};
    for (int c = 0; c < n; ++c) names.observations.push_back("col" + std::to_string(c));
    return PomdpModel(S, A, n, std::move(T), std::move(Z), std::move(R), gamma, Belief::unit(idx(0, 0)),
                      std::move(names));
}

/**
 * N components with degradation levels 0..3 (3 is broken). Per component the
 * action is nothing, inspect or repair. Repair resets to level 0, a broken
 * component stays broken, otherwise it degrades one level with probability
 * 0.2, 0.5 or 0.9 when 0, 1 or at least 2 components are broken. Inspection
 * reveals the next level of the inspected components; uninspected components
 * report level 0. The system starts with every component at level 1.
 */
inline PomdpModel build_k_out_of_n(int N = 2, double gamma = 0.95) {
    detail::check_discount(gamma);
    if (N < 1 || N > 3) throw UsageError("k-out-of-n: N must be 1, 2 or 3");
    constexpr int L = 4;
    int S = 1, A = 1;
    for (int i = 0; i < N; ++i) {
        S *= L;
        A *= 3;
    }
    const int O = S;
    // Component 0 is the most significant digit of state and action indices.
    auto digits = [N](int v, int base) {
        std::vector<int> d(static_cast<std::size_t>(N));
        for (int i = N - 1; i >= 0; --i) {
            d[static_cast<std::size_t>(i)] = v % base;
            v /= base;
        }
        return d;
    };
    auto encode = [N](const std::vector<int>& d, int base) {
        int v = 0;
        for (int i = 0; i < N; ++i) v = v * base + d[static_cast<std::size_t>(i)];
        return v;
    };
    std::vector<SparseVector> T(static_cast<std::size_t>(S) * A);
    std::vector<SparseVector> Z(static_cast<std::size_t>(A) * S);
    std::vector<double> R(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        const auto lv = digits(s, L);
        int broken = 0;
        for (int x : lv) broken += x == L - 1;
        const double p = broken == 0 ? 0.2 : (broken == 1 ? 0.5 : 0.9);
        for (int a = 0; a < A; ++a) {
            const auto act = digits(a, 3);
            // Expand the product distribution component by component.
            std::vector<std::pair<std::vector<int>, double>> partial = {{{}, 1.0}};
            for (int i = 0; i < N; ++i) {
                std::vector<std::pair<int, double>> opts;
                const int cur = lv[static_cast<std::size_t>(i)];
                if (act[static_cast<std::size_t>(i)] == 2) opts = {{0, 1.0}};
                else if (cur == L - 1) opts = {{L - 1, 1.0}};
                else opts = {{cur, 1.0 - p}, {cur + 1, p}};
                std::vector<std::pair<std::vector<int>, double>> grown;
                for (const auto& [prefix, pr] : partial) {
                    for (const auto& [level, q] : opts) {
                        auto d = prefix;
                        d.push_back(level);
                        grown.push_back({std::move(d), pr * q});
                    }
                }
                partial = std::move(grown);
            }
            SparseVector row;
            for (const auto& [d, pr] : partial) row.push_back({encode(d, L), pr});
            T[static_cast<std::size_t>(s) * A + a] = canonicalize(std::move(row));
            int inspections = 0, repairs = 0;
            for (int x : act) {
                inspections += x == 1;
                repairs += x == 2;
            }
            R[static_cast<std::size_t>(s) * A + a] = -0.05 * inspections - 0.25 * repairs - 0.5 * broken;
        }
    }
    for (int a = 0; a < A; ++a) {
        const auto act = digits(a, 3);
        for (int sp = 0; sp < S; ++sp) {
            const auto lv = digits(sp, L);
            int o = 0, scale = 1;
            for (int i = 0; i < N; ++i) {
                if (act[static_cast<std::size_t>(i)] == 1) o += lv[static_cast<std::size_t>(i)] * scale;
                scale *= L;
            }
            Z[static_cast<std::size_t>(a) * S + sp] = detail::point_mass(o);
        }
    }
    PomdpModel::Names names;
    const char* verbs[] = {"n", "i", "r"};
    for (int s = 0; s < S; ++s) {
        std::string name = "s";
        for (int x : digits(s, L)) name += std::to_string(x);
        names.states.push_back(name);
    }
    for (int a = 0; a < A; ++a) {
        std::string name;
        for (int x : digits(a, 3)) name += verbs[x];
        names.actions.push_back(name);
    }
    for (int o = 0; o < O; ++o) names.observations.push_back("o" + std::to_string(o));
    return PomdpModel(S, A, O, std::move(T), std::move(Z), std::move(R), gamma,
                      Belief::unit(encode(std::vector<int>(static_cast<std::size_t>(N), 1), L)), std::move(names));
}

/// Registry names of the built-in environments.
inline const std::vector<std::string>& builtin_environment_names() {
    static const std::vector<std::string> names = {"guessing-game", "tiger", "grid", "k-out-of-n-1",
                                                   "k-out-of-n-2", "k-out-of-n-3"};
    return names;
}

/// Lowercase alphanumerics only, so "KofN(2)", "kofn2" and "k-out-of-n-2" compare equal after aliasing.
inline std::string normalize_environment_name(std::string_view name) {
    std::string key;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c))) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key.rfind("koutofn", 0) == 0) key = "kofn" + key.substr(7);
    return key;
}

/// Builds a registered environment; throws UsageError for unknown names.
inline PomdpModel build_environment(std::string_view name, double gamma = 0.95) {
    const auto key = normalize_environment_name(name);
    if (key == "guessinggame" || key == "guessing") return build_guessing_game(gamma);
    if (key == "tiger") return build_tiger(gamma);
    if (key == "grid") return build_grid(gamma);
    if (key == "kofn1") return build_k_out_of_n(1, gamma);
    if (key == "kofn2") return build_k_out_of_n(2, gamma);
    if (key == "kofn3") return build_k_out_of_n(3, gamma);
    throw UsageError("unknown environment: " + std::string(name));
}

} // namespace pbounds
