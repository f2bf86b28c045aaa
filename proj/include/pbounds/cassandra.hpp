#pragma once

#include "pbounds/belief.hpp"
#include "pbounds/errors.hpp"
#include "pbounds/model.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pbounds {

namespace cassandra {

struct Token {
    std::string text;
    std::size_t line = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == ':') {
            out.push_back({":", line});
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ':' &&
                   text[j] != '#')
                ++j;
            out.push_back({std::string(text.substr(i, j - i)), line});
            i = j;
        }
    }
    return out;
}

inline std::optional<double> as_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Parser state for one document. Kernels are dense while parsing.
class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    PomdpModel parse() {
        parse_preamble();
        require_sizes();
        T_.assign(static_cast<std::size_t>(A_) * S_ * S_, 0.0);
        O_.assign(static_cast<std::size_t>(A_) * S_ * Ob_, 0.0);
        base_reward_.assign(static_cast<std::size_t>(A_) * S_, {0.0, 0});
        t_line_.assign(static_cast<std::size_t>(A_) * S_, last_line());
        o_line_.assign(static_cast<std::size_t>(A_) * S_, last_line());
        specific_reward_.assign(static_cast<std::size_t>(A_) * S_, {});
        while (!done()) {
            const Token& t = peek();
            entry_line_ = t.line;
            if (t.text == "T") {
                next();
                expect_colon();
                parse_transition();
            } else if (t.text == "O") {
                next();
                expect_colon();
                parse_observation();
            } else if (t.text == "R") {
                next();
                expect_colon();
                parse_reward();
            } else {
                fail(t.line, "unexpected token '" + t.text + "'");
            }
        }
        return build();
    }

private:
    enum class Space { state, action, observation };

    struct RewardEntry {
        int next_state = -1;   ///< -1 matches any
        int observation = -1;
        double value = 0.0;
        std::size_t seq = 0;
    };

    [[noreturn]] static void fail(std::size_t line, const std::string& msg) { throw ParseError(line, msg); }

    bool done() const { return pos_ >= toks_.size(); }
    const Token& peek(std::size_t ahead = 0) const {
        if (pos_ + ahead >= toks_.size()) fail(last_line(), "unexpected end of input");
        return toks_[pos_ + ahead];
    }
    bool peek_is(const char* text, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].text == text;
    }
    const Token& next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    std::size_t last_line() const { return toks_.empty() ? 1 : toks_.back().line; }

    void expect_colon() {
        const Token& t = next();
        if (t.text != ":") fail(t.line, "expected ':' but found '" + t.text + "'");
    }

    double number() {
        const Token& t = next();
        auto v = as_number(t.text);
        if (!v) fail(t.line, "expected a number but found '" + t.text + "'");
        return *v;
    }

    bool is_keyword_start() const {
        if (done()) return true;
        static const char* keys[] = {"T", "O", "R", "discount", "values", "states", "actions", "observations", "start"};
        for (const char* k : keys)
            if (peek_is(k) && peek_is(":", 1)) return true;
        return peek_is("start") && (peek_is("include", 1) || peek_is("exclude", 1));
    }

    /// Either a count (names become indices) or a list of names.
    void parse_space(int& count, std::vector<std::string>& names, std::size_t line) {
        if (done()) fail(line, "missing size");
        if (auto v = as_number(peek().text); v && !is_keyword_start()) {
            const Token& t = next();
            if (*v < 1 || std::floor(*v) != *v) fail(t.line, "size must be a positive integer");
            count = static_cast<int>(*v);
            names.clear();
            return;
        }
        names.clear();
        while (!is_keyword_start()) names.push_back(next().text);
        if (names.empty()) fail(line, "empty identifier list");
        count = static_cast<int>(names.size());
    }

    void parse_preamble() {
        while (!done()) {
            const Token& t = peek();
            if (t.text == "T" || t.text == "O" || t.text == "R") break;
            next();
            if (t.text == "discount") {
                expect_colon();
                discount_ = number();
                have_discount_ = true;
            } else if (t.text == "values") {
                expect_colon();
                const Token& v = next();
                if (v.text == "cost") cost_ = true;
                else if (v.text != "reward") fail(v.line, "values must be 'reward' or 'cost'");
            } else if (t.text == "states") {
                expect_colon();
                parse_space(S_, state_names_, t.line);
            } else if (t.text == "actions") {
                expect_colon();
                parse_space(A_, action_names_, t.line);
            } else if (t.text == "observations") {
                expect_colon();
                parse_space(Ob_, obs_names_, t.line);
            } else if (t.text == "start") {
                start_line_ = t.line;
                if (peek_is("include") || peek_is("exclude")) {
                    start_mode_ = next().text;
                    expect_colon();
                } else {
                    expect_colon();
                    start_mode_ = "list";
                }
                while (!is_keyword_start()) start_tokens_.push_back(next());
            } else {
                fail(t.line, "unknown preamble entry '" + t.text + "'");
            }
        }
    }

    void require_sizes() {
        const std::size_t line = done() ? last_line() : peek().line;
        if (!have_discount_) fail(line, "missing discount");
        if (S_ <= 0) fail(line, "missing states");
        if (A_ <= 0) fail(line, "missing actions");
        if (Ob_ <= 0) fail(line, "missing observations");
    }

    int resolve(const Token& t, Space space) const {
        const std::vector<std::string>* names = &state_names_;
        int count = S_;
        const char* what = "state";
        if (space == Space::action) {
            names = &action_names_;
            count = A_;
            what = "action";
        } else if (space == Space::observation) {
            names = &obs_names_;
            count = Ob_;
            what = "observation";
        }
        for (std::size_t i = 0; i < names->size(); ++i)
            if ((*names)[i] == t.text) return static_cast<int>(i);
        if (auto v = as_number(t.text); v && std::floor(*v) == *v && *v >= 0 && *v < count)
            return static_cast<int>(*v);
        fail(t.line, std::string("unknown ") + what + " '" + t.text + "'");
    }

    /// Indices matched by an identifier, index, or '*'.
    std::vector<int> spec(Space space) {
        const Token& t = next();
        const int count = space == Space::state ? S_ : (space == Space::action ? A_ : Ob_);
        std::vector<int> out;
        if (t.text == "*") {
            for (int i = 0; i < count; ++i) out.push_back(i);
        } else {
            out.push_back(resolve(t, space));
        }
        return out;
    }

    void touch_t(int a, int s) { t_line_[static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(s)] = entry_line_; }
    void touch_o(int a, int sp) { o_line_[static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(sp)] = entry_line_; }

    double& t_at(int a, int s, int sp) {
        return T_[(static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(s)) * S_ + static_cast<std::size_t>(sp)];
    }
    double& o_at(int a, int sp, int o) {
        return O_[(static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(sp)) * Ob_ + static_cast<std::size_t>(o)];
    }

    std::vector<double> numbers(std::size_t n) {
        std::vector<double> v;
        v.reserve(n);
        for (std::size_t k = 0; k < n; ++k) v.push_back(number());
        return v;
    }

    void parse_transition() {
        const auto acts = spec(Space::action);
        if (peek_is(":")) {
            next();
            const auto from = spec(Space::state);
            if (peek_is(":")) {
                next();
                const auto to = spec(Space::state);
                const double p = number();
                for (int a : acts)
                    for (int s : from)
                        for (int sp : to) {
                            t_at(a, s, sp) = p;
                            touch_t(a, s);
                        }
                return;
            }
            std::vector<double> row;
            if (peek_is("uniform")) {
                next();
                row.assign(static_cast<std::size_t>(S_), 1.0 / S_);
            } else {
                row = numbers(static_cast<std::size_t>(S_));
            }
            for (int a : acts)
                for (int s : from)
                    for (int sp = 0; sp < S_; ++sp) {
                        t_at(a, s, sp) = row[static_cast<std::size_t>(sp)];
                        touch_t(a, s);
                    }
            return;
        }
        std::vector<double> matrix;
        if (peek_is("uniform")) {
            next();
            matrix.assign(static_cast<std::size_t>(S_) * S_, 1.0 / S_);
        } else if (peek_is("identity")) {
            next();
            matrix.assign(static_cast<std::size_t>(S_) * S_, 0.0);
            for (int s = 0; s < S_; ++s) matrix[static_cast<std::size_t>(s) * S_ + s] = 1.0;
        } else {
            matrix = numbers(static_cast<std::size_t>(S_) * S_);
        }
        for (int a : acts)
            for (int s = 0; s < S_; ++s)
                for (int sp = 0; sp < S_; ++sp) {
                    t_at(a, s, sp) = matrix[static_cast<std::size_t>(s) * S_ + sp];
                    touch_t(a, s);
                }
    }

    void parse_observation() {
        const auto acts = spec(Space::action);
        if (peek_is(":")) {
            next();
            const auto to = spec(Space::state);
            if (peek_is(":")) {
                next();
                const auto obs = spec(Space::observation);
                const double p = number();
                for (int a : acts)
                    for (int sp : to)
                        for (int o : obs) {
                            o_at(a, sp, o) = p;
                            touch_o(a, sp);
                        }
                return;
            }
            std::vector<double> row;
            if (peek_is("uniform")) {
                next();
                row.assign(static_cast<std::size_t>(Ob_), 1.0 / Ob_);
            } else {
                row = numbers(static_cast<std::size_t>(Ob_));
            }
            for (int a : acts)
                for (int sp : to)
                    for (int o = 0; o < Ob_; ++o) {
                        o_at(a, sp, o) = row[static_cast<std::size_t>(o)];
                        touch_o(a, sp);
                    }
            return;
        }
        std::vector<double> matrix;
        if (peek_is("uniform")) {
            next();
            matrix.assign(static_cast<std::size_t>(S_) * Ob_, 1.0 / Ob_);
        } else {
            matrix = numbers(static_cast<std::size_t>(S_) * Ob_);
        }
        for (int a : acts)
            for (int sp = 0; sp < S_; ++sp)
                for (int o = 0; o < Ob_; ++o) {
                    o_at(a, sp, o) = matrix[static_cast<std::size_t>(sp) * Ob_ + o];
                    touch_o(a, sp);
                }
    }

    void set_reward(int a, int s, int sp, int o, double v) {
        const std::size_t k = static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(s);
        const std::size_t seq = ++seq_;
        if (sp < 0 && o < 0) {
            base_reward_[k] = {v, seq};
            specific_reward_[k].clear();
        } else {
            specific_reward_[k].push_back({sp, o, v, seq});
        }
    }

    void parse_reward() {
        const auto acts = spec(Space::action);
        expect_colon();
        const auto from = spec(Space::state);
        if (!peek_is(":")) {
            // Matrix over (s', o) for fixed (a, s).
            const auto matrix = numbers(static_cast<std::size_t>(S_) * Ob_);
            for (int a : acts)
                for (int s : from)
                    for (int sp = 0; sp < S_; ++sp)
                        for (int o = 0; o < Ob_; ++o)
                            set_reward(a, s, sp, o, matrix[static_cast<std::size_t>(sp) * Ob_ + o]);
            return;
        }
        next();
        const bool any_to = peek_is("*");
        const auto to = spec(Space::state);
        if (!peek_is(":")) {
            const auto row = numbers(static_cast<std::size_t>(Ob_));
            for (int a : acts)
                for (int s : from)
                    for (int sp : to)
                        for (int o = 0; o < Ob_; ++o) set_reward(a, s, sp, o, row[static_cast<std::size_t>(o)]);
            return;
        }
        next();
        const bool any_o = peek_is("*");
        const auto obs = spec(Space::observation);
        const double v = number();
        const std::vector<int> to_keys = any_to ? std::vector<int>{-1} : to;
        const std::vector<int> obs_keys = any_o ? std::vector<int>{-1} : obs;
        for (int a : acts)
            for (int s : from)
                for (int sp : to_keys)
                    for (int o : obs_keys) set_reward(a, s, sp, o, v);
    }

    /// Renormalizes a row within 1e-6 of summing to one; anything further off is an error.
    static SparseVector finish_row(std::span<const double> row, const std::string& what, std::size_t line) {
        SparseVector v;
        double total = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] < 0.0) fail(line, what + " has a negative probability");
            if (row[i] > 0.0) {
                v.push_back({static_cast<int>(i), row[i]});
                total += row[i];
            }
        }
        if (std::abs(total - 1.0) > 1e-6) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.9g", total);
            fail(line, what + " sums to " + buf);
        }
        for (auto& e : v) e.value /= total;
        return v;
    }

    Belief start_belief() {
        if (start_mode_.empty()) return Belief::uniform(S_);
        const std::size_t line = start_line_;
        if (start_mode_ == "list") {
            if (start_tokens_.size() == 1 && start_tokens_[0].text == "uniform") return Belief::uniform(S_);
            if (start_tokens_.size() == static_cast<std::size_t>(S_) && as_number(start_tokens_[0].text) &&
                (S_ > 1 || start_tokens_[0].text.find('.') != std::string::npos || state_names_.empty())) {
                std::vector<double> p;
                for (const auto& t : start_tokens_) {
                    auto v = as_number(t.text);
                    if (!v) fail(t.line, "expected a probability in start distribution");
                    p.push_back(*v);
                }
                auto row = finish_row(p, "start distribution", line);
                return Belief::normalized(std::move(row));
            }
            if (start_tokens_.size() == 1) return Belief::unit(resolve(start_tokens_[0], Space::state));
            fail(line, "start distribution must list one probability per state");
        }
        std::vector<bool> listed(static_cast<std::size_t>(S_), false);
        for (const auto& t : start_tokens_) listed[static_cast<std::size_t>(resolve(t, Space::state))] = true;
        SparseVector mass;
        const bool include = start_mode_ == "include";
        for (int s = 0; s < S_; ++s)
            if (listed[static_cast<std::size_t>(s)] == include) mass.push_back({s, 1.0});
        if (mass.empty()) fail(line, "start distribution has no states");
        return Belief::normalized(std::move(mass));
    }

    PomdpModel build() {
        std::vector<SparseVector> T(static_cast<std::size_t>(S_) * A_);
        std::vector<SparseVector> Z(static_cast<std::size_t>(A_) * S_);
        std::vector<double> R(static_cast<std::size_t>(S_) * A_, 0.0);
        for (int s = 0; s < S_; ++s)
            for (int a = 0; a < A_; ++a)
                T[static_cast<std::size_t>(s) * A_ + a] =
                    finish_row(std::span<const double>(&t_at(a, s, 0), static_cast<std::size_t>(S_)),
                               "T row for action " + name(action_names_, a) + ", state " + name(state_names_, s),
                               t_line_[static_cast<std::size_t>(a) * S_ + s]);
        for (int a = 0; a < A_; ++a)
            for (int sp = 0; sp < S_; ++sp)
                Z[static_cast<std::size_t>(a) * S_ + sp] =
                    finish_row(std::span<const double>(&o_at(a, sp, 0), static_cast<std::size_t>(Ob_)),
                               "O row for action " + name(action_names_, a) + ", state " + name(state_names_, sp),
                               o_line_[static_cast<std::size_t>(a) * S_ + sp]);
        for (int a = 0; a < A_; ++a) {
            for (int s = 0; s < S_; ++s) {
                const std::size_t k = static_cast<std::size_t>(a) * S_ + static_cast<std::size_t>(s);
                double r = base_reward_[k].first;
                if (!specific_reward_[k].empty()) {
                    r = 0.0;
                    for (const auto& t : T[static_cast<std::size_t>(s) * A_ + a]) {
                        for (const auto& z : Z[static_cast<std::size_t>(a) * S_ + t.index]) {
                            double v = base_reward_[k].first;
                            std::size_t best = base_reward_[k].second;
                            for (const auto& e : specific_reward_[k]) {
                                if ((e.next_state < 0 || e.next_state == t.index) &&
                                    (e.observation < 0 || e.observation == z.index) && e.seq > best) {
                                    best = e.seq;
                                    v = e.value;
                                }
                            }
                            r += t.value * z.value * v;
                        }
                    }
                }
                R[static_cast<std::size_t>(s) * A_ + a] = cost_ ? -r : r;
            }
        }
        Belief b0;
        try {
            b0 = start_belief();
        } catch (const UsageError& e) {
            fail(start_line_, e.what());
        }
        PomdpModel::Names names{state_names_, action_names_, obs_names_};
        try {
            return PomdpModel(S_, A_, Ob_, std::move(T), std::move(Z), std::move(R), discount_, std::move(b0),
                              std::move(names));
        } catch (const ModelError& e) {
            fail(last_line(), e.what());
        }
    }

    static std::string name(const std::vector<std::string>& names, int i) {
        return i < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(i)] : std::to_string(i);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    double discount_ = 0.0;
    bool have_discount_ = false;
    bool cost_ = false;
    int S_ = 0, A_ = 0, Ob_ = 0;
    std::vector<std::string> state_names_, action_names_, obs_names_;
    std::string start_mode_;
    std::vector<Token> start_tokens_;
    std::size_t start_line_ = 0;
    std::vector<double> T_, O_;
    std::vector<std::size_t> t_line_, o_line_;
    std::size_t entry_line_ = 0;
    std::vector<std::pair<double, std::size_t>> base_reward_;
    std::vector<std::vector<RewardEntry>> specific_reward_;
    std::size_t seq_ = 0;
};

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace cassandra

/// Parses a Cassandra `.pomdp` document; throws ParseError with the offending line.
inline PomdpModel parse_pomdp(std::string_view text) { return cassandra::Parser(text).parse(); }

/// Reads and parses a `.pomdp` file.
inline PomdpModel load_pomdp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pomdp(ss.str());
}

/// Serializes a model; rewards are written as R(s, a) with wildcard successor and observation.
inline std::string write_pomdp(const PomdpModel& m) {
    using cassandra::format_number;
    const auto& names = m.names();
    std::ostringstream out;
    auto space = [&](const char* key, const std::vector<std::string>& n, int count) {
        out << key << ": ";
        if (static_cast<int>(n.size()) == count) {
            for (int i = 0; i < count; ++i) out << (i ? " " : "") << n[static_cast<std::size_t>(i)];
        } else {
            out << count;
        }
        out << '\n';
    };
    out << "discount: " << format_number(m.discount()) << '\n';
    out << "values: reward\n";
    space("states", names.states, m.num_states());
    space("actions", names.actions, m.num_actions());
    space("observations", names.observations, m.num_observations());
    out << "start:";
    for (int s = 0; s < m.num_states(); ++s) out << ' ' << format_number(m.initial_belief()[s]);
    out << "\n\n";
    auto st = [&](int s) { return static_cast<int>(names.states.size()) == m.num_states() ? names.states[static_cast<std::size_t>(s)] : std::to_string(s); };
    auto ac = [&](int a) { return static_cast<int>(names.actions.size()) == m.num_actions() ? names.actions[static_cast<std::size_t>(a)] : std::to_string(a); };
    auto ob = [&](int o) { return static_cast<int>(names.observations.size()) == m.num_observations() ? names.observations[static_cast<std::size_t>(o)] : std::to_string(o); };
    for (int a = 0; a < m.num_actions(); ++a)
        for (int s = 0; s < m.num_states(); ++s)
            for (const auto& e : m.transition(s, a))
                out << "T: " << ac(a) << " : " << st(s) << " : " << st(e.index) << ' ' << format_number(e.value) << '\n';
    out << '\n';
    for (int a = 0; a < m.num_actions(); ++a)
        for (int sp = 0; sp < m.num_states(); ++sp)
            for (const auto& e : m.observation(a, sp))
                out << "O: " << ac(a) << " : " << st(sp) << " : " << ob(e.index) << ' ' << format_number(e.value) << '\n';
    out << '\n';
    for (int a = 0; a < m.num_actions(); ++a)
        for (int s = 0; s < m.num_states(); ++s)
            if (m.reward(s, a) != 0.0)
                out << "R: " << ac(a) << " : " << st(s) << " : * : * " << format_number(m.reward(s, a)) << '\n';
    return out.str();
}

} // namespace pbounds
