#pragma once

#include "pbounds/belief_set.hpp"
#include "pbounds/cassandra.hpp"
#include "pbounds/environments.hpp"
#include "pbounds/errors.hpp"
#include "pbounds/informed_bounds.hpp"
#include "pbounds/sarsop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pbounds {

/// A built-in environment name or a path to a `.pomdp` file.
struct ModelSource {
    std::string name;
    std::string path;

    static ModelSource builtin(std::string n) { return {std::move(n), {}}; }
    static ModelSource file(std::string p) { return {{}, std::move(p)}; }

    bool is_file() const { return !path.empty(); }
    std::string label() const { return is_file() ? path : name; }
};

enum class OutputFormat { csv, markdown };

struct ExperimentSpec {
    std::vector<ModelSource> models;
    std::vector<BoundKind> bounds{kAllBounds.begin(), kAllBounds.end()};
    std::optional<double> gamma;
    BoundConfig bound_config{};
    double solver_epsilon = 1e-3;
    std::vector<BoundKind> inits = {BoundKind::fib, BoundKind::tib, BoundKind::etib};
    std::vector<double> budgets = {5.0, 15.0, 60.0};
    std::vector<double> gammas;
    OutputFormat format = OutputFormat::csv;
    bool timing = false;   ///< emit wall-clock columns (not reproducible byte for byte)
    std::uint64_t seed = 0;

    void validate() const {
        for (double b : budgets)
            if (!(b > 0.0)) throw UsageError("budgets must be positive");
        for (double g : gammas)
            if (!(g > 0.0 && g < 1.0)) throw UsageError("sweep discounts must lie in (0, 1)");
        if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) throw UsageError("discount must lie in (0, 1)");
        if (!(solver_epsilon > 0.0)) throw UsageError("epsilon must be positive");
        bound_config.validate();
    }
};

/// The paper-scale budgets, 600 / 1200 / 3600 seconds.
inline std::vector<double> full_scale_budgets() { return {600.0, 1200.0, 3600.0}; }

struct BoundResult {
    BoundKind kind = BoundKind::qmdp;
    double value = 0.0;
    double seconds = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string error;
};

struct SolverResult {
    BoundKind init = BoundKind::fib;
    double budget = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double gap = 0.0;
    bool converged = false;
    double seconds = 0.0;   ///< time to convergence, or the budget
    std::string error;
};

struct ResultRow {
    std::string environment;
    double gamma = 0.0;
    int states = 0;
    int actions = 0;
    int observations = 0;
    std::size_t one_step_count = 0;
    std::size_t two_step_count = 0;
    std::vector<BoundResult> bounds;
    std::vector<SolverResult> solver;
    std::string error;
};

/// |B_S ∪ B_sao ∪ B_bao|: the one-step set plus every distinct posterior of its members.
inline std::size_t count_two_step_beliefs(const PomdpModel& model) {
    const auto set = enumerate_one_step_beliefs(model);
    BeliefIndex all;
    for (const auto& b : set.beliefs()) all.insert(b);
    for (std::size_t p = 0; p < set.num_posteriors(); ++p) all.insert(set.posterior(static_cast<int>(p)));
    return all.size();
}

/// Same kernels and start, different discount.
inline PomdpModel with_discount(const PomdpModel& m, double gamma) {
    const int S = m.num_states(), A = m.num_actions();
    std::vector<SparseVector> T, Z;
    std::vector<double> R;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            T.emplace_back(m.transition(s, a).begin(), m.transition(s, a).end());
            R.push_back(m.reward(s, a));
        }
    for (int a = 0; a < A; ++a)
        for (int sp = 0; sp < S; ++sp) Z.emplace_back(m.observation(a, sp).begin(), m.observation(a, sp).end());
    return PomdpModel(S, A, m.num_observations(), std::move(T), std::move(Z), std::move(R), gamma,
                      m.initial_belief(), m.names());
}

inline PomdpModel load_model(const ModelSource& src, std::optional<double> gamma) {
    if (src.is_file()) {
        auto m = load_pomdp(src.path);
        return gamma ? with_discount(m, *gamma) : m;
    }
    return build_environment(src.name, gamma.value_or(0.95));
}

namespace detail {

inline ResultRow describe(const ModelSource& src, const PomdpModel& m) {
    ResultRow row;
    row.environment = src.label();
    row.gamma = m.discount();
    row.states = m.num_states();
    row.actions = m.num_actions();
    row.observations = m.num_observations();
    return row;
}

inline std::string exception_text() {
    try {
        throw;
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown error";
    }
}

inline std::vector<SolverResult> solve_with_budgets(std::shared_ptr<const PomdpModel> model, BoundKind init,
                                                    const ExperimentSpec& spec, std::vector<double> budgets) {
    std::sort(budgets.begin(), budgets.end());
    SolverConfig cfg;
    cfg.epsilon = spec.solver_epsilon;
    cfg.timeout = budgets.back();
    cfg.init_bound = init;
    cfg.bound_config = spec.bound_config;
    cfg.extra_checkpoints = budgets;
    const auto report = solve(std::move(model), cfg);
    std::vector<SolverResult> out;
    for (double b : budgets) {
        SolverResult r;
        r.init = init;
        r.budget = b;
        bool found = false;
        for (const auto& c : report.trace)
            if (c.time == b) {
                r.lower = c.lower;
                r.upper = c.upper;
                r.gap = c.gap;
                found = true;
            }
        if (!found) r.error = "budget ended during initialization";
        r.converged = report.converged && report.seconds <= b;
        r.seconds = r.converged ? report.seconds : b;
        out.push_back(r);
    }
    return out;
}

} // namespace detail

/// One row per model; each requested bound evaluated at b0 through the initialization chain.
inline std::vector<ResultRow> run_bounds(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<ResultRow> rows;
    for (const auto& src : spec.models) {
        ResultRow row;
        row.environment = src.label();
        try {
            auto model = std::make_shared<const PomdpModel>(load_model(src, spec.gamma));
            row = detail::describe(src, *model);
            InformedBounds bounds(model, spec.bound_config);
            row.one_step_count = bounds.one_step_set().size();
            row.two_step_count = count_two_step_beliefs(*model);
            for (auto kind : spec.bounds) {
                BoundResult r;
                r.kind = kind;
                try {
                    r.value = bounds.initial_value(kind);
                    r.seconds = bounds.total_seconds(kind);
                    r.converged = bounds.table(kind).converged;
                    r.iterations = bounds.table(kind).iterations;
                } catch (...) {
                    r.error = detail::exception_text();
                }
                row.bounds.push_back(r);
            }
        } catch (...) {
            row.error = detail::exception_text();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Solver runs per init bound, sampled at each budget.
inline std::vector<ResultRow> run_solver_comparison(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.budgets.empty()) throw UsageError("solver comparison needs at least one budget");
    std::vector<ResultRow> rows;
    for (const auto& src : spec.models) {
        ResultRow row;
        row.environment = src.label();
        try {
            auto model = std::make_shared<const PomdpModel>(load_model(src, spec.gamma));
            row = detail::describe(src, *model);
            for (auto init : spec.inits) {
                try {
                    auto rs = detail::solve_with_budgets(model, init, spec, spec.budgets);
                    row.solver.insert(row.solver.end(), rs.begin(), rs.end());
                } catch (...) {
                    SolverResult r;
                    r.init = init;
                    r.error = detail::exception_text();
                    row.solver.push_back(r);
                }
            }
        } catch (...) {
            row.error = detail::exception_text();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// One row per (discount, model); each init runs once with the largest budget as timeout.
inline std::vector<ResultRow> run_discount_sweep(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.gammas.empty()) throw UsageError("discount sweep needs a discount grid");
    if (spec.budgets.empty()) throw UsageError("discount sweep needs a budget");
    const double budget = *std::max_element(spec.budgets.begin(), spec.budgets.end());
    std::vector<ResultRow> rows;
    for (double g : spec.gammas) {
        for (const auto& src : spec.models) {
            ResultRow row;
            row.environment = src.label();
            row.gamma = g;
            try {
                auto model = std::make_shared<const PomdpModel>(load_model(src, g));
                row = detail::describe(src, *model);
                for (auto init : spec.inits) {
                    try {
                        auto rs = detail::solve_with_budgets(model, init, spec, {budget});
                        row.solver.push_back(rs.front());
                    } catch (...) {
                        SolverResult r;
                        r.init = init;
                        r.budget = budget;
                        r.error = detail::exception_text();
                        row.solver.push_back(r);
                    }
                }
            } catch (...) {
                row.error = detail::exception_text();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---- output ----------------------------------------------------------------

namespace detail {

inline std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Three significant digits, fixed notation.
inline std::string rounded(double v) {
    if (!std::isfinite(v)) return full(v);
    int decimals = 2;
    if (v != 0.0) decimals = std::clamp(2 - static_cast<int>(std::floor(std::log10(std::abs(v)))), 0, 6);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string md_field(std::string s) {
    for (auto& c : s)
        if (c == '|' || c == '\n') c = ' ';
    return s;
}

inline std::string model_columns(const ResultRow& r) {
    return csv_field(r.environment) + "," + full(r.gamma) + "," + std::to_string(r.states) + "," +
           std::to_string(r.actions) + "," + std::to_string(r.observations);
}

} // namespace detail

/// One line per (model, bound); models that failed to load get one line with the error.
inline std::string bounds_csv(const std::vector<ResultRow>& rows, bool timing = false) {
    std::ostringstream out;
    out << "environment,gamma,states,actions,observations,b_sao,b_bao,bound,value,converged,iterations";
    if (timing) out << ",seconds";
    out << ",error\n";
    for (const auto& r : rows) {
        const std::string head = detail::model_columns(r) + "," + std::to_string(r.one_step_count) + "," +
                                 std::to_string(r.two_step_count);
        if (!r.error.empty()) {
            out << head << ",,,,";
            if (timing) out << ",";
            out << "," << detail::csv_field(r.error) << "\n";
            continue;
        }
        for (const auto& b : r.bounds) {
            out << head << "," << to_string(b.kind) << "," << (b.error.empty() ? detail::full(b.value) : "") << ","
                << (b.converged ? 1 : 0) << "," << b.iterations;
            if (timing) out << "," << detail::full(b.seconds);
            out << "," << detail::csv_field(b.error) << "\n";
        }
    }
    return out.str();
}

/// One line per (model, init, budget).
inline std::string solver_csv(const std::vector<ResultRow>& rows, bool timing = false) {
    std::ostringstream out;
    out << "environment,gamma,states,actions,observations,init,budget,lower,upper,gap,converged";
    if (timing) out << ",seconds";
    out << ",error\n";
    for (const auto& r : rows) {
        const std::string head = detail::model_columns(r);
        if (!r.error.empty()) {
            out << head << ",,,,,,";
            if (timing) out << ",";
            out << "," << detail::csv_field(r.error) << "\n";
            continue;
        }
        for (const auto& s : r.solver) {
            out << head << "," << to_string(s.init) << "," << detail::full(s.budget) << ",";
            if (s.error.empty())
                out << detail::full(s.lower) << "," << detail::full(s.upper) << "," << detail::full(s.gap);
            else
                out << ",,";
            out << "," << (s.converged ? 1 : 0);
            if (timing) out << "," << detail::full(s.seconds);
            out << "," << detail::csv_field(s.error) << "\n";
        }
    }
    return out.str();
}

/// Environment per line, one column per bound.
inline std::string bounds_markdown(const std::vector<ResultRow>& rows, bool timing = false) {
    std::vector<BoundKind> kinds;
    for (const auto& r : rows)
        for (const auto& b : r.bounds)
            if (std::find(kinds.begin(), kinds.end(), b.kind) == kinds.end()) kinds.push_back(b.kind);
    std::ostringstream out;
    out << "| environment | S | A | O | B_sao | B_bao |";
    for (auto k : kinds) out << " " << to_string(k) << " |";
    out << "\n|---|---|---|---|---|---|";
    for (std::size_t i = 0; i < kinds.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& r : rows) {
        out << "| " << detail::md_field(r.environment) << " | ";
        if (!r.error.empty()) {
            out << "error: " << detail::md_field(r.error) << " |\n";
            continue;
        }
        out << r.states << " | " << r.actions << " | " << r.observations << " | " << r.one_step_count << " | "
            << r.two_step_count << " |";
        for (auto k : kinds) {
            auto it = std::find_if(r.bounds.begin(), r.bounds.end(), [k](const BoundResult& b) { return b.kind == k; });
            if (it == r.bounds.end()) out << " |";
            else if (!it->error.empty()) out << " error |";
            else {
                out << " " << detail::rounded(it->value);
                if (timing) out << " (" << detail::rounded(it->seconds) << "s)";
                out << " |";
            }
        }
        out << "\n";
    }
    return out.str();
}

inline std::string solver_markdown(const std::vector<ResultRow>& rows, bool timing = false) {
    std::ostringstream out;
    out << "| environment | gamma | init | budget | lower | upper | gap |";
    if (timing) out << " seconds |";
    out << "\n|---|---|---|---|---|---|---|";
    if (timing) out << "---|";
    out << "\n";
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            out << "| " << detail::md_field(r.environment) << " | error: " << detail::md_field(r.error) << " |\n";
            continue;
        }
        for (const auto& s : r.solver) {
            out << "| " << detail::md_field(r.environment) << " | " << r.gamma << " | " << to_string(s.init) << " | "
                << s.budget << " | ";
            if (s.error.empty())
                out << detail::rounded(s.lower) << " | " << detail::rounded(s.upper) << " | " << detail::rounded(s.gap)
                    << " |";
            else
                out << "error: " << detail::md_field(s.error) << " | | |";
            if (timing) out << " " << detail::rounded(s.seconds) << " |";
            out << "\n";
        }
    }
    return out.str();
}

} // namespace pbounds
