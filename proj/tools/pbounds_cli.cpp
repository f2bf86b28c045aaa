// Command-line front end: bounds, solve, sweep, count-beliefs.
#include "pbounds/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace pbounds;

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, internal = 3 };

struct Common {
    std::string env;
    std::string file;
    double gamma = 0.0;
    double eps = 1e-3;
    int max_iter = 250;
    unsigned threads = 0;
    std::string out = "csv";
    bool timing = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_gamma = true) {
    auto* env = cmd->add_option("--env", c.env, "built-in environment");
    auto* file = cmd->add_option("--file", c.file, "path to a .pomdp model");
    env->excludes(file);
    if (with_gamma) cmd->add_option("--gamma", c.gamma, "discount override");
    cmd->add_option("--max-iter", c.max_iter, "value iteration horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "worker threads, 0 for all cores");
    cmd->add_option("--out", c.out, "csv or md")->check(CLI::IsMember({"csv", "md", "markdown"}));
    cmd->add_flag("--timing", c.timing, "include wall-clock columns");
}

std::vector<ModelSource> sources(const Common& c) {
    if (!c.file.empty()) return {ModelSource::file(c.file)};
    if (!c.env.empty()) return {ModelSource::builtin(c.env)};
    std::vector<ModelSource> all;
    for (const auto& n : builtin_environment_names()) all.push_back(ModelSource::builtin(n));
    return all;
}

BoundKind bound_of(const std::string& s) {
    auto k = parse_bound_kind(s);
    if (!k) throw UsageError("unknown bound: " + s);
    return *k;
}

ExperimentSpec spec_of(const Common& c) {
    ExperimentSpec spec;
    spec.models = sources(c);
    if (c.gamma != 0.0) spec.gamma = c.gamma;
    spec.bound_config.epsilon = c.eps;
    spec.bound_config.max_iterations = c.max_iter;
    spec.bound_config.threads = c.threads;
    spec.format = c.out == "csv" ? OutputFormat::csv : OutputFormat::markdown;
    spec.timing = c.timing;
    return spec;
}

// A model named explicitly is loaded up front so its errors map to exit codes; otherwise they stay in the rows.
void preload(const ExperimentSpec& spec, const Common& c) {
    if (!c.env.empty() || !c.file.empty()) load_model(spec.models.front(), spec.gamma);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Informed upper bounds and point-based solving for discrete POMDPs"};
    app.require_subcommand(1);

    Common bc;
    std::vector<std::string> bound_names;
    auto* bounds = app.add_subcommand("bounds", "upper bounds at the initial belief");
    add_common(bounds, bc);
    bounds->add_option("--eps", bc.eps, "value iteration precision")->check(CLI::PositiveNumber);
    bounds->add_option("--bound", bound_names, "qmdp|fib|tib|otib|etib|ctib (repeatable)")->delimiter(',');

    Common sc;
    std::string init = "fib";
    double timeout = 60.0;
    double solve_eps = 1e-3;
    std::string trace_path;
    std::vector<double> budgets;
    bool full_scale = false;
    auto* solve_cmd = app.add_subcommand("solve", "run the point-based solver");
    add_common(solve_cmd, sc);
    solve_cmd->add_option("--init", init, "bound used to initialize the upper bound");
    solve_cmd->add_option("--eps", solve_eps, "target relative gap")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--bound-eps", sc.eps, "precision of the initial bound")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--budgets", budgets, "report the bounds at these times")->delimiter(',');
    solve_cmd->add_flag("--full-scale", full_scale, "budgets 600,1200,3600");
    solve_cmd->add_option("--trace", trace_path, "write the checkpoint trace as CSV");

    Common wc;
    std::vector<double> gammas;
    std::vector<std::string> inits = {"fib", "tib", "etib"};
    double sweep_timeout = 60.0;
    double sweep_eps = 1e-3;
    auto* sweep = app.add_subcommand("sweep", "solver time across discount factors");
    add_common(sweep, wc, false);
    sweep->add_option("--gammas", gammas, "discount grid")->delimiter(',')->required();
    sweep->add_option("--inits", inits, "init bounds")->delimiter(',');
    sweep->add_option("--eps", sweep_eps, "target relative gap")->check(CLI::PositiveNumber);
    sweep->add_option("--timeout", sweep_timeout, "seconds per run")->check(CLI::PositiveNumber);

    Common cc;
    auto* count = app.add_subcommand("count-beliefs", "sizes of the one- and two-step belief sets");
    add_common(count, cc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    try {
        if (bounds->parsed()) {
            auto spec = spec_of(bc);
            if (!bound_names.empty()) {
                spec.bounds.clear();
                for (const auto& n : bound_names) spec.bounds.push_back(bound_of(n));
            }
            preload(spec, bc);
            const auto rows = run_bounds(spec);
            std::cout << (spec.format == OutputFormat::csv ? bounds_csv(rows, spec.timing)
                                                           : bounds_markdown(rows, spec.timing));
            return Exit::ok;
        }
        if (solve_cmd->parsed()) {
            if (sc.env.empty() && sc.file.empty()) throw UsageError("solve needs --env or --file");
            auto spec = spec_of(sc);
            spec.solver_epsilon = solve_eps;
            spec.inits = {bound_of(init)};
            spec.budgets = full_scale ? full_scale_budgets() : budgets;
            if (spec.budgets.empty()) spec.budgets = {timeout};
            auto model = std::make_shared<const PomdpModel>(load_model(spec.models.front(), spec.gamma));
            SolverConfig cfg;
            cfg.epsilon = solve_eps;
            cfg.timeout = *std::max_element(spec.budgets.begin(), spec.budgets.end());
            cfg.init_bound = spec.inits.front();
            cfg.bound_config = spec.bound_config;
            cfg.extra_checkpoints = spec.budgets;
            spec.validate();
            const auto report = pbounds::solve(model, cfg);
            if (!trace_path.empty()) {
                std::ofstream t(trace_path);
                if (!t) throw UsageError("cannot write trace: " + trace_path);
                t << "time,lower,upper,gap\n";
                for (const auto& c : report.trace)
                    t << detail::full(c.time) << "," << detail::full(c.lower) << "," << detail::full(c.upper) << ","
                      << detail::full(c.gap) << "\n";
            }
            std::cout << "lower,upper,gap,converged,iterations,alphas,points";
            if (spec.timing) std::cout << ",seconds,init_seconds";
            std::cout << "\n"
                      << detail::full(report.lower_value) << "," << detail::full(report.upper_value) << ","
                      << detail::full(report.relative_gap) << "," << (report.converged ? 1 : 0) << ","
                      << report.iterations << "," << report.alpha_count << "," << report.point_count;
            if (spec.timing) std::cout << "," << detail::full(report.seconds) << "," << detail::full(report.init_seconds);
            std::cout << "\n";
            return Exit::ok;
        }
        if (sweep->parsed()) {
            auto spec = spec_of(wc);
            spec.solver_epsilon = sweep_eps;
            spec.gammas = gammas;
            spec.budgets = {sweep_timeout};
            spec.inits.clear();
            for (const auto& n : inits) spec.inits.push_back(bound_of(n));
            preload(spec, wc);
            const auto rows = run_discount_sweep(spec);
            std::cout << (spec.format == OutputFormat::csv ? solver_csv(rows, spec.timing)
                                                           : solver_markdown(rows, spec.timing));
            return Exit::ok;
        }
        if (count->parsed()) {
            std::cout << "environment,gamma,states,actions,observations,b_sao,b_bao\n";
            int status = Exit::ok;
            for (const auto& src : sources(cc)) {
                try {
                    const auto m = load_model(src, cc.gamma != 0.0 ? std::optional<double>(cc.gamma) : std::nullopt);
                    std::cout << detail::csv_field(src.label()) << "," << detail::full(m.discount()) << ","
                              << m.num_states() << "," << m.num_actions() << "," << m.num_observations() << ","
                              << enumerate_one_step_beliefs(m).size() << "," << count_two_step_beliefs(m) << "\n";
                } catch (const ParseError& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    status = Exit::parse;
                }
            }
            return status;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return Exit::parse;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return Exit::parse;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Exit::internal;
    }
    return Exit::internal;
}
