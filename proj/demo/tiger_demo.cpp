// Bounds and a solver run on the tiger problem, or on a .pomdp file given as argument.
#include "pbounds/cassandra.hpp"
#include "pbounds/environments.hpp"
#include "pbounds/informed_bounds.hpp"
#include "pbounds/sarsop.hpp"

#include <cstdio>
#include <exception>
#include <memory>

using namespace pbounds;

int main(int argc, char** argv) {
    try {
        auto model = std::make_shared<const PomdpModel>(argc > 1 ? load_pomdp(argv[1]) : build_tiger(0.95));
        std::printf("|S|=%d |A|=%d |O|=%d gamma=%.3f\n", model->num_states(), model->num_actions(),
                    model->num_observations(), model->discount());

        InformedBounds bounds(model);
        std::printf("point set: %zu beliefs, %zu posteriors\n", bounds.one_step_set().size(),
                    bounds.one_step_set().num_posteriors());
        for (auto kind : kAllBounds)
            std::printf("  %-5s %12.4f  (%.3fs)\n", std::string(to_string(kind)).c_str(), bounds.initial_value(kind),
                        bounds.total_seconds(kind));

        SolverConfig cfg;
        cfg.init_bound = BoundKind::tib;
        cfg.timeout = 10.0;
        const auto r = solve(model, cfg);
        std::printf("solver: [%.4f, %.4f] gap %.2e after %d iterations, %.3fs%s\n", r.lower_value, r.upper_value,
                    r.relative_gap, r.iterations, r.seconds, r.converged ? "" : " (timed out)");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
