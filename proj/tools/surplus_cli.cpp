// surplus: run extraction scenarios and emit reports.
//
//   surplus analyze <config> [--out DIR] [--jobs K] [--seed N] [--tol-override key=value]...
//   surplus counterexample [--out DIR] [--jobs K] [--eps E] [--grid N]
//   surplus sweep --grids 9,17,33,65,129 <config>
//
// Exit codes: 0 every verdict passed, 1 some task failed, 2 bad configuration.

#include <iostream>

#include "CLI11.hpp"
#include "surplus/error.hpp"
#include "surplus/scenario.hpp"

namespace {

struct Common {
    std::string out;
    std::size_t jobs = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "output directory");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--tol-override", c.overrides, "tolerance override key=value (repeatable)");
}

void apply(surplus::scenario::Scenario& s, const Common& c) {
    if (!c.out.empty()) s.out = c.out;
    if (c.jobs > 0) s.jobs = c.jobs;
    for (const auto& o : c.overrides) surplus::scenario::apply_tolerance_override(s.tol, o);
}

int execute(const surplus::scenario::Scenario& s) {
    const auto res = surplus::scenario::run(s);
    for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
    for (const auto& f : res.failures) std::cerr << "FAILED " << f << '\n';
    std::cout << (res.exit_code == 0 ? "all verdicts passed" : "some verdicts failed") << '\n';
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surplus extraction scenarios: classification, menus, duality."};
    app.require_subcommand(1);

    Common analyze_opts;
    std::string analyze_config;
    std::optional<std::uint64_t> seed;
    auto* analyze = app.add_subcommand("analyze", "run the tasks of a scenario file");
    analyze->add_option("config", analyze_config, "scenario JSON")->required();
    analyze->add_option("--seed", seed, "seed for random_polytope models");
    add_common(analyze, analyze_opts);

    Common cx_opts;
    double cx_eps = 0.05;
    std::size_t cx_grid = 201;
    auto* cx = app.add_subcommand("counterexample", "preset scenario on the closed-form curve");
    cx->add_option("--eps", cx_eps, "virtual extraction slack");
    cx->add_option("--grid", cx_grid, "construction grid size");
    add_common(cx, cx_opts);

    Common sweep_opts;
    std::string sweep_config;
    std::vector<std::size_t> grids;
    auto* sweep = app.add_subcommand("sweep", "type-0 margin and full-extraction norms across grid sizes");
    sweep->add_option("config", sweep_config, "scenario JSON")->required();
    sweep->add_option("--grids", grids, "grid sizes")->delimiter(',')->allow_extra_args(false)->required();
    add_common(sweep, sweep_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        surplus::scenario::Scenario s;
        if (*analyze) {
            s = surplus::scenario::load_scenario(analyze_config);
            if (seed) s.model.seed = *seed;
            apply(s, analyze_opts);
        } else if (*cx) {
            s = surplus::scenario::counterexample_scenario();
            s.eps = cx_eps;
            s.grid = cx_grid;
            apply(s, cx_opts);
        } else {
            s = surplus::scenario::load_scenario(sweep_config);
            s.tasks = {"sweep"};
            s.sweep_grids = grids;
            apply(s, sweep_opts);
        }
        surplus::scenario::validate(s);
        return execute(s);
    } catch (const surplus::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const surplus::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
