#pragma once

// Scenario files: a model, an ordered task list and run parameters.
//
// {
//   "version": 1,
//   "model": {"kind": "counterexample", "eps_emb": 0.1, "value": "identity"}
//          | {"kind": "tabular", "states": .., "types": [..], "beliefs": [[..]], "values": [..]}
//          | {"kind": "random_polytope", "seed": 1, "types": 6, "states": 7},
//   "tasks": ["classify", "full", "virtual", "compress", "duality", "sweep"],
//   "eps": 0.05, "grid": 201, "verify_multiplier": 10, "duality_grid": 33,
//   "sweep_grids": [9, 17, 33, 65, 129], "tolerances": {"feas": 1e-9, ...},
//   "out": "out", "jobs": 1
// }
//
// Every key except "version", "model" and "tasks" is optional. Unknown keys
// are rejected at every level.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "surplus/models.hpp"
#include "surplus/tolerances.hpp"

namespace surplus::scenario {

using nlohmann::json;

struct ModelSpec {
    enum class Kind { Tabular, Counterexample, RandomPolytope } kind = Kind::Counterexample;
    models::TabularModel tabular;
    double eps_emb = 0.1;
    models::ValuePreset value = models::ValuePreset::Identity;
    std::uint64_t seed = 1;
    std::size_t types = 6;
    std::size_t states = 7;

    bool parametric() const { return kind == Kind::Counterexample; }
};

struct Scenario {
    int version = 1;
    ModelSpec model;
    std::vector<std::string> tasks;
    double eps = 0.05;
    std::size_t grid = 201;
    std::size_t verify_multiplier = 10;
    std::size_t duality_grid = 33;
    std::vector<std::size_t> sweep_grids{9, 17, 33, 65, 129};
    Tolerances tol;
    std::string out = "out";
    std::size_t jobs = 1;

    /// (grid - 1) * verify_multiplier + 1 points.
    std::size_t verify_grid() const { return (grid - 1) * verify_multiplier + 1; }
};

/// Throws ConfigError on any violation.
Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);
void validate(const Scenario& s);
json to_json(const Scenario& s);

/// Applies "key=value" to one tolerance field; throws ConfigError.
void apply_tolerance_override(Tolerances& tol, const std::string& assignment);

/// The preset scenario on the closed-form curve.
Scenario counterexample_scenario();

struct RunResult {
    int exit_code = 0;  // 0 every verdict passed, 1 some task failed
    json report;
    std::vector<std::string> failures;
    std::vector<std::string> files;  // written artifacts
};

/// Runs the tasks in order; writes report.json and CSV figure data to
/// s.out when `write` is set.
RunResult run(const Scenario& s, bool write = true);

// ---- figure data -------------------------------------------------------

struct FigureInputs {
    std::optional<models::ParametricModel> model;
    std::size_t grid = 0;
    json virtual_report;     // verify_menu on the construction grid
    json compressed_report;  // verify_menu of the compressed menu
    json sweep;              // [{"n", "margin", "min_full_norm"}]
};

/// Writes the named figures ("curve", "hull", "surplus", "margins") to
/// `dir`. Throws MissingResults when the inputs for one are absent.
std::vector<std::string> emit_figures(const FigureInputs& in, const std::string& dir,
                                      const std::vector<std::string>& figures);

}  // namespace surplus::scenario
