#include <algorithm>
#include <fstream>
#include <set>

#include "surplus/error.hpp"
#include "surplus/io.hpp"
#include "surplus/scenario.hpp"

namespace surplus::scenario {

namespace {

const std::vector<std::string> kTasks{"classify", "full", "virtual", "compress", "duality", "sweep"};

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

template <class T>
T read(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

double* tolerance_field(Tolerances& t, const std::string& key) {
    if (key == "feas") return &t.feas;
    if (key == "margin") return &t.margin;
    if (key == "face") return &t.face;
    if (key == "rank") return &t.rank;
    if (key == "p") return &t.p;
    if (key == "mass") return &t.mass;
    if (key == "surplus") return &t.surplus;
    return nullptr;
}

void set_tolerance(Tolerances& t, const std::string& key, double value) {
    double* f = tolerance_field(t, key);
    if (!f) throw ConfigError("unknown tolerance \"" + key + "\"");
    if (!(value > 0.0)) throw ConfigError("tolerance " + key + " must be positive");
    *f = value;
}

ModelSpec parse_model(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("model needs a \"kind\"");
    ModelSpec m;
    const auto kind = read<std::string>(j, "kind", "model");
    if (kind == "tabular") {
        reject_unknown(j, {"kind", "states", "types", "beliefs", "values"}, "model");
        m.kind = ModelSpec::Kind::Tabular;
        json body = j;
        body.erase("kind");
        try {
            m.tabular = io::tabular_from_json(body);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    } else if (kind == "counterexample") {
        reject_unknown(j, {"kind", "eps_emb", "value"}, "model");
        m.kind = ModelSpec::Kind::Counterexample;
        if (j.contains("eps_emb")) m.eps_emb = read<double>(j, "eps_emb", "model");
        if (j.contains("value")) {
            try {
                m.value = models::parse_value_preset(read<std::string>(j, "value", "model"));
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }
    } else if (kind == "random_polytope") {
        reject_unknown(j, {"kind", "seed", "types", "states"}, "model");
        m.kind = ModelSpec::Kind::RandomPolytope;
        if (j.contains("seed")) m.seed = read<std::uint64_t>(j, "seed", "model");
        if (j.contains("types")) m.types = read<std::size_t>(j, "types", "model");
        if (j.contains("states")) m.states = read<std::size_t>(j, "states", "model");
    } else {
        throw ConfigError("unknown model kind \"" + kind + "\"");
    }
    return m;
}

}  // namespace

void apply_tolerance_override(Tolerances& tol, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("tolerance override must be key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(assignment.substr(eq + 1), &used);
        if (used != assignment.size() - eq - 1) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
        throw ConfigError("tolerance override has a non-numeric value: " + assignment);
    }
    set_tolerance(tol, key, value);
}

Scenario parse_scenario(const json& j) {
    reject_unknown(j,
                   {"version", "model", "tasks", "eps", "grid", "verify_multiplier", "duality_grid", "sweep_grids",
                    "tolerances", "out", "jobs"},
                   "scenario");
    if (!j.contains("version")) throw ConfigError("scenario lacks \"version\"");
    if (!j.contains("model")) throw ConfigError("scenario lacks \"model\"");
    if (!j.contains("tasks")) throw ConfigError("scenario lacks \"tasks\"");
    Scenario s;
    s.version = read<int>(j, "version", "scenario");
    s.model = parse_model(j.at("model"));
    s.tasks = read<std::vector<std::string>>(j, "tasks", "scenario");
    if (j.contains("eps")) s.eps = read<double>(j, "eps", "scenario");
    if (j.contains("grid")) s.grid = read<std::size_t>(j, "grid", "scenario");
    if (j.contains("verify_multiplier")) s.verify_multiplier = read<std::size_t>(j, "verify_multiplier", "scenario");
    if (j.contains("duality_grid")) s.duality_grid = read<std::size_t>(j, "duality_grid", "scenario");
    if (j.contains("sweep_grids")) s.sweep_grids = read<std::vector<std::size_t>>(j, "sweep_grids", "scenario");
    if (j.contains("out")) s.out = read<std::string>(j, "out", "scenario");
    if (j.contains("jobs")) s.jobs = read<std::size_t>(j, "jobs", "scenario");
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("tolerances must be a JSON object");
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number()) throw ConfigError("tolerance " + key + " must be a number");
            set_tolerance(s.tol, key, value.get<double>());
        }
    }
    validate(s);
    return s;
}

void validate(const Scenario& s) {
    if (s.version != 1) throw ConfigError("unsupported scenario version " + std::to_string(s.version));
    if (s.tasks.empty()) throw ConfigError("tasks must be nonempty");
    std::set<std::string> seen;
    for (const auto& t : s.tasks) {
        if (std::find(kTasks.begin(), kTasks.end(), t) == kTasks.end()) throw ConfigError("unknown task \"" + t + "\"");
        if (!seen.insert(t).second) throw ConfigError("task \"" + t + "\" listed twice");
    }
    const bool needs_eps = seen.count("virtual") || seen.count("compress");
    if (needs_eps && !(s.eps > 0.0)) throw ConfigError("eps must be positive for virtual and compress");
    if (!s.model.parametric()) {
        for (const char* t : {"compress", "sweep"})
            if (seen.count(t)) throw ConfigError(std::string("task \"") + t + "\" needs a parametric model");
    }
    if (s.model.kind == ModelSpec::Kind::Counterexample) {
        try {
            models::counterexample(s.model.eps_emb, s.model.value);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    if (s.model.kind == ModelSpec::Kind::RandomPolytope && (s.model.types < 1 || s.model.states < 2))
        throw ConfigError("random_polytope needs types >= 1 and states >= 2");
    if (s.grid < 2) throw ConfigError("grid must have at least 2 points");
    if (s.verify_multiplier < 1) throw ConfigError("verify_multiplier must be at least 1");
    if (s.duality_grid < 2) throw ConfigError("duality_grid must have at least 2 points");
    if (seen.count("sweep")) {
        if (s.sweep_grids.empty()) throw ConfigError("sweep_grids must be nonempty");
        for (std::size_t n : s.sweep_grids)
            if (n < 3) throw ConfigError("sweep grids need at least 3 points");
    }
    if (s.jobs < 1) throw ConfigError("jobs must be at least 1");
    if (s.out.empty()) throw ConfigError("out must be a directory name");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_scenario(j);
}

json to_json(const Scenario& s) {
    json model;
    switch (s.model.kind) {
        case ModelSpec::Kind::Tabular:
            model = io::to_json(s.model.tabular);
            model["kind"] = "tabular";
            break;
        case ModelSpec::Kind::Counterexample:
            model = {{"kind", "counterexample"}, {"eps_emb", s.model.eps_emb},
                     {"value", std::string(models::to_string(s.model.value))}};
            break;
        case ModelSpec::Kind::RandomPolytope:
            model = {{"kind", "random_polytope"}, {"seed", s.model.seed}, {"types", s.model.types},
                     {"states", s.model.states}};
            break;
    }
    return {{"version", s.version},
            {"model", model},
            {"tasks", s.tasks},
            {"eps", s.eps},
            {"grid", s.grid},
            {"verify_multiplier", s.verify_multiplier},
            {"duality_grid", s.duality_grid},
            {"sweep_grids", s.sweep_grids},
            {"tolerances",
             {{"feas", s.tol.feas},
              {"margin", s.tol.margin},
              {"face", s.tol.face},
              {"rank", s.tol.rank},
              {"p", s.tol.p},
              {"mass", s.tol.mass},
              {"surplus", s.tol.surplus}}}};
}

Scenario counterexample_scenario() {
    Scenario s;
    s.model.kind = ModelSpec::Kind::Counterexample;
    s.tasks = {"classify", "virtual", "compress", "duality", "sweep"};
    return s;
}

}  // namespace surplus::scenario
