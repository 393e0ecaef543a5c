#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "surplus/error.hpp"
#include "surplus/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace surplus;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("surplus_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome cli(const std::string& args, const fs::path& dir) {
    const char* bin = std::getenv("SURPLUS_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "SURPLUS_CLI is not set");
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + bin + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
}

fs::path write_config(const fs::path& dir, const json& j) {
    const auto p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

json identical_pair_config(const std::vector<std::string>& tasks) {
    return {{"version", 1},
            {"model",
             {{"kind", "tabular"},
              {"states", 2},
              {"types", {"a", "b"}},
              {"beliefs", {{0.3, 0.7}, {0.3, 0.7}}},
              {"values", {2.0, 1.0}}}},
            {"tasks", tasks}};
}

}  // namespace

TEST_CASE("counterexample scenario end to end") {
    const auto dir = scratch("cx");
    const json cfg{{"version", 1},
                   {"model", {{"kind", "counterexample"}, {"eps_emb", 0.1}, {"value", "identity"}}},
                   {"tasks", {"classify", "virtual", "duality"}},
                   {"eps", 0.05},
                   {"grid", 101},
                   {"duality_grid", 17}};
    const auto path = write_config(dir, cfg);
    const auto o = cli("analyze \"" + path.string() + "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK_MESSAGE(o.code == 0, o.err);
    const auto report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report.at("passed").get<bool>());
    const auto& types = report.at("tasks").at("classify").at("types");
    CHECK(types.front().at("kind") == "EventuallyDetectable");
    CHECK(types.back().at("kind") == "EventuallyDetectable");
    CHECK(types.front().at("chain_length") == 2);

    const auto curve = read_csv(dir / "out" / "curve.csv");
    REQUIRE(curve.size() == 102);
    CHECK(curve[0] == std::vector<std::string>{"t", "x", "y", "pi1", "pi2", "pi3"});
    CHECK(std::stod(curve[1][0]) == 0.0);
    CHECK(std::stod(curve[1][1]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::stod(curve[1][2]) == doctest::Approx(1.0).epsilon(1e-15));

    const auto surplus = read_csv(dir / "out" / "surplus.csv");
    REQUIRE(surplus.size() == 102);
    for (std::size_t k = 1; k < surplus.size(); ++k) {
        const double own = std::stod(surplus[k][2]);
        CHECK(own >= 0.0);
        CHECK(own <= 1e-8);
    }
    const auto hull = read_csv(dir / "out" / "hull.csv");
    CHECK(hull.size() >= 4);
    CHECK(hull[1][1] == hull.back()[1]);

    // Same config, more threads: identical report.
    const auto o2 = cli("analyze \"" + path.string() + "\" --jobs 2 --out \"" + (dir / "out2").string() + "\"", dir);
    CHECK(o2.code == 0);
    CHECK(slurp(dir / "out" / "report.json") == slurp(dir / "out2" / "report.json"));
}

TEST_CASE("designed failure exits 1 and names the error") {
    const auto dir = scratch("fail");
    const auto path = write_config(dir, identical_pair_config({"full"}));
    const auto o = cli("analyze \"" + path.string() + "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK(o.code == 1);
    CHECK(o.err.find("NotAllDetectable") != std::string::npos);
    const auto report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK_FALSE(report.at("passed").get<bool>());
    CHECK(report.at("tasks").at("full").at("error") == "NotAllDetectable");
    CHECK(report.at("tasks").at("full").at("lp").at("status") == "infeasible");
}

TEST_CASE("configuration errors exit 2") {
    const auto dir = scratch("config");
    auto check2 = [&](const json& cfg, const std::string& extra = "") {
        const auto path = write_config(dir, cfg);
        const auto o = cli("analyze \"" + path.string() + "\" --out \"" + (dir / "out").string() + "\" " + extra, dir);
        CHECK_MESSAGE(o.code == 2, cfg.dump());
    };
    check2(identical_pair_config({}));
    auto unknown = identical_pair_config({"duality"});
    unknown["colour"] = "red";
    check2(unknown);
    check2(identical_pair_config({"compress"}));
    auto version = identical_pair_config({"duality"});
    version["version"] = 7;
    check2(version);
    check2(identical_pair_config({"duality"}), "--tol-override bogus=1");
    check2(identical_pair_config({"duality"}), "--tol-override feas=abc");
    const auto o = cli("analyze \"" + (dir / "missing.json").string() + "\"", dir);
    CHECK(o.code == 2);
    CHECK(cli("frobnicate", dir).code == 2);
}

TEST_CASE("sweep subcommand writes decreasing margins") {
    const auto dir = scratch("sweep");
    const json cfg{{"version", 1}, {"model", {{"kind", "counterexample"}}}, {"tasks", {"classify"}}};
    const auto path = write_config(dir, cfg);
    const auto o =
        cli("sweep --grids 9,17,33 \"" + path.string() + "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK_MESSAGE(o.code == 0, o.err);
    const auto rows = read_csv(dir / "out" / "margins.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"n", "margin", "min_full_norm"});
    for (std::size_t k = 2; k < rows.size(); ++k) {
        CHECK(std::stod(rows[k][1]) < std::stod(rows[k - 1][1]));
        CHECK(std::stod(rows[k][2]) > std::stod(rows[k - 1][2]));
    }
}

TEST_CASE("scenario parsing") {
    const auto s = scenario::parse_scenario(
        {{"version", 1}, {"model", {{"kind", "random_polytope"}, {"seed", 3}, {"types", 5}, {"states", 6}}},
         {"tasks", {"classify", "full", "duality"}}, {"tolerances", {{"p", 1e-5}}}});
    CHECK(s.model.kind == scenario::ModelSpec::Kind::RandomPolytope);
    CHECK(s.tol.p == 1e-5);
    CHECK(s.verify_grid() == 2001);
    CHECK_THROWS_AS(scenario::parse_scenario({{"version", 1}, {"model", {{"kind", "moon"}}}, {"tasks", {"full"}}}),
                    ConfigError);
    CHECK_THROWS_AS(scenario::parse_scenario({{"version", 1},
                                              {"model", {{"kind", "counterexample"}}},
                                              {"tasks", {"virtual"}},
                                              {"eps", 0.0}}),
                    ConfigError);
    CHECK_THROWS_AS(scenario::parse_scenario({{"version", 1},
                                              {"model", {{"kind", "counterexample"}, {"eps_emb", 0.5}}},
                                              {"tasks", {"classify"}}}),
                    ConfigError);
    Tolerances t;
    scenario::apply_tolerance_override(t, "margin=1e-6");
    CHECK(t.margin == 1e-6);
    CHECK_THROWS_AS(scenario::apply_tolerance_override(t, "margin"), ConfigError);

    // A random polytope in general position runs clean in process.
    auto run_s = s;
    run_s.out = (scratch("inproc") / "out").string();
    const auto res = scenario::run(run_s);
    CHECK(res.exit_code == 0);
    CHECK(res.report.at("tasks").at("full").at("passed").get<bool>());

    scenario::FigureInputs empty;
    CHECK_THROWS_AS(scenario::emit_figures(empty, run_s.out, {"surplus"}), MissingResults);
    CHECK_THROWS_AS(scenario::emit_figures(empty, run_s.out, {"curve"}), MissingResults);
}
