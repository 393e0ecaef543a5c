#include <cmath>
#include <filesystem>
#include <fstream>

#include "surplus/duality.hpp"
#include "surplus/error.hpp"
#include "surplus/extraction.hpp"
#include "surplus/io.hpp"
#include "surplus/parallel.hpp"
#include "surplus/scenario.hpp"

namespace surplus::scenario {

namespace {

using extraction::VerifyMode;

struct Runner {
    const Scenario& s;
    std::optional<models::ParametricModel> param;
    models::TabularModel tab;  // the tabular model, or the parametric model on the construction grid
    std::optional<extraction::VirtualResult> virt;
    FigureInputs fig;
    std::vector<std::string> failures;

    explicit Runner(const Scenario& sc) : s(sc) {
        try {
            switch (s.model.kind) {
                case ModelSpec::Kind::Tabular:
                    tab = s.model.tabular;
                    break;
                case ModelSpec::Kind::RandomPolytope:
                    tab = models::random_polytope(s.model.seed, s.model.types, s.model.states);
                    break;
                case ModelSpec::Kind::Counterexample:
                    param = models::counterexample(s.model.eps_emb, s.model.value);
                    tab = models::sample(*param, s.grid);
                    break;
            }
        } catch (const InvalidModel& e) {
            throw ConfigError(e.what());
        } catch (const InvalidBelief& e) {
            throw ConfigError(e.what());
        }
        fig.model = param;
        fig.grid = s.grid;
    }

    void fail(const std::string& task, const std::string& why) { failures.push_back(task + ": " + why); }

    json classify() {
        const extraction::ClassifyOptions opts{s.tol};
        const auto classes = param ? extraction::classify_grid(*param, s.grid, s.jobs, opts)
                                   : extraction::classify_all(tab, s.jobs, opts);
        json counts = json::object();
        json types = json::array();
        for (const auto& c : classes) {
            counts[std::string(extraction::to_string(c.kind))] =
                counts.value(std::string(extraction::to_string(c.kind)), 0) + 1;
            types.push_back(io::to_json(c));
        }
        return {{"passed", true}, {"counts", counts}, {"types", types}};
    }

    json full() {
        json j;
        j["lp"] = io::to_json(extraction::full_extraction_lp(tab, s.jobs));
        try {
            const auto menu = extraction::full_extraction_menu(tab, s.tol);
            const auto rep = extraction::verify_menu(tab, menu, VerifyMode::full(), s.tol);
            j["menu"] = io::to_json(menu);
            j["verify"] = io::to_json(rep);
            j["passed"] = rep.passed();
            if (!rep.passed()) fail("full", "verify_menu(Full) failed: " + rep.failures.front());
        } catch (const NotAllDetectable& e) {
            j["passed"] = false;
            j["error"] = e.kind();
            j["message"] = e.what();
            fail("full", e.what());
        }
        return j;
    }

    json virtual_task() {
        json j;
        if (!param) {
            // No curve to build over: use the shifted primal optimum, which
            // leaves each type between 0 and 2 p* of surplus.
            const auto d = duality::analyze(tab, s.tol);
            const auto rep = extraction::verify_menu(tab, d.menu, VerifyMode::virtual_eps(s.eps), s.tol);
            j = {{"method", "shift"}, {"p_star", d.p_star}, {"menu", io::to_json(d.menu)},
                 {"verify", io::to_json(rep)}, {"passed", rep.passed()}};
            if (!rep.passed()) fail("virtual", "verify_menu(Virtual) failed: " + rep.failures.front());
            return j;
        }
        virt = extraction::virtual_extraction_menu(*param, s.eps, s.grid, {s.jobs, s.tol});
        const auto coarse = extraction::verify_menu(*param, virt->menu, s.grid, VerifyMode::virtual_eps(s.eps), s.tol);
        const auto fine =
            extraction::verify_menu(*param, virt->menu, s.verify_grid(), VerifyMode::virtual_eps(s.eps), s.tol);
        json logs = json::array();
        for (const auto& l : virt->log) logs.push_back(io::to_json(l));
        j = {{"method", "construction"}, {"menu", io::to_json(virt->menu)}, {"log", logs},
             {"verify_grid", io::to_json(coarse)}, {"verify_fine", io::to_json(fine)},
             {"passed", coarse.passed() && fine.passed()}};
        fig.virtual_report = j["verify_grid"];
        if (!coarse.passed()) fail("virtual", "construction grid: " + coarse.failures.front());
        if (!fine.passed()) fail("virtual", "verification grid: " + fine.failures.front());
        return j;
    }

    json compress() {
        if (!virt) virt = extraction::virtual_extraction_menu(*param, s.eps, s.grid, {s.jobs, s.tol});
        const auto res = extraction::compress_menu(*param, virt->menu, s.eps, s.grid, s.tol);
        const auto rep =
            extraction::verify_menu(*param, res.menu, s.grid, VerifyMode::finite_menu(2.0 * s.eps), s.tol);
        json j = io::to_json(res);
        j["size"] = res.menu.size();
        j["verify"] = io::to_json(rep);
        j["passed"] = rep.passed();
        fig.compressed_report = j["verify"];
        if (!rep.passed()) fail("compress", "verify_menu(FiniteMenu) failed: " + rep.failures.front());
        return j;
    }

    json duality_task() {
        const auto m = param ? models::sample(*param, s.duality_grid) : tab;
        const auto d = duality::analyze(m, s.tol);
        json j = io::to_json(d);
        j["types"] = m.size();
        const bool strong = d.gap <= 1e-7 * (1.0 + std::fabs(d.p_star));
        j["passed"] = d.holds && strong;
        if (!d.holds) fail("duality", "p* = " + io::format_double(d.p_star) + " exceeds the p tolerance");
        if (!strong) fail("duality", "duality gap " + io::format_double(d.gap));
        return j;
    }

    json sweep() {
        const auto& grids = s.sweep_grids;
        std::vector<double> margins(grids.size()), norms(grids.size());
        std::vector<std::string> status(grids.size());
        parallel_for(grids.size(), s.jobs, [&](std::size_t k) {
            const auto m = models::sample(*param, grids[k]);
            margins[k] = geometry::exposure_margin(m.belief_set(), {0}).margin;
            const auto full = extraction::full_extraction_lp(m);
            norms[k] = full.max_contract_norm;
            status[k] = lp::to_string(full.status);
        });
        json rows = json::array();
        bool decreasing = true;
        for (std::size_t k = 0; k < grids.size(); ++k) {
            rows.push_back({{"n", grids[k]}, {"margin", margins[k]}, {"min_full_norm", norms[k]},
                            {"full_status", status[k]}});
            if (k > 0 && !(margins[k] < margins[k - 1])) decreasing = false;
        }
        fig.sweep = rows;
        if (!decreasing) fail("sweep", "type-0 margin is not strictly decreasing in n");
        return {{"passed", decreasing}, {"grids", rows}};
    }

    json dispatch(const std::string& task) {
        if (task == "classify") return classify();
        if (task == "full") return full();
        if (task == "virtual") return virtual_task();
        if (task == "compress") return compress();
        if (task == "duality") return duality_task();
        return sweep();
    }
};

}  // namespace

RunResult run(const Scenario& s, bool write) {
    validate(s);
    Runner r(s);
    json tasks = json::object();
    for (const auto& task : s.tasks) {
        try {
            tasks[task] = r.dispatch(task);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            tasks[task] = {{"passed", false}, {"error", e.kind()}, {"message", e.what()}};
            r.fail(task, e.what());
        }
    }

    RunResult res;
    res.failures = r.failures;
    res.exit_code = r.failures.empty() ? 0 : 1;
    res.report = {{"scenario", to_json(s)},
                  {"tasks", tasks},
                  {"failures", r.failures},
                  {"passed", r.failures.empty()}};
    if (!write) return res;

    std::error_code ec;
    std::filesystem::create_directories(s.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + s.out + ": " + ec.message());
    const std::string report_path = (std::filesystem::path(s.out) / "report.json").string();
    {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + report_path);
        out << res.report.dump(2) << '\n';
    }
    res.files.push_back(report_path);

    std::vector<std::string> figures;
    if (r.fig.model) figures = {"curve", "hull"};
    if (!r.fig.virtual_report.is_null()) figures.push_back("surplus");
    if (!r.fig.sweep.is_null()) figures.push_back("margins");
    const auto written = emit_figures(r.fig, s.out, figures);
    res.files.insert(res.files.end(), written.begin(), written.end());
    return res;
}

}  // namespace surplus::scenario
