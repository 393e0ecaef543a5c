#include <filesystem>

#include "surplus/error.hpp"
#include "surplus/io.hpp"
#include "surplus/scenario.hpp"

namespace surplus::scenario {

namespace {

using io::format_double;

std::string cell(const json& v) { return v.is_null() ? std::string() : format_double(v.get<double>()); }

void surplus_rows(const json& report, const char* menu, std::vector<std::vector<std::string>>& rows) {
    for (const auto& t : report.at("types"))
        rows.push_back({menu, cell(t.at("param")), cell(t.at("own")), cell(t.at("cross")), cell(t.at("best"))});
}

}  // namespace

std::vector<std::string> emit_figures(const FigureInputs& in, const std::string& dir,
                                      const std::vector<std::string>& figures) {
    std::vector<std::string> written;
    auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    for (const auto& f : figures) {
        if (f == "curve" || f == "hull") {
            if (!in.model || in.grid < 2) throw MissingResults(f + " needs the parametric model and a grid");
            const auto ts = models::uniform_grid(in.grid);
            if (f == "curve") {
                std::vector<std::vector<std::string>> rows;
                for (double t : ts) {
                    const auto [x, y] = models::curve_point(t);
                    const auto p = in.model->belief(t);
                    std::vector<std::string> r{format_double(t), format_double(x), format_double(y)};
                    for (double q : p) r.push_back(format_double(q));
                    rows.push_back(std::move(r));
                }
                std::vector<std::string> header{"t", "x", "y"};
                for (std::size_t k = 0; k < in.model->states; ++k) header.push_back("pi" + std::to_string(k + 1));
                io::write_csv(path("curve.csv"), header, rows);
                written.push_back(path("curve.csv"));
            } else {
                std::vector<std::pair<double, double>> pts;
                for (double t : ts) pts.push_back(models::curve_point(t));
                auto hull = geometry::convex_hull_2d(pts);
                if (!hull.empty()) hull.push_back(hull.front());
                std::vector<std::vector<std::string>> rows;
                for (std::size_t k = 0; k < hull.size(); ++k)
                    rows.push_back({std::to_string(k), format_double(hull[k].first), format_double(hull[k].second)});
                io::write_csv(path("hull.csv"), {"vertex", "x", "y"}, rows);
                written.push_back(path("hull.csv"));
            }
        } else if (f == "surplus") {
            if (in.virtual_report.is_null()) throw MissingResults("surplus needs a virtual extraction report");
            std::vector<std::vector<std::string>> rows;
            surplus_rows(in.virtual_report, "virtual", rows);
            if (!in.compressed_report.is_null()) surplus_rows(in.compressed_report, "compressed", rows);
            io::write_csv(path("surplus.csv"), {"menu", "t", "own", "best_cross", "best"}, rows);
            written.push_back(path("surplus.csv"));
        } else if (f == "margins") {
            if (in.sweep.is_null()) throw MissingResults("margins needs sweep results");
            std::vector<std::vector<std::string>> rows;
            for (const auto& r : in.sweep)
                rows.push_back({std::to_string(r.at("n").get<std::size_t>()), cell(r.at("margin")),
                                cell(r.at("min_full_norm"))});
            io::write_csv(path("margins.csv"), {"n", "margin", "min_full_norm"}, rows);
            written.push_back(path("margins.csv"));
        } else {
            throw MissingResults("unknown figure " + f);
        }
    }
    return written;
}

}  // namespace surplus::scenario
