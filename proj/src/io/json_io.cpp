#include <charconv>
#include <cmath>
#include <fstream>

#include "surplus/error.hpp"
#include "surplus/io.hpp"

namespace surplus::io {

namespace {

// Non-finite numbers become null; JSON has no encoding for them.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

double get_num(const json& j) { return j.is_null() ? extraction::kNoParam : j.get<double>(); }

json provenance(const extraction::Provenance& p) {
    json terms = json::array();
    for (const auto& [alpha, z] : p.terms) terms.push_back({{"alpha", num(alpha)}, {"z", vec(z)}});
    return {{"base", num(p.base)}, {"terms", terms}};
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return {buf, r.ptr};
}

json to_json(const models::TabularModel& m) {
    json j{{"states", m.states}, {"types", m.types}, {"values", vec(m.values)}};
    json b = json::array();
    for (const auto& p : m.beliefs) b.push_back(vec(p));
    j["beliefs"] = b;
    if (!m.params.empty()) j["params"] = vec(m.params);
    return j;
}

models::TabularModel tabular_from_json(const json& j) {
    if (!j.is_object()) throw InvalidModel("tabular model must be a JSON object");
    for (const char* key : {"states", "types", "beliefs", "values"})
        if (!j.contains(key)) throw InvalidModel(std::string("tabular model lacks \"") + key + "\"");
    models::TabularModel m;
    try {
        m.states = j.at("states").get<std::size_t>();
        m.types = j.at("types").get<std::vector<std::string>>();
        m.beliefs = j.at("beliefs").get<std::vector<std::vector<double>>>();
        m.values = j.at("values").get<std::vector<double>>();
        if (j.contains("params")) m.params = j.at("params").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw InvalidModel(std::string("tabular model: ") + e.what());
    }
    m.validate();
    return m;
}

json to_json(const extraction::Menu& menu) {
    json entries = json::array();
    for (const auto& e : menu.entries) {
        json j{{"label", e.label}, {"param", num(e.param)}, {"payments", vec(e.contract.payments)}};
        if (e.contract.provenance) j["provenance"] = provenance(*e.contract.provenance);
        entries.push_back(std::move(j));
    }
    return {{"entries", entries}};
}

extraction::Menu menu_from_json(const json& j) {
    extraction::Menu menu;
    try {
        for (const auto& e : j.at("entries")) {
            extraction::MenuEntry entry;
            entry.label = e.at("label").get<std::string>();
            if (e.contains("param")) entry.param = get_num(e.at("param"));
            entry.contract.payments = e.at("payments").get<std::vector<double>>();
            if (e.contains("provenance")) {
                const auto& p = e.at("provenance");
                extraction::Provenance prov;
                prov.base = p.at("base").get<double>();
                for (const auto& t : p.at("terms"))
                    prov.terms.emplace_back(t.at("alpha").get<double>(), t.at("z").get<std::vector<double>>());
                entry.contract.provenance = std::move(prov);
            }
            menu.entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw InvalidModel(std::string("menu: ") + e.what());
    }
    return menu;
}

json to_json(const extraction::Classification& c) {
    json j{{"label", c.label},
           {"param", num(c.param)},
           {"kind", std::string(extraction::to_string(c.kind))},
           {"margin", num(c.margin)}};
    if (c.kind == extraction::Detectability::NotDetectable) {
        j["witness"] = vec(c.witness);
        j["witness_residual"] = num(c.witness_residual);
        return j;
    }
    j["z"] = vec(c.z);
    if (!std::isnan(c.param)) j["inf_margin_estimate"] = num(c.inf_margin_estimate);
    j["chain_length"] = c.chain.length();
    j["chain_declared"] = c.chain_declared;
    json links = json::array();
    for (std::size_t k = 0; k < c.chain.links.size(); ++k)
        links.push_back({{"stage_size", c.chain.stages[k].size()},
                         {"margin", num(c.chain.links[k].margin)},
                         {"declared", c.chain.links[k].declared},
                         {"z", vec(c.chain.links[k].z)}});
    j["chain"] = links;
    return j;
}

json to_json(const extraction::ExtractionReport& r) {
    static const char* kModes[] = {"full", "virtual", "finite_menu"};
    json types = json::array();
    for (const auto& t : r.types) {
        json j{{"label", t.label}, {"param", num(t.param)}, {"own", num(t.own)}, {"cross", num(t.cross)},
               {"best", num(t.best)}};
        j["own_entry"] = t.own_entry ? json(*t.own_entry) : json(nullptr);
        types.push_back(std::move(j));
    }
    return {{"mode", kModes[static_cast<int>(r.mode.kind)]},
            {"eps", num(r.mode.eps)},
            {"verdict", std::string(extraction::to_string(r.verdict))},
            {"passed", r.passed()},
            {"worst_own_low", num(r.worst_own_low)},
            {"worst_own_high", num(r.worst_own_high)},
            {"worst_cross", num(r.worst_cross)},
            {"worst_best", num(r.worst_best)},
            {"min_best", num(r.min_best)},
            {"lipschitz_slack", num(r.lipschitz_slack)},
            {"failures", r.failures},
            {"types", types}};
}

json to_json(const extraction::FullLpResult& r) {
    json j{{"status", std::string(lp::to_string(r.status))},
           {"objective", num(r.objective)},
           {"max_contract_norm", num(r.max_contract_norm)},
           {"contract_norms", vec(r.contract_norms)},
           {"certificate_passed", r.certificate_passed}};
    if (r.failing_type) {
        j["failing_type"] = *r.failing_type;
        j["farkas"] = vec(r.farkas);
    }
    return j;
}

json to_json(const extraction::TypeLog& log) {
    json stages = json::array();
    for (const auto& s : log.stages)
        stages.push_back({{"stage", s.stage},
                          {"declared", s.declared},
                          {"budget", num(s.budget)},
                          {"radius", num(s.radius)},
                          {"residual", num(s.residual)},
                          {"min_margin", num(s.min_margin)},
                          {"alpha", num(s.alpha)}});
    return {{"label", log.label}, {"param", num(log.param)}, {"method", log.method}, {"stages", stages}};
}

json to_json(const extraction::CompressResult& r) {
    return {{"kept", r.kept}, {"radii", vec(r.radii)}, {"menu", to_json(r.menu)}};
}

json to_json(const duality::DualityReport& r) {
    json nu = json::array();
    for (std::size_t t = 0; t < r.measures.nu.size(); ++t)
        for (std::size_t s = 0; s < r.measures.nu[t].size(); ++s)
            if (r.measures.nu[t][s] != 0.0) nu.push_back({t, s, num(r.measures.nu[t][s])});
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"u", row.u},
                        {"lambda", num(row.lambda)},
                        {"own_mass", num(row.own_mass)},
                        {"gamma_residual", num(row.gamma_residual)},
                        {"weights", vec(row.weights)}});
    json j{{"p_star", num(r.p_star)},
           {"d_star", num(r.d_star)},
           {"gap", num(r.gap)},
           {"verdict", r.holds ? "virtual extraction holds" : "virtual extraction fails"},
           {"holds", r.holds},
           {"lambda", vec(r.measures.lambda)},
           {"nu", nu},
           {"rows", rows},
           {"diagonal_mass", num(r.diagonal_mass)},
           {"marginal_residual", num(r.marginal_residual)},
           {"max_gamma_residual", num(r.max_gamma_residual)},
           {"nu_dot_d", num(r.nu_dot_d)},
           {"primal_certificate", r.primal_certificate},
           {"dual_certificate", r.dual_certificate},
           {"menu", to_json(r.menu)}};
    j["dependence_witness"] = r.dependence_witness ? json(*r.dependence_witness) : json(nullptr);
    return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

}  // namespace surplus::io
