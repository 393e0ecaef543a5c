#include "surplus/duality.hpp"

#include <algorithm>
#include <cmath>

#include "surplus/error.hpp"

namespace surplus::duality {

VseInstance::VseInstance(TabularModel m) : tabular(std::move(m)) {
    tabular.validate();
    const std::size_t n = tabular.size();
    d.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) d[t][s] = t == s ? 0.0 : tabular.values[t] - tabular.values[s];
}

// Variable layout: c, then z(t)_sigma at 1 + t S + sigma.
lp::LinearProgram build_primal(const VseInstance& inst) {
    const auto& m = inst.tabular;
    const std::size_t n = m.size(), S = m.states;
    lp::LinearProgram prog(1 + n * S, lp::Sense::Minimize);
    prog.objective[0] = 1.0;
    for (std::size_t j = 0; j < prog.n_vars; ++j) prog.set_free(j);
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> row(prog.n_vars, 0.0);
        row[0] = -1.0;
        for (std::size_t k = 0; k < S; ++k) row[1 + t * S + k] = m.beliefs[t][k];
        prog.add(std::move(row), lp::Relation::LessEqual, 0.0);
    }
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<double> row(prog.n_vars, 0.0);
            row[0] = -1.0;
            for (std::size_t k = 0; k < S; ++k) row[1 + s * S + k] = -m.beliefs[t][k];
            prog.add(std::move(row), lp::Relation::LessEqual, -inst.d[t][s]);
        }
    }
    return prog;
}

// Variable layout: lambda_u at u, then nu_{t,s} at n + t n + s.
lp::LinearProgram build_dual(const VseInstance& inst) {
    const auto& m = inst.tabular;
    const std::size_t n = m.size(), S = m.states;
    lp::LinearProgram prog(n + n * n, lp::Sense::Maximize);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) prog.objective[n + t * n + s] = inst.d[t][s];
    prog.add(std::vector<double>(prog.n_vars, 1.0), lp::Relation::Equal, 1.0);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t k = 0; k < S; ++k) {
            std::vector<double> row(prog.n_vars, 0.0);
            row[u] = m.beliefs[u][k];
            for (std::size_t t = 0; t < n; ++t) row[n + t * n + u] -= m.beliefs[t][k];
            prog.add(std::move(row), lp::Relation::Equal, 0.0);
        }
    }
    return prog;
}

DualMeasures measures_from(const VseInstance& inst, const std::vector<double>& x) {
    const std::size_t n = inst.tabular.size();
    DualMeasures mu;
    mu.lambda.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    mu.nu.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < n; ++s) mu.nu[t][s] = x[n + t * n + s];
    return mu;
}

std::vector<DisintegrationRow> disintegrate(const DualMeasures& mu, const TabularModel& m, double mass_tol) {
    const std::size_t n = mu.lambda.size();
    std::vector<DisintegrationRow> rows;
    for (std::size_t u = 0; u < n; ++u) {
        if (mu.lambda[u] <= mass_tol) continue;
        DisintegrationRow r;
        r.u = u;
        r.lambda = mu.lambda[u];
        r.weights.resize(n);
        for (std::size_t t = 0; t < n; ++t) r.weights[t] = mu.nu[t][u] / mu.lambda[u];
        r.own_mass = r.weights[u];
        for (std::size_t k = 0; k < m.states; ++k) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t) acc += r.weights[t] * m.beliefs[t][k];
            r.gamma_residual = std::max(r.gamma_residual, std::fabs(m.beliefs[u][k] - acc));
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw DegenerateDual("every lambda_u is at most " + std::to_string(mass_tol));
    return rows;
}

extraction::Menu shift_menu(const TabularModel& m, const std::vector<Vector>& z, double p) {
    extraction::Menu menu;
    for (std::size_t t = 0; t < m.size(); ++t) {
        extraction::Provenance prov;
        prov.base = m.values[t] - p;
        prov.terms.emplace_back(1.0, z[t]);
        menu.entries.push_back({m.types[t], m.params.empty() ? extraction::kNoParam : m.params[t],
                                extraction::compose(m.states, std::move(prov))});
    }
    return menu;
}

DualityReport analyze(const TabularModel& m, const Tolerances& tol) {
    const VseInstance inst(m);
    const std::size_t n = m.size(), S = m.states;
    const auto primal_lp = build_primal(inst);
    const auto dual_lp = build_dual(inst);
    const auto ps = lp::solve(primal_lp);
    const auto ds = lp::solve(dual_lp);
    if (ps.status != lp::Status::Optimal)
        throw SolverFailure("primal program returned " + std::string(lp::to_string(ps.status)));
    if (ds.status != lp::Status::Optimal)
        throw SolverFailure("dual program returned " + std::string(lp::to_string(ds.status)));

    DualityReport rep;
    rep.p_star = ps.objective_value;
    rep.d_star = ds.objective_value;
    rep.gap = std::fabs(rep.p_star - rep.d_star);
    rep.c = ps.primal[0];
    rep.z.assign(n, Vector(S));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < S; ++k) rep.z[t][k] = ps.primal[1 + t * S + k];
    rep.primal_certificate = lp::check_certificate(primal_lp, ps).passed;
    rep.dual_certificate = lp::check_certificate(dual_lp, ds).passed;

    rep.measures = measures_from(inst, ds.primal);
    for (std::size_t u = 0; u < n; ++u) {
        double col = 0.0;
        for (std::size_t t = 0; t < n; ++t) col += rep.measures.nu[t][u];
        rep.marginal_residual = std::max(rep.marginal_residual, std::fabs(rep.measures.lambda[u] - col));
        rep.diagonal_mass += rep.measures.nu[u][u];
        for (std::size_t s = 0; s < n; ++s) rep.nu_dot_d += rep.measures.nu[u][s] * inst.d[u][s];
    }
    rep.rows = disintegrate(rep.measures, m, tol.mass);
    for (const auto& r : rep.rows) {
        rep.max_gamma_residual = std::max(rep.max_gamma_residual, r.gamma_residual);
        if (!rep.dependence_witness && r.own_mass < 1.0 - tol.p) rep.dependence_witness = r.u;
    }
    rep.holds = rep.p_star <= tol.p;
    rep.menu = shift_menu(m, rep.z, rep.p_star);
    return rep;
}

}  // namespace surplus::duality
