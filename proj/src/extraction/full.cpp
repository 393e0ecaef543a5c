#include <algorithm>
#include <cmath>

#include "surplus/error.hpp"
#include "surplus/extraction.hpp"
#include "surplus/parallel.hpp"

namespace surplus::extraction {

Contract compose(std::size_t states, Provenance p) {
    Contract c;
    c.payments.assign(states, p.base);
    for (const auto& [alpha, z] : p.terms)
        for (std::size_t k = 0; k < states; ++k) c.payments[k] += alpha * z[k];
    c.provenance = std::move(p);
    return c;
}

Menu full_extraction_menu(const TabularModel& m, const Tolerances& tol) {
    m.validate();
    const auto set = m.belief_set();
    const std::size_t n = m.size();

    std::vector<std::optional<geometry::Exposure>> exposures(n);
    std::vector<std::string> failing;
    for (std::size_t t = 0; t < n; ++t) {
        if (n == 1) break;
        exposures[t] = geometry::expose_set(set, {t}, tol.margin);
        if (!exposures[t]) {
            std::string entry = m.types[t];
            const auto ext = geometry::is_extreme(set, t);
            if (!ext.extreme) {
                entry += " (mu:";
                for (std::size_t j = 0; j < n; ++j)
                    if (ext.witness[j] > 0.0) entry += " " + m.types[j] + "=" + std::to_string(ext.witness[j]);
                entry += ")";
            }
            failing.push_back(std::move(entry));
        }
    }
    if (!failing.empty()) {
        std::string msg = std::to_string(failing.size()) + " type(s) not detectable:";
        for (const auto& f : failing) msg += " " + f;
        throw NotAllDetectable(msg);
    }

    Menu menu;
    for (std::size_t t = 0; t < n; ++t) {
        Provenance p;
        p.base = m.values[t];
        if (n > 1) {
            const auto& z = exposures[t]->z;
            double ratio = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                if (s == t) continue;
                ratio = std::max(ratio, (m.values[s] - m.values[t]) / geometry::evaluate(m.beliefs[s], z));
            }
            p.terms.emplace_back(kSafetyFactor * ratio + 1.0, z);
        }
        menu.entries.push_back({m.types[t], m.params.empty() ? kNoParam : m.params[t], compose(m.states, std::move(p))});
    }
    return menu;
}

namespace {

// Appends the block for contract t with its variables starting at `offset`.
void add_block(lp::LinearProgram& prog, const TabularModel& m, std::size_t t, std::size_t offset) {
    const std::size_t s_count = m.states;
    const std::size_t u = offset + s_count;
    for (std::size_t k = 0; k < s_count; ++k) prog.set_free(offset + k);
    prog.objective[u] = 1.0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        std::vector<double> row(prog.n_vars, 0.0);
        std::copy(m.beliefs[s].begin(), m.beliefs[s].end(), row.begin() + static_cast<std::ptrdiff_t>(offset));
        prog.add(std::move(row), s == t ? lp::Relation::Equal : lp::Relation::GreaterEqual, m.values[s]);
    }
    for (std::size_t k = 0; k < s_count; ++k) {
        for (double sign : {-1.0, 1.0}) {
            std::vector<double> row(prog.n_vars, 0.0);
            row[u] = 1.0;
            row[offset + k] = sign;
            prog.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
        }
    }
}

}  // namespace

lp::LinearProgram build_full_extraction_block(const TabularModel& m, std::size_t t) {
    lp::LinearProgram prog(m.states + 1, lp::Sense::Minimize);
    add_block(prog, m, t, 0);
    return prog;
}

lp::LinearProgram build_full_extraction_lp(const TabularModel& m) {
    const std::size_t width = m.states + 1;
    lp::LinearProgram prog(width * m.size(), lp::Sense::Minimize);
    for (std::size_t t = 0; t < m.size(); ++t) add_block(prog, m, t, t * width);
    return prog;
}

FullLpResult full_extraction_lp(const TabularModel& m, std::size_t jobs) {
    m.validate();
    const std::size_t n = m.size();
    std::vector<lp::LpSolution> sols(n);
    parallel_for(n, jobs, [&](std::size_t t) { sols[t] = lp::solve(build_full_extraction_block(m, t)); });

    FullLpResult res;
    res.status = lp::Status::Optimal;
    for (std::size_t t = 0; t < n; ++t) {
        if (sols[t].status == lp::Status::Optimal) continue;
        res.status = sols[t].status;
        res.failing_type = t;
        res.farkas = sols[t].duals;
        res.certificate_passed = lp::check_certificate(build_full_extraction_block(m, t), sols[t]).passed;
        return res;
    }

    Menu menu;
    for (std::size_t t = 0; t < n; ++t) {
        const auto& x = sols[t].primal;
        Provenance p;
        p.base = m.values[t];
        Functional z(m.states);
        for (std::size_t k = 0; k < m.states; ++k) z[k] = x[k] - m.values[t];
        p.terms.emplace_back(1.0, std::move(z));
        Contract c;
        c.payments.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m.states));
        c.provenance = std::move(p);
        menu.entries.push_back({m.types[t], m.params.empty() ? kNoParam : m.params[t], std::move(c)});
        res.contract_norms.push_back(x[m.states]);
        res.max_contract_norm = std::max(res.max_contract_norm, x[m.states]);
        res.objective += sols[t].objective_value;
    }
    res.certificate_passed = true;
    for (std::size_t t = 0; t < n && res.certificate_passed; ++t)
        res.certificate_passed = lp::check_certificate(build_full_extraction_block(m, t), sols[t]).passed;
    res.menu = std::move(menu);
    return res;
}

}  // namespace surplus::extraction
