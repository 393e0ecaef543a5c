#include <algorithm>
#include <cmath>
#include <limits>

#include "surplus/error.hpp"
#include "surplus/extraction.hpp"
#include "surplus/parallel.hpp"

namespace surplus::extraction {

namespace {

double sup_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Radius budget / modulus, infinite when the modulus vanishes.
double radius(double budget, double modulus) { return modulus > 0.0 ? budget / modulus : lp::kInf; }

struct Builder {
    const TabularModel& tab;
    const std::vector<double>& ts;
    double lipschitz_pi;
    double lipschitz_v;

    double surplus(std::size_t s, const Vector& c) const { return tab.values[s] - geometry::evaluate(tab.beliefs[s], c); }

    // Case 1 restricted to `scope`: alpha = 2 max over scope types at least
    // delta = budget / (2 L_v) away of (v(s) - v(t)) / pi(s).z.
    double case1_alpha(std::size_t i, const Functional& z, const geometry::IndexSet& scope, double budget,
                       StageLog& log) const {
        const double delta = radius(budget, 2.0 * lipschitz_v);
        double ratio = 0.0;
        double min_margin = lp::kInf;
        for (std::size_t s : scope) {
            if (s == i) continue;
            const double pz = geometry::evaluate(tab.beliefs[s], z);
            min_margin = std::min(min_margin, pz);
            if (std::fabs(ts[s] - ts[i]) < delta) continue;
            const double gain = tab.values[s] - tab.values[i];
            if (gain <= 0.0) continue;
            if (!(pz > 0.0))
                throw BudgetInfeasible("type " + tab.types[i] + ": functional vanishes at far type " + tab.types[s]);
            ratio = std::max(ratio, gain / pz);
        }
        log.budget = budget;
        log.radius = delta;
        log.min_margin = min_margin;
        log.alpha = kSafetyFactor * ratio;
        return log.alpha;
    }

    MenuEntry build(std::size_t i, const Classification& cls, double eps, TypeLog& log) const {
        Provenance p;
        p.base = tab.values[i];
        log.label = tab.types[i];
        log.param = ts[i];

        if (cls.kind == Detectability::Detectable || cls.kind == Detectability::StronglyDetectable) {
            log.method = "case1";
            geometry::IndexSet all(tab.size());
            for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
            StageLog st;
            st.stage = 1;
            st.declared = cls.chain_declared;
            p.terms.emplace_back(case1_alpha(i, cls.z, all, eps, st), cls.z);
            log.stages.push_back(st);
        } else {
            log.method = "case2";
            const auto& chain = cls.chain;
            const std::size_t n = chain.length();
            const double budget = eps / static_cast<double>(n);

            // Innermost: expose {t} inside the last proper stage.
            StageLog inner;
            inner.stage = n;
            inner.declared = chain.links[n - 1].declared;
            const double a_inner = case1_alpha(i, chain.links[n - 1].z, chain.stages[n - 1], budget, inner);
            std::vector<std::pair<double, Functional>> terms{{a_inner, chain.links[n - 1].z}};
            std::vector<StageLog> stages{inner};
            Vector c = compose(tab.states, Provenance{p.base, terms}).payments;

            for (std::size_t k = n - 1; k >= 1; --k) {
                const auto& outer = chain.stages[k - 1];
                const auto& face = chain.stages[k];
                const auto& link = chain.links[k - 1];
                StageLog st;
                st.stage = k;
                st.declared = link.declared;
                st.budget = budget;
                st.radius = radius(budget, lipschitz_v + sup_norm(c) * lipschitz_pi);
                double r = 0.0;
                double min_margin = lp::kInf;
                for (std::size_t s : outer) {
                    if (std::binary_search(face.begin(), face.end(), s)) continue;
                    min_margin = std::min(min_margin, geometry::evaluate(tab.beliefs[s], link.z));
                    const bool covered = std::any_of(face.begin(), face.end(), [&](std::size_t f) {
                        return std::fabs(ts[s] - ts[f]) <= st.radius;
                    });
                    if (!covered) r = std::max(r, surplus(s, c));
                }
                st.residual = r;
                st.min_margin = min_margin;
                if (r > 0.0 && !(min_margin > 0.0))
                    throw BudgetInfeasible("type " + tab.types[i] + ": stage " + std::to_string(k) +
                                           " functional does not separate its face");
                st.alpha = r > 0.0 ? kSafetyFactor * r / min_margin : 0.0;
                for (std::size_t q = 0; q < c.size(); ++q) c[q] += st.alpha * link.z[q];
                terms.insert(terms.begin(), {st.alpha, link.z});
                stages.insert(stages.begin(), st);
            }
            p.terms = std::move(terms);
            log.stages = std::move(stages);
        }

        // Rounding in large payments can leave the owner a hair below zero
        // surplus; lower the base until the recomputed surplus is >= 0.
        auto contract = compose(tab.states, p);
        double pad = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + sup_norm(contract.payments));
        for (double own = surplus(i, contract.payments); own < 0.0; own = surplus(i, contract.payments)) {
            p.base -= -own + pad;
            pad *= 2.0;
            contract = compose(tab.states, p);
        }
        return {tab.types[i], ts[i], std::move(contract)};
    }
};

}  // namespace

VirtualResult virtual_extraction_menu(const ParametricModel& m, double eps, std::size_t grid,
                                      const VirtualOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("virtual extraction needs eps > 0");
    VirtualResult res;
    res.grid = models::uniform_grid(grid);
    const auto tab = models::sample_at(m, res.grid);
    const std::size_t n = tab.size();
    res.menu.entries.resize(n);
    res.log.resize(n);

    if (geometry::affine_dimension(tab.belief_set(), opts.tol.rank) == 0) {
        // Every type holds the same belief: constant payments are all that is available.
        for (std::size_t i = 0; i < n; ++i) {
            res.menu.entries[i] = {tab.types[i], res.grid[i], compose(tab.states, Provenance{tab.values[i], {}})};
            res.log[i] = {tab.types[i], res.grid[i], "constant", {}};
        }
        return res;
    }

    const auto classes = classify_grid(m, grid, opts.jobs, ClassifyOptions{opts.tol});
    std::string missing;
    for (const auto& c : classes)
        if (c.kind == Detectability::NotDetectable) missing += " " + c.label;
    if (!missing.empty()) throw NotEventuallyDetectable("types not eventually detectable:" + missing);

    const Builder b{tab, res.grid, m.lipschitz_pi, m.lipschitz_v};
    parallel_for(n, opts.jobs, [&](std::size_t i) { res.menu.entries[i] = b.build(i, classes[i], eps, res.log[i]); });
    return res;
}

}  // namespace surplus::extraction
