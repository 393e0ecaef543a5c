#include <algorithm>
#include <cmath>

#include "surplus/error.hpp"
#include "surplus/extraction.hpp"
#include "surplus/parallel.hpp"

namespace surplus::extraction {

std::string_view to_string(Detectability d) {
    switch (d) {
        case Detectability::StronglyDetectable:
            return "StronglyDetectable";
        case Detectability::Detectable:
            return "Detectable";
        case Detectability::EventuallyDetectable:
            return "EventuallyDetectable";
        case Detectability::NotDetectable:
            return "NotDetectable";
    }
    return "NotDetectable";
}

namespace {

struct ParametricContext {
    double lipschitz_pi = 0.0;
    double spacing = 0.0;
};

Classification classify_index(const TabularModel& m, std::size_t i, const std::vector<geometry::DeclaredFace>& declared,
                              const ParametricContext* param, const ClassifyOptions& opts) {
    Classification c;
    c.label = m.types.at(i);
    if (!m.params.empty()) c.param = m.params[i];
    const auto set = m.belief_set();

    const auto ext = geometry::is_extreme(set, i);
    if (!ext.extreme) {
        c.kind = Detectability::NotDetectable;
        c.witness = ext.witness;
        c.witness_residual = ext.residual;
        return c;
    }

    geometry::ChainOptions co{opts.tol.margin, opts.tol.face, opts.tol.rank};
    c.chain = geometry::exposure_chain(set, i, declared, co);
    c.chain_declared = !c.chain.links.empty() &&
                       std::all_of(c.chain.links.begin(), c.chain.links.end(), [](const auto& l) { return l.declared; });
    if (c.chain.length() != 1) {
        // Length 0 only for a one-point set, which is trivially exposed.
        if (c.chain.length() == 0) {
            c.kind = param ? Detectability::Detectable : Detectability::StronglyDetectable;
            c.z.assign(m.states, 0.0);
            c.margin = c.inf_margin_estimate = lp::kInf;
            return c;
        }
        c.kind = Detectability::EventuallyDetectable;
        return c;
    }
    c.z = c.chain.links[0].z;
    c.margin = c.chain.links[0].margin;
    if (!param) {
        c.inf_margin_estimate = c.margin;
        c.kind = Detectability::StronglyDetectable;
        return c;
    }
    double zmax = 0.0;
    for (double x : c.z) zmax = std::max(zmax, std::fabs(x));
    c.inf_margin_estimate = c.margin - zmax * param->lipschitz_pi * param->spacing / 2.0;
    c.kind = c.inf_margin_estimate > opts.tol.margin ? Detectability::StronglyDetectable : Detectability::Detectable;
    return c;
}

}  // namespace

Classification classify_type(const TabularModel& m, std::size_t i, const ClassifyOptions& opts) {
    m.validate();
    if (i >= m.size()) throw IndexOutOfRange("type index " + std::to_string(i));
    return classify_index(m, i, {}, nullptr, opts);
}

Classification classify_type(const ParametricModel& m, double t, std::size_t grid, const ClassifyOptions& opts) {
    auto ts = models::uniform_grid(grid);
    auto pos = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t idx;
    if (pos != ts.end() && std::fabs(*pos - t) <= 1e-12) {
        idx = static_cast<std::size_t>(pos - ts.begin());
    } else if (pos != ts.begin() && std::fabs(*(pos - 1) - t) <= 1e-12) {
        idx = static_cast<std::size_t>(pos - ts.begin()) - 1;
    } else {
        idx = static_cast<std::size_t>(pos - ts.begin());
        ts.insert(pos, t);
    }
    const auto tab = models::sample_at(m, ts);
    const ParametricContext ctx{m.lipschitz_pi, 1.0 / static_cast<double>(grid - 1)};
    return classify_index(tab, idx, models::declared_faces_on(m, ts), &ctx, opts);
}

std::vector<Classification> classify_all(const TabularModel& m, std::size_t jobs, const ClassifyOptions& opts) {
    m.validate();
    std::vector<Classification> out(m.size());
    parallel_for(m.size(), jobs, [&](std::size_t i) { out[i] = classify_index(m, i, {}, nullptr, opts); });
    return out;
}

std::vector<Classification> classify_grid(const ParametricModel& m, std::size_t grid, std::size_t jobs,
                                          const ClassifyOptions& opts) {
    const auto ts = models::uniform_grid(grid);
    const auto tab = models::sample_at(m, ts);
    const auto declared = models::declared_faces_on(m, ts);
    const ParametricContext ctx{m.lipschitz_pi, 1.0 / static_cast<double>(grid - 1)};
    std::vector<Classification> out(tab.size());
    parallel_for(tab.size(), jobs, [&](std::size_t i) { out[i] = classify_index(tab, i, declared, &ctx, opts); });
    return out;
}

}  // namespace surplus::extraction
