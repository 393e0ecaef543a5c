#include <algorithm>
#include <cmath>

#include "surplus/error.hpp"
#include "surplus/extraction.hpp"

namespace surplus::extraction {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Full:
            return "Full";
        case Verdict::Virtual:
            return "Virtual";
        case Verdict::FiniteMenu:
            return "FiniteMenu";
        case Verdict::Fails:
            return "Fails";
    }
    return "Fails";
}

namespace {

std::optional<std::size_t> find_entry(const Menu& menu, const std::string& label, double param) {
    for (std::size_t k = 0; k < menu.entries.size(); ++k) {
        const auto& e = menu.entries[k];
        if (!std::isnan(param) && !std::isnan(e.param)) {
            if (std::fabs(e.param - param) <= 1e-12) return k;
        } else if (e.label == label) {
            return k;
        }
    }
    return std::nullopt;
}

std::string describe(const TypeSurplus& t, const char* what, double value) {
    return "type " + t.label + ": " + what + " " + std::to_string(value);
}

}  // namespace

ExtractionReport verify_menu(const TabularModel& types, const Menu& menu, VerifyMode mode, const Tolerances& tol) {
    ExtractionReport rep;
    rep.mode = mode;
    if (menu.entries.empty()) {
        rep.failures.push_back("menu is empty");
        return rep;
    }
    const double tl = tol.surplus;
    bool any_own = false;
    rep.worst_own_low = lp::kInf;
    rep.worst_own_high = -lp::kInf;

    for (std::size_t t = 0; t < types.size(); ++t) {
        TypeSurplus ts;
        ts.label = types.types[t];
        ts.param = types.params.empty() ? kNoParam : types.params[t];
        ts.own_entry = find_entry(menu, ts.label, ts.param);
        for (std::size_t k = 0; k < menu.entries.size(); ++k) {
            const double s = types.values[t] - geometry::evaluate(types.beliefs[t], menu.entries[k].contract.payments);
            ts.best = std::max(ts.best, s);
            if (ts.own_entry && *ts.own_entry == k)
                ts.own = s;
            else
                ts.cross = std::max(ts.cross, s);
        }
        if (ts.own_entry) {
            any_own = true;
            rep.worst_own_low = std::min(rep.worst_own_low, ts.own);
            rep.worst_own_high = std::max(rep.worst_own_high, ts.own);
        }
        rep.worst_cross = std::max(rep.worst_cross, ts.cross);
        rep.worst_best = std::max(rep.worst_best, ts.best);
        rep.min_best = std::min(rep.min_best, ts.best);

        switch (mode.kind) {
            case VerifyMode::Kind::Full:
                if (ts.own_entry && std::fabs(ts.own) > tl) rep.failures.push_back(describe(ts, "own surplus", ts.own));
                if (!ts.own_entry && ts.best > tl) rep.failures.push_back(describe(ts, "best surplus", ts.best));
                if (ts.cross > tl) rep.failures.push_back(describe(ts, "cross surplus", ts.cross));
                break;
            case VerifyMode::Kind::Virtual:
                if (ts.own_entry && (ts.own < -tl || ts.own > mode.eps + tl))
                    rep.failures.push_back(describe(ts, "own surplus", ts.own));
                if (ts.best > mode.eps + tl) rep.failures.push_back(describe(ts, "best surplus", ts.best));
                break;
            case VerifyMode::Kind::FiniteMenu:
                if (ts.best < -tl || ts.best > mode.eps + tl)
                    rep.failures.push_back(describe(ts, "best surplus", ts.best));
                break;
        }
        rep.types.push_back(std::move(ts));
    }
    if (!any_own) rep.worst_own_low = rep.worst_own_high = 0.0;

    if (rep.failures.empty()) {
        switch (mode.kind) {
            case VerifyMode::Kind::Full:
                rep.verdict = Verdict::Full;
                break;
            case VerifyMode::Kind::Virtual:
                rep.verdict = Verdict::Virtual;
                break;
            case VerifyMode::Kind::FiniteMenu:
                rep.verdict = Verdict::FiniteMenu;
                break;
        }
    }
    return rep;
}

ExtractionReport verify_menu(const ParametricModel& m, const Menu& menu, std::size_t grid, VerifyMode mode,
                             const Tolerances& tol) {
    const auto tab = models::sample(m, grid);
    auto rep = verify_menu(tab, menu, mode, tol);
    double cmax = 0.0;
    for (const auto& e : menu.entries)
        for (double x : e.contract.payments) cmax = std::max(cmax, std::fabs(x));
    const double h = 1.0 / static_cast<double>(grid - 1);
    rep.lipschitz_slack = m.lipschitz_v * h + cmax * m.lipschitz_pi * h;
    return rep;
}

}  // namespace surplus::extraction
