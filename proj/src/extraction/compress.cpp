#include <algorithm>
#include <cmath>
#include <numeric>

#include "surplus/error.hpp"
#include "surplus/extraction.hpp"

namespace surplus::extraction {

CompressResult compress_menu(const ParametricModel& m, const Menu& menu, double eps, std::size_t grid,
                             const Tolerances& tol) {
    if (!(eps > 0.0)) throw DomainError("compression needs eps > 0");
    const auto check = verify_menu(m, menu, grid, VerifyMode::virtual_eps(eps), tol);
    if (!check.passed())
        throw InputMenuFails("input menu does not achieve virtual extraction at eps=" + std::to_string(eps) + ": " +
                             check.failures.front());
    for (const auto& e : menu.entries)
        if (std::isnan(e.param)) throw InputMenuFails("menu entry " + e.label + " has no type parameter");

    std::vector<double> radii(menu.size());
    for (std::size_t k = 0; k < menu.size(); ++k) {
        double cmax = 0.0;
        for (double x : menu.entries[k].contract.payments) cmax = std::max(cmax, std::fabs(x));
        const double modulus = m.lipschitz_v + cmax * m.lipschitz_pi;
        radii[k] = modulus > 0.0 ? (eps / 2.0) / modulus : lp::kInf;
    }

    const auto ts = models::uniform_grid(grid);
    std::vector<std::size_t> kept;
    for (std::size_t pos = 0; pos < ts.size();) {
        const double x = ts[pos];
        std::optional<std::size_t> pick;
        double reach = -lp::kInf;
        for (std::size_t k = 0; k < menu.size(); ++k) {
            const double t = menu.entries[k].param;
            if (std::fabs(x - t) > radii[k]) continue;
            if (t + radii[k] > reach) {
                reach = t + radii[k];
                pick = k;
            }
        }
        if (!pick) throw InputMenuFails("grid type " + models::param_label(x) + " is not covered by any contract ball");
        kept.push_back(*pick);
        while (pos < ts.size() && ts[pos] - menu.entries[*pick].param <= radii[*pick]) ++pos;
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    CompressResult res;
    res.kept = kept;
    for (std::size_t k : kept) {
        MenuEntry e = menu.entries[k];
        for (double& x : e.contract.payments) x -= eps;
        if (e.contract.provenance) e.contract.provenance->base -= eps;
        res.menu.entries.push_back(std::move(e));
        res.radii.push_back(radii[k]);
    }
    return res;
}

}  // namespace surplus::extraction
