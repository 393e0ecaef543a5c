#include <algorithm>
#include <cmath>

#include "surplus/lp.hpp"

namespace surplus::lp {
namespace {

double row_activity(const Constraint& c, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.row.size() && j < x.size(); ++j) s += c.row[j] * x[j];
    return s;
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
    if (x.size() != lp.n_vars) return kInf;
    double worst = 0.0;
    for (const auto& c : lp.constraints) {
        const double r = row_activity(c, x) - c.rhs;
        switch (c.relation) {
            case Relation::LessEqual:
                worst = std::max(worst, r);
                break;
            case Relation::GreaterEqual:
                worst = std::max(worst, -r);
                break;
            case Relation::Equal:
                worst = std::max(worst, std::fabs(r));
                break;
        }
    }
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        worst = std::max(worst, lp.bounds[j].lower - x[j]);
        worst = std::max(worst, x[j] - lp.bounds[j].upper);
    }
    return worst;
}

// Multiplier sign violation for a "minimization-oriented" row multiplier:
// >= rows want y >= 0, <= rows want y <= 0.
double sign_violation(Relation rel, double y) {
    switch (rel) {
        case Relation::LessEqual:
            return std::max(0.0, y);
        case Relation::GreaterEqual:
            return std::max(0.0, -y);
        case Relation::Equal:
            return 0.0;
    }
    return 0.0;
}

std::vector<double> transpose_times(const LinearProgram& lp, const std::vector<double>& y) {
    std::vector<double> g(lp.n_vars, 0.0);
    for (std::size_t i = 0; i < lp.constraints.size(); ++i)
        for (std::size_t j = 0; j < lp.n_vars; ++j) g[j] += lp.constraints[i].row[j] * y[i];
    return g;
}

void check_optimal(const LinearProgram& lp, const LpSolution& sol, double tol, CertificateReport& rep) {
    const double s = lp.sense == Sense::Minimize ? 1.0 : -1.0;
    std::vector<double> y(lp.constraints.size(), 0.0);
    if (sol.duals.size() == y.size())
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = s * sol.duals[i];
    else
        rep.dual_feasibility = kInf;

    const auto aty = transpose_times(lp, y);
    double dual_obj = 0.0;
    double primal_obj = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& c = lp.constraints[i];
        rep.dual_feasibility = std::max(rep.dual_feasibility, sign_violation(c.relation, y[i]));
        dual_obj += y[i] * c.rhs;
        if (!sol.primal.empty())
            rep.complementary_slackness = std::max(
                rep.complementary_slackness, std::fabs(y[i]) * std::fabs(row_activity(c, sol.primal) - c.rhs));
    }
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const double d = s * lp.objective[j] - aty[j];
        const auto& b = lp.bounds[j];
        const double xj = j < sol.primal.size() ? sol.primal[j] : 0.0;
        primal_obj += s * lp.objective[j] * xj;
        if (d > 0.0) {
            if (std::isfinite(b.lower)) {
                dual_obj += d * b.lower;
                rep.complementary_slackness = std::max(rep.complementary_slackness, d * (xj - b.lower));
            } else {
                rep.dual_feasibility = std::max(rep.dual_feasibility, d);
            }
        } else if (d < 0.0) {
            if (std::isfinite(b.upper)) {
                dual_obj += d * b.upper;
                rep.complementary_slackness = std::max(rep.complementary_slackness, -d * (b.upper - xj));
            } else {
                rep.dual_feasibility = std::max(rep.dual_feasibility, -d);
            }
        }
    }
    rep.duality_gap = std::fabs(primal_obj - dual_obj);
    const double scale = 1.0 + std::fabs(primal_obj);
    rep.passed = rep.primal_feasibility <= tol && rep.dual_feasibility <= tol &&
                 rep.complementary_slackness <= tol * scale && rep.duality_gap <= tol * scale;
}

void check_infeasible(const LinearProgram& lp, const LpSolution& sol, double tol, CertificateReport& rep) {
    if (sol.duals.size() != lp.constraints.size()) {
        rep.dual_feasibility = kInf;
        return;
    }
    const auto& y = sol.duals;
    const auto g = transpose_times(lp, y);
    double yb = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        rep.dual_feasibility = std::max(rep.dual_feasibility, sign_violation(lp.constraints[i].relation, y[i]));
        yb += y[i] * lp.constraints[i].rhs;
    }
    double box_max = 0.0;
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const auto& b = lp.bounds[j];
        if (g[j] > 0.0) {
            if (std::isfinite(b.upper))
                box_max += g[j] * b.upper;
            else
                rep.dual_feasibility = std::max(rep.dual_feasibility, g[j]);
        } else if (g[j] < 0.0) {
            if (std::isfinite(b.lower))
                box_max += g[j] * b.lower;
            else
                rep.dual_feasibility = std::max(rep.dual_feasibility, -g[j]);
        }
    }
    rep.farkas_margin = yb - box_max;
    rep.passed = rep.dual_feasibility <= tol && rep.farkas_margin > tol;
}

void check_unbounded(const LinearProgram& lp, const LpSolution& sol, double tol, CertificateReport& rep) {
    if (sol.ray.size() != lp.n_vars) {
        rep.dual_feasibility = kInf;
        return;
    }
    double norm = 0.0;
    for (double r : sol.ray) norm = std::max(norm, std::fabs(r));
    if (norm == 0.0) return;
    std::vector<double> r(sol.ray);
    for (double& v : r) v /= norm;

    // Ray residuals are stored in dual_feasibility: the direction must be
    // in the recession cone of the feasible set.
    for (const auto& c : lp.constraints) {
        const double a = row_activity(c, r);
        switch (c.relation) {
            case Relation::LessEqual:
                rep.dual_feasibility = std::max(rep.dual_feasibility, a);
                break;
            case Relation::GreaterEqual:
                rep.dual_feasibility = std::max(rep.dual_feasibility, -a);
                break;
            case Relation::Equal:
                rep.dual_feasibility = std::max(rep.dual_feasibility, std::fabs(a));
                break;
        }
    }
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        if (std::isfinite(lp.bounds[j].lower)) rep.dual_feasibility = std::max(rep.dual_feasibility, -r[j]);
        if (std::isfinite(lp.bounds[j].upper)) rep.dual_feasibility = std::max(rep.dual_feasibility, r[j]);
    }
    const double gain = evaluate(lp, r);
    rep.ray_improvement = lp.sense == Sense::Maximize ? gain : -gain;
    rep.passed = rep.primal_feasibility <= tol && rep.dual_feasibility <= tol && rep.ray_improvement > tol;
}

}  // namespace

CertificateReport check_certificate(const LinearProgram& lp, const LpSolution& sol, double feas_tol) {
    CertificateReport rep;
    if (sol.status != Status::Infeasible) rep.primal_feasibility = primal_residual(lp, sol.primal);
    switch (sol.status) {
        case Status::Optimal:
            check_optimal(lp, sol, feas_tol, rep);
            break;
        case Status::Infeasible:
            check_infeasible(lp, sol, feas_tol, rep);
            break;
        case Status::Unbounded:
            check_unbounded(lp, sol, feas_tol, rep);
            break;
    }
    return rep;
}

}  // namespace surplus::lp
