#pragma once

// Primal/dual programs bounding the worst surplus any menu must leave.
//
// Primal (variables c and z(t) in R^S, all free):
//   min c  s.t.  pi(t).z(t) <= c                      for all t
//                v(t) - v(s) - pi(t).z(s) <= c        for all t, s
// The s = t rows give c >= -pi(t).z(t), hence p* >= 0.
//
// Dual (lambda_u >= 0, nu_{t,s} >= 0):
//   max sum nu_{t,s} (v(t) - v(s))
//   s.t. sum lambda + sum nu = 1,
//        lambda_u pi(u) = sum_t nu_{t,u} pi(t)        for all u
// Summing coordinates of the vector rows gives lambda_u = sum_t nu_{t,u}.

#include <cstddef>
#include <optional>
#include <vector>

#include "surplus/extraction.hpp"
#include "surplus/lp.hpp"
#include "surplus/models.hpp"
#include "surplus/tolerances.hpp"

namespace surplus::duality {

using geometry::Vector;
using models::TabularModel;

struct VseInstance {
    TabularModel tabular;
    std::vector<std::vector<double>> d;  // d[t][s] = v(t) - v(s)

    explicit VseInstance(TabularModel m);
};

struct DualMeasures {
    std::vector<double> lambda;
    std::vector<std::vector<double>> nu;  // nu[t][s]
};

struct DisintegrationRow {
    std::size_t u = 0;
    double lambda = 0.0;
    std::vector<double> weights;  // nu_u(t) = nu_{t,u} / lambda_u
    double own_mass = 0.0;        // nu_u(u)
    double gamma_residual = 0.0;  // ||pi(u) - sum_t nu_u(t) pi(t)||_inf
};

struct DualityReport {
    double p_star = 0.0;
    double d_star = 0.0;
    double gap = 0.0;
    double c = 0.0;
    std::vector<Vector> z;  // primal z(t)
    DualMeasures measures;
    std::vector<DisintegrationRow> rows;
    double diagonal_mass = 0.0;
    double marginal_residual = 0.0;  // max_u |lambda_u - sum_t nu_{t,u}|
    double max_gamma_residual = 0.0;
    double nu_dot_d = 0.0;
    bool holds = false;  // p* <= p_tol
    /// Row u whose disintegration is not a point mass at u (when p* > p_tol).
    std::optional<std::size_t> dependence_witness;
    bool primal_certificate = false;
    bool dual_certificate = false;
    extraction::Menu menu;  // c(t) = v(t) 1 + z(t) - p* 1
};

lp::LinearProgram build_primal(const VseInstance& inst);
lp::LinearProgram build_dual(const VseInstance& inst);

/// Reads (lambda, nu) from a solution of build_dual.
DualMeasures measures_from(const VseInstance& inst, const std::vector<double>& x);

/// Rows for every u with lambda_u > mass_tol. Throws DegenerateDual if none.
std::vector<DisintegrationRow> disintegrate(const DualMeasures& mu, const TabularModel& m,
                                            double mass_tol = Tolerances{}.mass);

/// Contracts v(t) 1 + z(t) - p 1 for a primal point (c = p, z).
extraction::Menu shift_menu(const TabularModel& m, const std::vector<Vector>& z, double p);

/// Solves both programs and assembles the report. Throws SolverFailure if
/// either program does not reach an optimum.
DualityReport analyze(const TabularModel& m, const Tolerances& tol = {});

}  // namespace surplus::duality
