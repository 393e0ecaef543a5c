#pragma once

// Dense two-phase simplex for small and medium linear programs.
//
// Programs are stated in general form (<=, =, >= rows; per-variable bounds,
// either side possibly infinite) and standardized internally to
// max c.y s.t. A y <= b, y >= 0. Pivoting follows Bland's rule, so the
// method terminates on degenerate programs.
//
// Sign conventions of LpSolution::duals:
//   Optimal     duals[i] is the shadow price d(objective)/d(rhs_i). For a
//               minimization, >= rows carry duals >= 0 and <= rows duals <= 0;
//               for a maximization the signs flip.
//   Infeasible  duals is a Farkas vector y with y_i >= 0 on >= rows, y_i <= 0
//               on <= rows, free on = rows, such that
//               max_{l<=x<=u} (A^T y).x < y.b, which no feasible x can satisfy.
//   Unbounded   duals is empty; `ray` is an improving recession direction
//               and `primal` a feasible point.

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "surplus/tolerances.hpp"

namespace surplus::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status s);

struct Constraint {
    std::vector<double> row;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

struct Bounds {
    double lower = 0.0;
    double upper = kInf;
};

/// A linear program in general form. Variables default to [0, inf).
struct LinearProgram {
    std::size_t n_vars = 0;
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<Bounds> bounds;

    explicit LinearProgram(std::size_t n = 0, Sense s = Sense::Minimize)
        : n_vars(n), sense(s), objective(n, 0.0), bounds(n) {}

    std::size_t add(std::vector<double> row, Relation rel, double rhs);
    void set_free(std::size_t var) { bounds.at(var) = {-kInf, kInf}; }
    void set_bounds(std::size_t var, double lo, double hi) { bounds.at(var) = {lo, hi}; }
};

struct LpSolution {
    Status status = Status::Infeasible;
    std::vector<double> primal;
    std::vector<double> duals;
    std::vector<double> ray;
    double objective_value = 0.0;
    std::size_t iterations = 0;
};

struct SolverOptions {
    double pivot_tol = 1e-9;
    double optimality_tol = 1e-9;
    double feasibility_tol = 1e-9;
    std::size_t max_iterations = 0;  // 0 picks a size-based default
};

/// Throws MalformedProgram on dimension mismatch or non-finite data, and
/// SolverFailure if the iteration limit is reached.
LpSolution solve(const LinearProgram& lp, const SolverOptions& opts = {});

/// Throws MalformedProgram when `lp` violates the well-formedness invariants.
void validate(const LinearProgram& lp);

struct CertificateReport {
    double primal_feasibility = 0.0;      // max violation of rows and bounds
    double dual_feasibility = 0.0;        // wrong-sign duals / reduced costs
    double duality_gap = 0.0;             // |primal obj - dual obj|
    double complementary_slackness = 0.0;
    double farkas_margin = 0.0;           // Infeasible: y.b - max_box (A^T y).x (> 0 certifies)
    double ray_improvement = 0.0;         // Unbounded: objective gain per unit ray step (> 0 certifies)
    bool passed = false;
};

/// Recomputes every residual of `sol` against `lp` from scratch; never throws
/// on a well-formed program.
CertificateReport check_certificate(const LinearProgram& lp, const LpSolution& sol,
                                    double feas_tol = Tolerances{}.feas);

/// Objective value of `x` for `lp`.
double evaluate(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace surplus::lp
