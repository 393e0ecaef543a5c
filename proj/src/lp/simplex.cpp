#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "surplus/error.hpp"
#include "surplus/kernels.hpp"
#include "surplus/lp.hpp"

namespace surplus::lp {

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Optimal:
            return "optimal";
        case Status::Infeasible:
            return "infeasible";
        case Status::Unbounded:
            return "unbounded";
    }
    return "unknown";
}

std::size_t LinearProgram::add(std::vector<double> row, Relation rel, double rhs) {
    constraints.push_back(Constraint{std::move(row), rel, rhs});
    return constraints.size() - 1;
}

double evaluate(const LinearProgram& lp, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t j = 0; j < lp.n_vars && j < x.size(); ++j) s += lp.objective[j] * x[j];
    return s;
}

void validate(const LinearProgram& lp) {
    if (lp.n_vars == 0) throw MalformedProgram("program has no variables");
    if (lp.objective.size() != lp.n_vars)
        throw MalformedProgram("objective has " + std::to_string(lp.objective.size()) + " entries, expected " +
                               std::to_string(lp.n_vars));
    if (lp.bounds.size() != lp.n_vars) throw MalformedProgram("bounds size does not match n_vars");
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw MalformedProgram("non-finite objective coefficient");
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const auto& b = lp.bounds[j];
        if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == kInf || b.upper == -kInf)
            throw MalformedProgram("invalid bounds on variable " + std::to_string(j));
    }
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        if (c.row.size() != lp.n_vars)
            throw MalformedProgram("constraint " + std::to_string(i) + " has " + std::to_string(c.row.size()) +
                                   " coefficients, expected " + std::to_string(lp.n_vars));
        if (!std::isfinite(c.rhs)) throw MalformedProgram("non-finite rhs in constraint " + std::to_string(i));
        for (double a : c.row)
            if (!std::isfinite(a))
                throw MalformedProgram("non-finite coefficient in constraint " + std::to_string(i));
    }
}

namespace {

// Ratio-test slack as a fraction of the feasibility tolerance, and the
// fraction of the largest blocking pivot a leaving row must reach.
constexpr double kHarrisFraction = 0.1;
constexpr double kTiePivotFraction = 1e-2;

enum class Transform { Shift, Reflect, Split };

// x_j = lower + y[col]  |  upper - y[col]  |  y[col] - y[col2]
struct ColumnMap {
    Transform kind;
    std::size_t col;
    std::size_t col2;
};

struct InternalRow {
    std::size_t source;  // original constraint index (or variable index for bound rows)
    bool bound_row;
    int sign;  // +1: row kept as a.x <= b, -1: row negated from a.x >= b
};

// max c.y  s.t.  A y <= b, y >= 0
struct StandardForm {
    std::size_t n = 0;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> c;
    std::vector<ColumnMap> columns;
    std::vector<InternalRow> rows;
};

StandardForm standardize(const LinearProgram& lp) {
    StandardForm sf;
    sf.columns.reserve(lp.n_vars);
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const auto& bd = lp.bounds[j];
        if (std::isfinite(bd.lower)) {
            sf.columns.push_back({Transform::Shift, sf.n++, 0});
        } else if (std::isfinite(bd.upper)) {
            sf.columns.push_back({Transform::Reflect, sf.n++, 0});
        } else {
            sf.columns.push_back({Transform::Split, sf.n, sf.n + 1});
            sf.n += 2;
        }
    }

    const double sense_sign = lp.sense == Sense::Maximize ? 1.0 : -1.0;
    sf.c.assign(sf.n, 0.0);
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const double cj = sense_sign * lp.objective[j];
        const auto& m = sf.columns[j];
        switch (m.kind) {
            case Transform::Shift:
                sf.c[m.col] += cj;
                break;
            case Transform::Reflect:
                sf.c[m.col] -= cj;
                break;
            case Transform::Split:
                sf.c[m.col] += cj;
                sf.c[m.col2] -= cj;
                break;
        }
    }

    auto push = [&](std::vector<double> row, double rhs, std::size_t source, bool bound_row, int sign) {
        if (sign < 0) {
            for (double& v : row) v = -v;
            rhs = -rhs;
        }
        sf.a.push_back(std::move(row));
        sf.b.push_back(rhs);
        sf.rows.push_back({source, bound_row, sign});
    };

    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& con = lp.constraints[i];
        std::vector<double> row(sf.n, 0.0);
        double rhs = con.rhs;
        for (std::size_t j = 0; j < lp.n_vars; ++j) {
            const double aij = con.row[j];
            if (aij == 0.0) continue;
            const auto& m = sf.columns[j];
            switch (m.kind) {
                case Transform::Shift:
                    row[m.col] += aij;
                    rhs -= aij * lp.bounds[j].lower;
                    break;
                case Transform::Reflect:
                    row[m.col] -= aij;
                    rhs -= aij * lp.bounds[j].upper;
                    break;
                case Transform::Split:
                    row[m.col] += aij;
                    row[m.col2] -= aij;
                    break;
            }
        }
        if (con.relation != Relation::GreaterEqual) push(row, rhs, i, false, +1);
        if (con.relation != Relation::LessEqual) push(std::move(row), rhs, i, false, -1);
    }

    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const auto& bd = lp.bounds[j];
        if (sf.columns[j].kind == Transform::Shift && std::isfinite(bd.upper)) {
            std::vector<double> row(sf.n, 0.0);
            row[sf.columns[j].col] = 1.0;
            push(std::move(row), bd.upper - bd.lower, j, true, +1);
        }
    }
    return sf;
}

// Dictionary form: x_B(i) = D[i][rhs] - sum_j D[i][j] x_N(j). Column `n` is
// the phase-one artificial (variable id -1); rows m and m+1 hold the phase-two
// and phase-one objectives. Slack of internal row i has id n + i.
class Tableau {
public:
    Tableau(const StandardForm& sf, const SolverOptions& opts)
        : m_(sf.b.size()), n_(sf.n), width_(n_ + 2), d_((m_ + 2) * width_, 0.0), basis_(m_), nonbasis_(n_ + 1),
          opts_(opts) {
        for (std::size_t i = 0; i < m_; ++i) {
            std::copy(sf.a[i].begin(), sf.a[i].end(), row(i).begin());
            at(i, n_) = -1.0;
            at(i, n_ + 1) = sf.b[i];
            basis_[i] = static_cast<std::int64_t>(n_ + i);
        }
        for (std::size_t j = 0; j < n_; ++j) {
            nonbasis_[j] = static_cast<std::int64_t>(j);
            at(m_, j) = -sf.c[j];
        }
        nonbasis_[n_] = -1;
        at(m_ + 1, n_) = 1.0;
        max_iter_ = opts.max_iterations ? opts.max_iterations : 200 * (m_ + n_) + 10000;
    }

    enum class Outcome { Optimal, Infeasible, Unbounded };

    Outcome run() {
        if (m_ > 0) {
            std::size_t r = 0;
            for (std::size_t i = 1; i < m_; ++i)
                if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
            if (at(r, n_ + 1) < -opts_.feasibility_tol) {
                pivot(r, n_);
                optimize(/*phase_one=*/true);
                if (at(m_ + 1, n_ + 1) < -opts_.feasibility_tol) return Outcome::Infeasible;
                drive_out_artificial();
            }
        }
        return optimize(/*phase_one=*/false) ? Outcome::Optimal : Outcome::Unbounded;
    }

    std::vector<double> basic_solution() const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) y[basis_[i]] = at(i, n_ + 1);
        return y;
    }

    // Objective-row entries at nonbasic slack columns: phase-two row gives
    // optimal duals, phase-one row gives the Farkas multipliers.
    std::vector<double> row_multipliers(bool phase_one) const {
        const std::size_t obj = phase_one ? m_ + 1 : m_;
        std::vector<double> w(m_, 0.0);
        for (std::size_t j = 0; j <= n_; ++j)
            if (nonbasis_[j] >= static_cast<std::int64_t>(n_)) w[nonbasis_[j] - n_] = at(obj, j);
        return w;
    }

    std::vector<double> ray() const {
        std::vector<double> dir(n_, 0.0);
        const std::int64_t entering = nonbasis_[unbounded_col_];
        if (entering >= 0 && static_cast<std::size_t>(entering) < n_) dir[entering] = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
                dir[basis_[i]] = -at(i, unbounded_col_);
        return dir;
    }

    std::size_t iterations() const { return iterations_; }

private:
    std::span<double> row(std::size_t i) { return {d_.data() + i * width_, width_}; }
    double& at(std::size_t i, std::size_t j) { return d_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return d_[i * width_ + j]; }

    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / at(r, s);
        const auto pivot_row = row(r);
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            const double coef = at(i, s);
            if (coef == 0.0) continue;
            const double f = coef * inv;
            kernels::axpy(-f, pivot_row, row(i));
            at(i, s) = -f;
        }
        kernels::scale(inv, pivot_row);
        at(r, s) = inv;
        std::swap(basis_[r], nonbasis_[s]);
        ++iterations_;
        if (iterations_ > max_iter_)
            throw SolverFailure("simplex iteration limit (" + std::to_string(max_iter_) + ") reached");
    }

    // Bland's rule: lowest-id improving column enters; among minimum-ratio
    // rows with a usable pivot the lowest basic id leaves. Returns false
    // when unbounded.
    bool optimize(bool phase_one) {
        const std::size_t obj = phase_one ? m_ + 1 : m_;
        for (;;) {
            std::size_t s = width_;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (!phase_one && nonbasis_[j] == -1) continue;
                if (at(obj, j) < -opts_.optimality_tol && (s == width_ || nonbasis_[j] < nonbasis_[s])) s = j;
            }
            if (s == width_) return true;

            // Two-pass (Harris) ratio test. Pass one bounds the step with every
            // row relaxed by `slack`; pass two takes the largest pivot among
            // rows blocking within that bound, so a tiny pivot on a degenerate
            // row cannot win just because its ratio is exactly zero. Basic
            // values may then dip to -slack.
            const double slack = kHarrisFraction * opts_.feasibility_tol;
            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i)
                if (at(i, s) > opts_.pivot_tol) bound = std::min(bound, (at(i, n_ + 1) + slack) / at(i, s));
            if (bound == std::numeric_limits<double>::infinity()) {
                unbounded_col_ = s;
                return false;
            }
            auto blocking = [&](std::size_t i) {
                return at(i, s) > opts_.pivot_tol && std::max(at(i, n_ + 1), 0.0) / at(i, s) <= bound;
            };
            double max_pivot = 0.0;
            for (std::size_t i = 0; i < m_; ++i)
                if (blocking(i)) max_pivot = std::max(max_pivot, at(i, s));
            // Near-largest pivots tie; the lowest basic id among them leaves.
            std::size_t r = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!blocking(i) || at(i, s) < kTiePivotFraction * max_pivot) continue;
                if (r == m_ || basis_[i] < basis_[r]) r = i;
            }
            pivot(r, s);
        }
    }

    void drive_out_artificial() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] != -1) continue;
            std::size_t s = width_;
            for (std::size_t j = 0; j <= n_; ++j)
                if (std::fabs(at(i, j)) > opts_.pivot_tol && (s == width_ || nonbasis_[j] < nonbasis_[s])) s = j;
            if (s != width_) pivot(i, s);
        }
    }

    std::size_t m_, n_, width_;
    std::vector<double> d_;
    std::vector<std::int64_t> basis_, nonbasis_;
    SolverOptions opts_;
    std::size_t iterations_ = 0;
    std::size_t max_iter_ = 0;
    std::size_t unbounded_col_ = 0;
};

std::vector<double> to_original(const LinearProgram& lp, const StandardForm& sf, const std::vector<double>& y,
                                bool direction) {
    std::vector<double> x(lp.n_vars, 0.0);
    for (std::size_t j = 0; j < lp.n_vars; ++j) {
        const auto& m = sf.columns[j];
        switch (m.kind) {
            case Transform::Shift:
                x[j] = (direction ? 0.0 : lp.bounds[j].lower) + y[m.col];
                break;
            case Transform::Reflect:
                x[j] = (direction ? 0.0 : lp.bounds[j].upper) - y[m.col];
                break;
            case Transform::Split:
                x[j] = y[m.col] - y[m.col2];
                break;
        }
    }
    return x;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& opts) {
    validate(lp);
    const StandardForm sf = standardize(lp);
    Tableau tab(sf, opts);
    const auto outcome = tab.run();

    LpSolution sol;
    sol.iterations = tab.iterations();
    const double sense_sign = lp.sense == Sense::Maximize ? 1.0 : -1.0;

    if (outcome == Tableau::Outcome::Infeasible) {
        sol.status = Status::Infeasible;
        const auto w = tab.row_multipliers(/*phase_one=*/true);
        sol.duals.assign(lp.constraints.size(), 0.0);
        for (std::size_t k = 0; k < sf.rows.size(); ++k) {
            const auto& ir = sf.rows[k];
            if (!ir.bound_row) sol.duals[ir.source] -= ir.sign * w[k];
        }
        return sol;
    }

    sol.primal = to_original(lp, sf, tab.basic_solution(), false);
    sol.objective_value = evaluate(lp, sol.primal);

    if (outcome == Tableau::Outcome::Unbounded) {
        sol.status = Status::Unbounded;
        sol.ray = to_original(lp, sf, tab.ray(), true);
        return sol;
    }

    sol.status = Status::Optimal;
    const auto y = tab.row_multipliers(/*phase_one=*/false);
    sol.duals.assign(lp.constraints.size(), 0.0);
    for (std::size_t k = 0; k < sf.rows.size(); ++k) {
        const auto& ir = sf.rows[k];
        if (!ir.bound_row) sol.duals[ir.source] += sense_sign * ir.sign * y[k];
    }
    return sol;
}

}  // namespace surplus::lp
