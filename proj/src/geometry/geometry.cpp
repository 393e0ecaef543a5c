#include "surplus/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>

#include "surplus/error.hpp"
#include "surplus/kernels.hpp"
#include "surplus/lp.hpp"

namespace surplus::geometry {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

void check_index(const FiniteBeliefSet& set, std::size_t i) {
    if (i >= set.size())
        throw IndexOutOfRange("index " + std::to_string(i) + " outside set of size " + std::to_string(set.size()));
}

IndexSet normalized(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool contains(const IndexSet& sorted, std::size_t i) { return std::binary_search(sorted.begin(), sorted.end(), i); }

IndexSet all_indices(std::size_t n) {
    IndexSet s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i;
    return s;
}

double min_off(const std::vector<double>& values, const IndexSet& members) {
    double m = lp::kInf;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!contains(members, k)) m = std::min(m, values[k]);
    return m;
}

}  // namespace

FiniteBeliefSet::FiniteBeliefSet(std::vector<Vector> pts) : labels(default_labels(pts.size())), points(std::move(pts)) {}

FiniteBeliefSet::FiniteBeliefSet(std::vector<std::string> lbls, std::vector<Vector> pts)
    : labels(std::move(lbls)), points(std::move(pts)) {}

void FiniteBeliefSet::validate() const {
    if (labels.size() != points.size()) throw InvalidBelief("labels and points differ in length");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!seen.insert(labels[i]).second) throw InvalidBelief("duplicate label '" + labels[i] + "'");
        const auto& p = points[i];
        if (p.size() != dim()) throw InvalidBelief("point " + labels[i] + " has the wrong dimension");
        double sum = 0.0;
        for (double x : p) {
            if (!std::isfinite(x) || x < 0.0) throw InvalidBelief("point " + labels[i] + " has a negative entry");
            sum += x;
        }
        if (std::fabs(sum - 1.0) > 1e-12) throw InvalidBelief("point " + labels[i] + " does not sum to 1");
    }
}

double evaluate(const Vector& p, const Functional& z) { return kernels::dot(p, z); }

std::vector<double> evaluate_all(const FiniteBeliefSet& set, const Functional& z) {
    std::vector<double> out(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) out[k] = kernels::dot(set.points[k], z);
    return out;
}

int affine_dimension(const FiniteBeliefSet& set, const IndexSet& members, double rank_tol) {
    if (members.empty()) throw EmptySet("affine dimension of an empty set");
    for (auto i : members) check_index(set, i);
    if (members.size() == 1) return 0;
    const std::size_t s = set.dim();
    Eigen::MatrixXd diff(members.size() - 1, s);
    const auto& p0 = set.points[members[0]];
    for (std::size_t r = 1; r < members.size(); ++r)
        for (std::size_t c = 0; c < s; ++c) diff(r - 1, c) = set.points[members[r]][c] - p0[c];
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > rank_tol * sv[0]) ++rank;
    return rank;
}

int affine_dimension(const FiniteBeliefSet& set, double rank_tol) {
    if (set.size() == 0) throw EmptySet("affine dimension of an empty set");
    return affine_dimension(set, all_indices(set.size()), rank_tol);
}

ExtremeResult is_extreme(const FiniteBeliefSet& set, std::size_t i) {
    check_index(set, i);
    ExtremeResult res;
    const std::size_t n = set.size();
    if (n == 1) return res;
    const std::size_t s = set.dim();

    // Variables mu_j for j != i, in index order.
    lp::LinearProgram prog(n - 1, lp::Sense::Minimize);
    prog.add(std::vector<double>(n - 1, 1.0), lp::Relation::Equal, 1.0);
    for (std::size_t c = 0; c < s; ++c) {
        std::vector<double> row(n - 1);
        for (std::size_t j = 0, col = 0; j < n; ++j)
            if (j != i) row[col++] = set.points[j][c];
        prog.add(std::move(row), lp::Relation::Equal, set.points[i][c]);
    }
    const auto sol = lp::solve(prog);
    if (sol.status != lp::Status::Optimal) return res;

    res.extreme = false;
    res.witness.assign(n, 0.0);
    for (std::size_t j = 0, col = 0; j < n; ++j)
        if (j != i) res.witness[j] = std::max(0.0, sol.primal[col++]);
    for (std::size_t c = 0; c < s; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += res.witness[j] * set.points[j][c];
        res.residual = std::max(res.residual, std::fabs(set.points[i][c] - acc));
    }
    return res;
}

Exposure exposure_margin(const FiniteBeliefSet& set, const IndexSet& subset_in) {
    const IndexSet subset = normalized(subset_in);
    if (subset.empty()) throw IndexOutOfRange("subset to expose is empty");
    for (auto i : subset) check_index(set, i);
    if (subset.size() == set.size()) throw IndexOutOfRange("subset to expose is not proper");

    const std::size_t s = set.dim();
    // Variables: z_0..z_{S-1} in [-1, 1], then the free margin m.
    lp::LinearProgram prog(s + 1, lp::Sense::Maximize);
    prog.objective[s] = 1.0;
    for (std::size_t c = 0; c < s; ++c) prog.set_bounds(c, -1.0, 1.0);
    prog.set_free(s);
    for (std::size_t k = 0; k < set.size(); ++k) {
        std::vector<double> row(set.points[k]);
        if (contains(subset, k)) {
            row.push_back(0.0);
            prog.add(std::move(row), lp::Relation::Equal, 0.0);
        } else {
            row.push_back(-1.0);
            prog.add(std::move(row), lp::Relation::GreaterEqual, 0.0);
        }
    }
    const auto sol = lp::solve(prog);
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("exposure LP returned " + std::string(lp::to_string(sol.status)));
    Exposure e;
    e.z.assign(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(s));
    e.margin = sol.primal[s];
    return e;
}

std::optional<Exposure> expose_set(const FiniteBeliefSet& set, const IndexSet& subset, double margin_tol) {
    auto e = exposure_margin(set, subset);
    if (e.margin > margin_tol) return e;
    return std::nullopt;
}

IndexSet face_of(const FiniteBeliefSet& set, const Functional& z, double face_tol) {
    IndexSet face;
    const auto values = evaluate_all(set, z);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] < -face_tol)
            throw NotSupporting("functional takes value " + std::to_string(values[k]) + " at member " +
                                set.labels[k]);
        if (std::fabs(values[k]) <= face_tol) face.push_back(k);
    }
    return face;
}

FiniteBeliefSet subset_of(const FiniteBeliefSet& set, const IndexSet& members) {
    FiniteBeliefSet out;
    for (auto i : members) {
        check_index(set, i);
        out.labels.push_back(set.labels[i]);
        out.points.push_back(set.points[i]);
    }
    return out;
}

namespace {

// max sum_k p_k.z  s.t.  p_i.z = 0, p_k.z >= 0 (k in stage), -1 <= z <= 1.
Functional max_margin_support(const FiniteBeliefSet& stage, std::size_t local_i) {
    const std::size_t s = stage.dim();
    lp::LinearProgram prog(s, lp::Sense::Maximize);
    for (std::size_t c = 0; c < s; ++c) prog.set_bounds(c, -1.0, 1.0);
    for (std::size_t k = 0; k < stage.size(); ++k) {
        for (std::size_t c = 0; c < s; ++c) prog.objective[c] += stage.points[k][c];
        prog.add(stage.points[k], k == local_i ? lp::Relation::Equal : lp::Relation::GreaterEqual, 0.0);
    }
    const auto sol = lp::solve(prog);
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("supporting LP returned " + std::string(lp::to_string(sol.status)));
    return sol.primal;
}

}  // namespace

ExposureChain exposure_chain(const FiniteBeliefSet& set, std::size_t i, const std::vector<DeclaredFace>& declared,
                             const ChainOptions& opts) {
    check_index(set, i);
    if (const auto ext = is_extreme(set, i); !ext.extreme)
        throw NotExtreme("point " + set.labels[i] + " is a convex combination of other members (residual " +
                         std::to_string(ext.residual) + ")");

    ExposureChain chain;
    chain.target = i;
    chain.stages.push_back(all_indices(set.size()));

    while (chain.stages.back().size() > 1) {
        const IndexSet& current = chain.stages.back();
        const FiniteBeliefSet stage = subset_of(set, current);
        const auto local_i =
            static_cast<std::size_t>(std::lower_bound(current.begin(), current.end(), i) - current.begin());

        std::optional<IndexSet> next;
        ChainLink link;

        for (const auto& df : declared) {
            const IndexSet within = df.within.empty() ? all_indices(set.size()) : normalized(df.within);
            const IndexSet members = normalized(df.members);
            if (within != current || !contains(members, i) || members.size() >= current.size()) continue;
            const auto values = evaluate_all(stage, df.z);
            IndexSet face;
            for (auto k : face_of(stage, df.z, opts.face_tol)) face.push_back(current[k]);
            if (face != members)
                throw NotSupporting("declared face functional cuts out " + std::to_string(face.size()) +
                                    " members, expected " + std::to_string(members.size()));
            IndexSet local_members;
            for (auto k : members)
                local_members.push_back(
                    static_cast<std::size_t>(std::lower_bound(current.begin(), current.end(), k) - current.begin()));
            link = {df.z, min_off(values, local_members), true};
            next = members;
            break;
        }

        if (!next) {
            if (auto e = expose_set(stage, {local_i}, opts.margin_tol)) {
                link = {std::move(e->z), e->margin, false};
                next = IndexSet{i};
            }
        }

        if (!next) {
            Functional z = max_margin_support(stage, local_i);
            IndexSet face;
            for (auto k : face_of(stage, z, opts.face_tol)) face.push_back(current[k]);
            if (face.size() >= current.size() || !contains(face, i) ||
                affine_dimension(set, face, opts.rank_tol) >= affine_dimension(set, current, opts.rank_tol))
                throw ChainStalled("no dimension reduction at stage " + std::to_string(chain.links.size()) +
                                   " (stage of " + std::to_string(current.size()) + " members)");
            IndexSet local_face;
            for (auto k : face)
                local_face.push_back(
                    static_cast<std::size_t>(std::lower_bound(current.begin(), current.end(), k) - current.begin()));
            const double margin = min_off(evaluate_all(stage, z), local_face);
            link = {std::move(z), margin, false};
            next = std::move(face);
        }

        chain.links.push_back(std::move(link));
        chain.stages.push_back(std::move(*next));
    }
    return chain;
}

std::vector<std::pair<double, double>> convex_hull_2d(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const auto& o, const auto& a, const auto& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t j = pts.size() - 1, lower = k + 1; j-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[j]) <= 0) --k;
        hull[k++] = pts[j];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace surplus::geometry
