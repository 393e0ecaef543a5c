#pragma once

// Convex-geometry predicates over finite point sets in R^S: affine
// dimension, extreme/exposed classification, separating functionals, faces
// and exposure chains. Every LP-backed predicate normalizes functionals to
// ||z||_inf <= 1 so margins are comparable across calls.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surplus/tolerances.hpp"

namespace surplus::geometry {

using Vector = std::vector<double>;
/// A linear functional z acting on beliefs by p . z.
using Functional = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

struct FiniteBeliefSet {
    std::vector<std::string> labels;
    std::vector<Vector> points;

    FiniteBeliefSet() = default;
    /// Labels default to "0", "1", ...
    explicit FiniteBeliefSet(std::vector<Vector> pts);
    FiniteBeliefSet(std::vector<std::string> lbls, std::vector<Vector> pts);

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
    /// Throws InvalidBelief on ragged points, negative entries, sums off 1 by
    /// more than 1e-12, or duplicate labels.
    void validate() const;
};

/// Inner product p . z through the active kernel backend.
double evaluate(const Vector& p, const Functional& z);
/// p_k . z for every member.
std::vector<double> evaluate_all(const FiniteBeliefSet& set, const Functional& z);

/// Rank of {p_i - p_0}; 0 for a single point. Throws EmptySet.
int affine_dimension(const FiniteBeliefSet& set, double rank_tol = Tolerances{}.rank);
int affine_dimension(const FiniteBeliefSet& set, const IndexSet& members, double rank_tol = Tolerances{}.rank);

struct ExtremeResult {
    bool extreme = true;
    /// Weights over all indices (mu[i] = 0) with p_i = sum mu_j p_j when
    /// not extreme; empty otherwise.
    std::vector<double> witness;
    double residual = 0.0;  // ||p_i - sum mu_j p_j||_inf
};

/// Throws IndexOutOfRange.
ExtremeResult is_extreme(const FiniteBeliefSet& set, std::size_t i);

struct Exposure {
    Functional z;
    double margin = 0.0;
};

/// Optimum of: max m s.t. p_j.z = 0 (j in subset), p_k.z >= m (k not in
/// subset), -1 <= z <= 1. The margin may be <= 0. Throws IndexOutOfRange if
/// `subset` is empty, improper or out of range.
Exposure exposure_margin(const FiniteBeliefSet& set, const IndexSet& subset);

/// exposure_margin when the margin exceeds margin_tol, otherwise absent.
std::optional<Exposure> expose_set(const FiniteBeliefSet& set, const IndexSet& subset,
                                   double margin_tol = Tolerances{}.margin);

/// Members with |p.z| <= face_tol. Throws NotSupporting if some p.z < -face_tol.
IndexSet face_of(const FiniteBeliefSet& set, const Functional& z, double face_tol = Tolerances{}.face);

/// A face supplied by the caller instead of discovered by LP: `members` is
/// cut out by `z` inside the stage whose member set equals `within` (empty
/// means the whole set).
struct DeclaredFace {
    IndexSet members;
    Functional z;
    IndexSet within;
};

struct ChainLink {
    Functional z;
    double margin = 0.0;  // min of p.z over the previous stage minus this one
    bool declared = false;
};

/// Nested stages T_0 = all members, T_1, ..., T_n = {target}; link k cuts
/// T_{k+1} out of T_k.
struct ExposureChain {
    std::size_t target = 0;
    std::vector<IndexSet> stages;
    std::vector<ChainLink> links;

    std::size_t length() const { return links.size(); }
};

struct ChainOptions {
    double margin_tol = Tolerances{}.margin;
    double face_tol = Tolerances{}.face;
    double rank_tol = Tolerances{}.rank;
};

/// Builds an exposure chain for point i. Declared faces that apply to the
/// current stage are used first; otherwise {i} is exposed directly within
/// the stage, and failing that the max-margin supporting functional cuts out
/// a smaller face. Throws NotExtreme, ChainStalled, NotSupporting.
ExposureChain exposure_chain(const FiniteBeliefSet& set, std::size_t i,
                             const std::vector<DeclaredFace>& declared = {}, const ChainOptions& opts = {});

/// Restriction of `set` to `members`, preserving labels.
FiniteBeliefSet subset_of(const FiniteBeliefSet& set, const IndexSet& members);

/// Counterclockwise hull vertices of planar points (monotone chain), starting
/// at the lexicographically smallest point, without repeating it.
std::vector<std::pair<double, double>> convex_hull_2d(std::vector<std::pair<double, double>> pts);

}  // namespace surplus::geometry
