#pragma once

// Detectability classification and menu construction.
//
// A contract c in R^S costs type t the amount pi(t).c; type t's surplus
// from c is v(t) - pi(t).c. Constructed contracts have the form
// base * 1 + sum_k alpha_k z_k with each z_k vanishing at the owner's belief,
// so the owner pays exactly its value while other types are charged
// alpha_k pi(s).z_k > 0 extra.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surplus/geometry.hpp"
#include "surplus/lp.hpp"
#include "surplus/models.hpp"
#include "surplus/tolerances.hpp"

namespace surplus::extraction {

using geometry::Functional;
using geometry::Vector;
using models::ParametricModel;
using models::TabularModel;

inline constexpr double kSafetyFactor = 2.0;
inline constexpr double kNoParam = std::numeric_limits<double>::quiet_NaN();

struct Provenance {
    double base = 0.0;
    std::vector<std::pair<double, Functional>> terms;  // (alpha_k, z_k)
};

struct Contract {
    Vector payments;
    std::optional<Provenance> provenance;
};

/// base * 1 + sum alpha_k z_k.
Contract compose(std::size_t states, Provenance p);

struct MenuEntry {
    std::string label;
    double param = kNoParam;  // type parameter when built from a parametric model
    Contract contract;
};

struct Menu {
    std::vector<MenuEntry> entries;
    std::size_t size() const { return entries.size(); }
};

// ---- classification ------------------------------------------------------

enum class Detectability { StronglyDetectable, Detectable, EventuallyDetectable, NotDetectable };
std::string_view to_string(Detectability d);

struct Classification {
    std::string label;
    double param = kNoParam;
    Detectability kind = Detectability::NotDetectable;
    Functional z;                      // exposing functional (detectable kinds)
    double margin = 0.0;               // min over other grid types of pi.z
    double inf_margin_estimate = 0.0;  // parametric: margin - ||z|| L_pi h / 2
    geometry::ExposureChain chain;
    bool chain_declared = false;       // every link came from a declared face
    std::vector<double> witness;       // NotDetectable: mu over types
    double witness_residual = 0.0;
};

struct ClassifyOptions {
    Tolerances tol;
};

/// Tabular: NotDetectable (with mu), StronglyDetectable, or
/// EventuallyDetectable when only a discovered chain reaches the type.
Classification classify_type(const TabularModel& m, std::size_t i, const ClassifyOptions& opts = {});

/// Parametric: classified on the uniform grid of `grid` points with t
/// inserted, using the model's declared faces.
Classification classify_type(const ParametricModel& m, double t, std::size_t grid, const ClassifyOptions& opts = {});

std::vector<Classification> classify_all(const TabularModel& m, std::size_t jobs = 1, const ClassifyOptions& opts = {});
/// Every point of the uniform grid of `grid` points.
std::vector<Classification> classify_grid(const ParametricModel& m, std::size_t grid, std::size_t jobs = 1,
                                          const ClassifyOptions& opts = {});

// ---- full extraction -------------------------------------------------------

/// Exposing-functional menu; throws NotAllDetectable naming every failing type.
Menu full_extraction_menu(const TabularModel& m, const Tolerances& tol = {});

struct FullLpResult {
    lp::Status status = lp::Status::Infeasible;
    std::optional<Menu> menu;
    std::vector<double> contract_norms;  // minimal ||c(t)||_inf per type (feasible types)
    double max_contract_norm = 0.0;
    double objective = 0.0;                  // sum of the per-type auxiliaries
    std::optional<std::size_t> failing_type;  // first type with an infeasible block
    std::vector<double> farkas;               // certificate of that block
    bool certificate_passed = false;
};

/// Variables c(t) in R^S (free) and u_t >= |c_sigma(t)|; rows
/// pi(t).c(t) = v(t), pi(s).c(t) >= v(s); objective min sum_t u_t.
lp::LinearProgram build_full_extraction_lp(const TabularModel& m);
/// The single-contract block of the program above for type t.
lp::LinearProgram build_full_extraction_block(const TabularModel& m, std::size_t t);

/// Solves the program block by block (it separates over types).
FullLpResult full_extraction_lp(const TabularModel& m, std::size_t jobs = 1);

// ---- virtual extraction ----------------------------------------------------

struct StageLog {
    std::size_t stage = 0;         // chain link index (1-based from the outside)
    bool declared = false;
    double budget = 0.0;           // slack allotted to this stage
    double radius = 0.0;           // cover radius in t
    double residual = 0.0;         // R: max surplus left outside the cover
    double min_margin = 0.0;       // min pi.z over the stage's off-face types
    double alpha = 0.0;
};

struct TypeLog {
    std::string label;
    double param = kNoParam;
    std::string method;  // "case1", "case2" or "constant"
    std::vector<StageLog> stages;
};

struct VirtualOptions {
    std::size_t jobs = 1;
    Tolerances tol;
};

struct VirtualResult {
    Menu menu;
    std::vector<TypeLog> log;
    std::vector<double> grid;
};

/// Builds a contract for every type on the uniform grid of `grid` points.
/// Throws NotEventuallyDetectable or BudgetInfeasible.
VirtualResult virtual_extraction_menu(const ParametricModel& m, double eps, std::size_t grid,
                                      const VirtualOptions& opts = {});

// ---- verification and compression ----------------------------------------

struct VerifyMode {
    enum class Kind { Full, Virtual, FiniteMenu } kind = Kind::Full;
    double eps = 0.0;  // Virtual: eps; FiniteMenu: upper bound on best surplus

    static VerifyMode full() { return {Kind::Full, 0.0}; }
    static VerifyMode virtual_eps(double e) { return {Kind::Virtual, e}; }
    static VerifyMode finite_menu(double bound) { return {Kind::FiniteMenu, bound}; }
};

enum class Verdict { Full, Virtual, FiniteMenu, Fails };
std::string_view to_string(Verdict v);

struct TypeSurplus {
    std::string label;
    double param = kNoParam;
    std::optional<std::size_t> own_entry;
    double own = kNoParam;    // v(t) - pi(t).c(t); NaN when t has no menu entry
    double cross = -lp::kInf;  // max over other entries
    double best = -lp::kInf;   // max over all entries
};

struct ExtractionReport {
    VerifyMode mode;
    Verdict verdict = Verdict::Fails;
    std::vector<TypeSurplus> types;
    double worst_own_low = 0.0;   // min own surplus
    double worst_own_high = 0.0;  // max own surplus
    double worst_cross = -lp::kInf;
    double worst_best = -lp::kInf;
    double min_best = lp::kInf;
    double lipschitz_slack = 0.0;  // L_v h + max ||c||_inf L_pi h (parametric only)
    std::vector<std::string> failures;

    bool passed() const { return verdict != Verdict::Fails; }
};

/// Evaluates every surplus of `types` against `menu`. On-menu types are
/// matched by parameter when both carry one, else by label.
ExtractionReport verify_menu(const TabularModel& types, const Menu& menu, VerifyMode mode,
                             const Tolerances& tol = {});

/// Verification on the uniform grid of `grid` points, with Lipschitz slack.
ExtractionReport verify_menu(const ParametricModel& m, const Menu& menu, std::size_t grid, VerifyMode mode,
                             const Tolerances& tol = {});

struct CompressResult {
    Menu menu;
    std::vector<std::size_t> kept;  // indices into the input menu
    std::vector<double> radii;      // cover radius of each kept entry
};

/// Greedy left-to-right cover of the grid by balls of radius
/// (eps/2) / (L_v + ||c(t)||_inf L_pi); kept contracts are lowered by eps.
/// Throws InputMenuFails if `menu` does not achieve Virtual(eps) on the grid.
CompressResult compress_menu(const ParametricModel& m, const Menu& menu, double eps, std::size_t grid,
                             const Tolerances& tol = {});

}  // namespace surplus::extraction
