#pragma once

// Belief/value models. A TabularModel lists finitely many types; a
// ParametricModel maps t in [0, 1] to a belief and a value and carries
// Lipschitz moduli plus any faces known in closed form.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surplus/geometry.hpp"

namespace surplus::models {

using geometry::Functional;
using geometry::Vector;

struct TabularModel {
    std::size_t states = 0;
    std::vector<std::string> types;
    std::vector<Vector> beliefs;
    std::vector<double> values;
    /// Parameter t of each type when sampled from a parametric model; empty otherwise.
    std::vector<double> params;

    std::size_t size() const { return types.size(); }
    /// Throws InvalidModel (length mismatch) or InvalidBelief.
    void validate() const;
    geometry::FiniteBeliefSet belief_set() const { return {types, beliefs}; }
};

/// A face of the parametric type space: the finite type set `members` is cut
/// out by `z` inside the stage `within` (empty means all of T).
struct DeclaredTypeFace {
    std::vector<double> members;
    Functional z;
    std::vector<double> within;
};

struct ParametricModel {
    std::string name;
    std::size_t states = 0;
    std::function<Vector(double)> belief_fn;
    std::function<double(double)> value_fn;
    double lipschitz_pi = 0.0;  // bound on ||pi(t) - pi(s)||_1 / |t - s|
    double lipschitz_v = 0.0;   // bound on |v(t) - v(s)| / |t - s|
    std::vector<DeclaredTypeFace> declared_faces;

    /// Throw DomainError outside [0, 1].
    Vector belief(double t) const;
    double value(double t) const;
};

enum class ValuePreset { Identity, Quadratic, Constant };
ValuePreset parse_value_preset(std::string_view name);  // throws InvalidModel
std::string_view to_string(ValuePreset p);

// ---- closed-form curve -------------------------------------------------

/// Plane point at t in [0, 1]; throws DomainError outside.
std::pair<double, double> curve_point(double t);
/// Speed of the curve with respect to u = 2 pi t.
double curve_speed(double t);

struct Frame {
    Vector d1;  // (1, -1, 0) / sqrt 2
    Vector d2;  // (1, 1, -2) / sqrt 6
};
const Frame& frame();

/// (1/3)(1,1,1) + eps_emb (x d1 + y d2); throws OutOfSimplex if a component is negative.
Vector embed(double x, double y, double eps_emb = 0.1);
/// (1,1,1) - d1 / eps_emb; pi . zeta = 1 - x on embedded points.
Functional chord_functional(double eps_emb = 0.1);
/// eps_emb (1,1,1) - d2; pi . z = eps_emb (1 - y), zero at t = 0.
Functional endpoint_separator(double eps_emb = 0.1);
/// eps_emb (1,1,1) + d2; pi . z = eps_emb (1 + y), zero at t = 1.
Functional endpoint_separator_upper(double eps_emb = 0.1);

/// Curve embedded in the 2-simplex with value preset `v` and declared faces
/// for the chord {0, 1} and for each endpoint inside it.
ParametricModel counterexample(double eps_emb = 0.1, ValuePreset v = ValuePreset::Identity);

/// Reparametrize `m` on [a, b] as a model on [0, 1]; declared faces are dropped.
ParametricModel restrict(const ParametricModel& m, double a, double b);

/// Random tabular model: beliefs uniform on the simplex, values uniform on [0, 1].
TabularModel random_polytope(std::uint64_t seed, std::size_t types, std::size_t states);

// ---- discretization ----------------------------------------------------

/// Grid {0, 1/(n-1), ..., 1}, exact at both endpoints.
std::vector<double> uniform_grid(std::size_t n);

/// Sample on the uniform grid of n points; throws DomainError if n < 2.
TabularModel sample(const ParametricModel& m, std::size_t n);
/// Sample at explicit parameters (sorted, unique).
TabularModel sample_at(const ParametricModel& m, const std::vector<double>& ts);

/// Declared faces whose members and scope all occur among `ts` (within 1e-12),
/// translated to indices.
std::vector<geometry::DeclaredFace> declared_faces_on(const ParametricModel& m, const std::vector<double>& ts);

struct LipschitzReport {
    double max_ratio_pi = 0.0;
    double max_ratio_v = 0.0;
    double declared_pi = 0.0;
    double declared_v = 0.0;
    bool passed = false;
};

/// Largest adjacent-pair difference quotients on a uniform grid.
LipschitzReport validate_lipschitz(const ParametricModel& m, std::size_t grid);

/// Checks beliefs on a grid and every declared face: |pi.z| <= 1e-9 on
/// members and > 0 elsewhere in scope. Throws InvalidModel.
void validate(const ParametricModel& m, std::size_t grid = 1001);

/// Shortest round-trip text for a parameter value, used as a type label.
std::string param_label(double t);

}  // namespace surplus::models
