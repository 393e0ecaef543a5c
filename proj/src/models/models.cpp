#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "surplus/error.hpp"
#include "surplus/models.hpp"

namespace surplus::models {

void TabularModel::validate() const {
    if (types.size() != beliefs.size() || types.size() != values.size())
        throw InvalidModel("types, beliefs and values must have equal lengths");
    if (!params.empty() && params.size() != types.size()) throw InvalidModel("params length mismatch");
    if (types.empty()) throw InvalidModel("model has no types");
    for (const auto& b : beliefs)
        if (b.size() != states) throw InvalidModel("belief length differs from state count");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidModel("non-finite value");
    belief_set().validate();
}

Vector ParametricModel::belief(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("parameter " + std::to_string(t) + " outside [0, 1]");
    return belief_fn(t);
}

double ParametricModel::value(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("parameter " + std::to_string(t) + " outside [0, 1]");
    return value_fn(t);
}

ValuePreset parse_value_preset(std::string_view name) {
    if (name == "identity") return ValuePreset::Identity;
    if (name == "quadratic") return ValuePreset::Quadratic;
    if (name == "constant") return ValuePreset::Constant;
    throw InvalidModel("unknown value preset '" + std::string(name) + "'");
}

std::string_view to_string(ValuePreset p) {
    switch (p) {
        case ValuePreset::Identity:
            return "identity";
        case ValuePreset::Quadratic:
            return "quadratic";
        case ValuePreset::Constant:
            return "constant";
    }
    return "identity";
}

ParametricModel restrict(const ParametricModel& m, double a, double b) {
    if (!(0.0 <= a && a < b && b <= 1.0)) throw DomainError("restriction interval must satisfy 0 <= a < b <= 1");
    ParametricModel r;
    r.name = m.name + "[" + param_label(a) + "," + param_label(b) + "]";
    r.states = m.states;
    const double w = b - a;
    r.belief_fn = [m, a, w](double t) { return m.belief(std::min(1.0, a + w * t)); };
    r.value_fn = [m, a, w](double t) { return m.value(std::min(1.0, a + w * t)); };
    r.lipschitz_pi = m.lipschitz_pi * w;
    r.lipschitz_v = m.lipschitz_v * w;
    return r;
}

TabularModel random_polytope(std::uint64_t seed, std::size_t types, std::size_t states) {
    if (types == 0 || states == 0) throw InvalidModel("random_polytope needs at least one type and one state");
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TabularModel m;
    m.states = states;
    for (std::size_t i = 0; i < types; ++i) {
        Vector b(states);
        double sum = 0.0;
        for (auto& x : b) sum += (x = expo(rng));
        for (auto& x : b) x /= sum;
        // Renormalize so the stored vector sums to 1 as closely as doubles allow.
        double fix = 1.0;
        for (std::size_t k = 1; k < states; ++k) fix -= b[k];
        b[0] = std::max(0.0, fix);
        m.types.push_back(std::to_string(i));
        m.beliefs.push_back(std::move(b));
        m.values.push_back(unif(rng));
    }
    return m;
}

std::vector<double> uniform_grid(std::size_t n) {
    if (n < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    g.back() = 1.0;
    return g;
}

std::string param_label(double t) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, res.ptr);
}

TabularModel sample_at(const ParametricModel& m, const std::vector<double>& ts) {
    TabularModel out;
    out.states = m.states;
    for (double t : ts) {
        out.types.push_back(param_label(t));
        out.beliefs.push_back(m.belief(t));
        out.values.push_back(m.value(t));
        out.params.push_back(t);
    }
    return out;
}

TabularModel sample(const ParametricModel& m, std::size_t n) { return sample_at(m, uniform_grid(n)); }

std::vector<geometry::DeclaredFace> declared_faces_on(const ParametricModel& m, const std::vector<double>& ts) {
    auto locate = [&](double t, std::size_t& idx) {
        for (std::size_t k = 0; k < ts.size(); ++k)
            if (std::fabs(ts[k] - t) <= 1e-12) {
                idx = k;
                return true;
            }
        return false;
    };
    std::vector<geometry::DeclaredFace> out;
    for (const auto& f : m.declared_faces) {
        geometry::DeclaredFace d;
        d.z = f.z;
        bool ok = true;
        for (double t : f.members) {
            std::size_t k = 0;
            if (!(ok = locate(t, k))) break;
            d.members.push_back(k);
        }
        for (double t : f.within) {
            std::size_t k = 0;
            if (!ok || !(ok = locate(t, k))) break;
            d.within.push_back(k);
        }
        if (ok) out.push_back(std::move(d));
    }
    return out;
}

LipschitzReport validate_lipschitz(const ParametricModel& m, std::size_t grid) {
    const auto ts = uniform_grid(grid);
    LipschitzReport r;
    r.declared_pi = m.lipschitz_pi;
    r.declared_v = m.lipschitz_v;
    Vector prev = m.belief(ts[0]);
    double prev_v = m.value(ts[0]);
    for (std::size_t k = 1; k < ts.size(); ++k) {
        const Vector cur = m.belief(ts[k]);
        const double cur_v = m.value(ts[k]);
        const double h = ts[k] - ts[k - 1];
        double d = 0.0;
        for (std::size_t c = 0; c < cur.size(); ++c) d += std::fabs(cur[c] - prev[c]);
        r.max_ratio_pi = std::max(r.max_ratio_pi, d / h);
        r.max_ratio_v = std::max(r.max_ratio_v, std::fabs(cur_v - prev_v) / h);
        prev = cur;
        prev_v = cur_v;
    }
    r.passed = r.max_ratio_pi <= r.declared_pi && r.max_ratio_v <= r.declared_v;
    return r;
}

void validate(const ParametricModel& m, std::size_t grid) {
    if (!m.belief_fn || !m.value_fn) throw InvalidModel("model '" + m.name + "' lacks belief or value function");
    const auto ts = uniform_grid(grid);
    try {
        sample_at(m, ts).validate();
    } catch (const InvalidBelief& e) {
        throw InvalidModel(std::string("sampled belief invalid: ") + e.what());
    }
    for (std::size_t f = 0; f < m.declared_faces.size(); ++f) {
        const auto& face = m.declared_faces[f];
        if (face.z.size() != m.states) throw InvalidModel("declared face functional has wrong length");
        auto is_member = [&](double t) {
            return std::any_of(face.members.begin(), face.members.end(),
                               [t](double s) { return std::fabs(s - t) <= 1e-12; });
        };
        const std::vector<double>& scope = face.within.empty() ? ts : face.within;
        for (double t : face.members) {
            const double val = geometry::evaluate(m.belief(t), face.z);
            if (std::fabs(val) > 1e-9)
                throw InvalidModel("declared face " + std::to_string(f) + " is nonzero at member " + param_label(t));
        }
        for (double t : scope) {
            if (is_member(t)) continue;
            if (!(geometry::evaluate(m.belief(t), face.z) > 0.0))
                throw InvalidModel("declared face " + std::to_string(f) + " is not positive at " + param_label(t));
        }
    }
}

}  // namespace surplus::models
