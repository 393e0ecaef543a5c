#include <cmath>
#include <numbers>

#include "surplus/error.hpp"
#include "surplus/models.hpp"

namespace surplus::models {

namespace {

void check_domain(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("parameter " + std::to_string(t) + " outside [0, 1]");
}

double l1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

}  // namespace

// Heading pi/2 + u with speed 5 - 4 cos u, u = 2 pi t, integrated in closed form.
std::pair<double, double> curve_point(double t) {
    check_domain(t);
    const double u = 2.0 * std::numbers::pi * t;
    const double s = std::sin(u);
    const double x = 1.0 + (5.0 * std::cos(u) + 2.0 * s * s - 5.0) / (2.0 * std::numbers::pi);
    const double y = 1.0 + (5.0 * s - 2.0 * u - std::sin(2.0 * u)) / (2.0 * std::numbers::pi);
    return {x, y};
}

double curve_speed(double t) {
    check_domain(t);
    return 5.0 - 4.0 * std::cos(2.0 * std::numbers::pi * t);
}

const Frame& frame() {
    static const Frame f{
        {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0},
        {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)},
    };
    return f;
}

Vector embed(double x, double y, double eps_emb) {
    const auto& f = frame();
    Vector p(3);
    for (int k = 0; k < 3; ++k) {
        p[k] = 1.0 / 3.0 + eps_emb * (x * f.d1[k] + y * f.d2[k]);
        if (p[k] < 0.0) throw OutOfSimplex("embedded point has component " + std::to_string(p[k]));
    }
    return p;
}

Functional chord_functional(double eps_emb) {
    const auto& f = frame();
    Functional z(3);
    for (int k = 0; k < 3; ++k) z[k] = 1.0 - f.d1[k] / eps_emb;
    return z;
}

Functional endpoint_separator(double eps_emb) {
    const auto& f = frame();
    Functional z(3);
    for (int k = 0; k < 3; ++k) z[k] = eps_emb - f.d2[k];
    return z;
}

Functional endpoint_separator_upper(double eps_emb) {
    const auto& f = frame();
    Functional z(3);
    for (int k = 0; k < 3; ++k) z[k] = eps_emb + f.d2[k];
    return z;
}

ParametricModel counterexample(double eps_emb, ValuePreset v) {
    if (!(eps_emb > 0.0) || 1.0 / 3.0 - 1.78 * eps_emb <= 0.0)
        throw InvalidModel("embedding scale must lie in (0, 0.187)");
    ParametricModel m;
    m.name = "counterexample";
    m.states = 3;
    m.belief_fn = [eps_emb](double t) {
        const auto [x, y] = curve_point(t);
        return embed(x, y, eps_emb);
    };
    // |dx/dt|, |dy/dt| <= max speed 9, so ||dpi/dt||_1 <= 9 eps (||d1||_1 + ||d2||_1).
    m.lipschitz_pi = 9.0 * eps_emb * (l1(frame().d1) + l1(frame().d2));
    switch (v) {
        case ValuePreset::Identity:
            m.value_fn = [](double t) { return t; };
            m.lipschitz_v = 1.0;
            break;
        case ValuePreset::Quadratic:
            m.value_fn = [](double t) { return t * t; };
            m.lipschitz_v = 2.0;
            break;
        case ValuePreset::Constant:
            m.value_fn = [](double) { return 0.0; };
            m.lipschitz_v = 0.0;
            break;
    }
    m.declared_faces = {
        {{0.0, 1.0}, chord_functional(eps_emb), {}},
        {{0.0}, endpoint_separator(eps_emb), {0.0, 1.0}},
        {{1.0}, endpoint_separator_upper(eps_emb), {0.0, 1.0}},
    };
    return m;
}

}  // namespace surplus::models
