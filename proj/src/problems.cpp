#include "smdg/problems.hpp"

#include <cmath>

#include "smdg/errors.hpp"

namespace smdg {

namespace {

const double two_pi = 2.0 * std::acos(-1.0);

double growth(double t, double w) { return std::exp(w - 0.5 * t); }

} // namespace

Problem1D make_problem_1d(const std::string& name) {
    Problem1D p;
    p.name = name;
    p.xa = 0.0;
    p.xb = two_pi;
    if (name == "maxwell1d_trig") {
        // dv = -u_x dt + v dW, du = -v_x dt + u dW
        p.noise.f = [](double, double, double, double v) { return v; };
        p.noise.g = [](double, double, double u, double) { return u; };
        p.noise.coupling = {{1.0, 0.0, 0.0, 1.0}};
        p.exact_v = [](double x, double t, double w) {
            return (std::sin(x - t) + std::cos(x + t)) * growth(t, w);
        };
        p.exact_u = [](double x, double t, double w) {
            return (std::sin(x - t) - std::cos(x + t)) * growth(t, w);
        };
        return p;
    }
    if (name == "maxwell1d_det") {
        p.noise.f = [](double, double, double, double) { return 0.0; };
        p.noise.g = p.noise.f;
        p.noise.coupling = {{0.0, 0.0, 0.0, 0.0}};
        p.exact_v = [](double x, double t, double) {
            return std::sin(x - t) + std::cos(x + t);
        };
        p.exact_u = [](double x, double t, double) {
            return std::sin(x - t) - std::cos(x + t);
        };
        return p;
    }
    throw config_error("unknown 1d problem '" + name + "'");
}

Problem2D make_problem_2d(const std::string& name) {
    Problem2D p;
    p.name = name;
    p.xa = p.ya = 0.0;
    p.xb = p.yb = two_pi;
    if (name == "maxwell2d_trig") {
        // dE - T_x dt + S_y dt = E dW, dS + E_y dt = S dW, dT - E_x dt = T dW.
        // Consistent trig parts: E = sin(x+t) - cos(y+t), S = cos(y+t),
        // T = sin(x+t); substitution shows dA_E/dt = dA_T/dx - dA_S/dy etc.
        p.noise.f = [](double, double, double, double E, double, double) { return E; };
        p.noise.g = [](double, double, double, double, double S, double) { return S; };
        p.noise.r = [](double, double, double, double, double, double T) { return T; };
        p.noise.coupling = {{1, 0, 0, 0, 1, 0, 0, 0, 1}};
        p.exact_E = [](double x, double y, double t, double w) {
            return (std::sin(x + t) - std::cos(y + t)) * growth(t, w);
        };
        p.exact_S = [](double, double y, double t, double w) {
            return std::cos(y + t) * growth(t, w);
        };
        p.exact_T = [](double x, double, double t, double w) {
            return std::sin(x + t) * growth(t, w);
        };
        return p;
    }
    if (name == "maxwell2d_det") {
        p.noise.f = [](double, double, double, double, double, double) { return 0.0; };
        p.noise.g = p.noise.f;
        p.noise.r = p.noise.f;
        p.noise.coupling = {{0, 0, 0, 0, 0, 0, 0, 0, 0}};
        p.exact_E = [](double x, double y, double t, double) {
            return std::sin(x + t) - std::cos(y + t);
        };
        p.exact_S = [](double, double y, double t, double) { return std::cos(y + t); };
        p.exact_T = [](double x, double, double t, double) { return std::sin(x + t); };
        return p;
    }
    throw config_error("unknown 2d problem '" + name + "'");
}

std::vector<std::string> problem_names(int dimension) {
    if (dimension == 1) return {"maxwell1d_trig", "maxwell1d_det"};
    return {"maxwell2d_trig", "maxwell2d_det"};
}

} // namespace smdg
