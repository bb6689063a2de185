#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smdg/dg1d.hpp"
#include "smdg/dg2d.hpp"

namespace smdg {

// A manufactured 1D case: noise coefficients plus the path-dependent exact
// solution (x, t, W_t) -> value used for per-sample error measurement.
struct Problem1D {
    std::string name;
    double xa = 0.0, xb = 1.0;
    NoiseSpec1D noise;
    std::function<double(double x, double t, double w)> exact_u;
    std::function<double(double x, double t, double w)> exact_v;
};

struct Problem2D {
    std::string name;
    double xa = 0.0, xb = 1.0, ya = 0.0, yb = 1.0;
    NoiseSpec2D noise;
    std::function<double(double x, double y, double t, double w)> exact_E;
    std::function<double(double x, double y, double t, double w)> exact_S;
    std::function<double(double x, double y, double t, double w)> exact_T;
};

// Named cases: "maxwell1d_trig" (multiplicative f=v, g=u),
// "maxwell1d_det" (zero noise), and the 2D counterparts
// "maxwell2d_trig" (f=E, g=S, r=T), "maxwell2d_det".
Problem1D make_problem_1d(const std::string& name);
Problem2D make_problem_2d(const std::string& name);
std::vector<std::string> problem_names(int dimension);

} // namespace smdg
