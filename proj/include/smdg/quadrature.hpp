#pragma once

#include <vector>

namespace smdg {

// Gauss-Legendre rule on [-1,1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    int points() const { return static_cast<int>(nodes.size()); }
};

// m-point rule, exact for polynomials of degree <= 2m-1.
Quadrature gauss_quadrature(int m);

} // namespace smdg
