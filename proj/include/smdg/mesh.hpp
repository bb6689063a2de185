#pragma once

#include <vector>

namespace smdg {

// 1D partition a = x_{1/2} < x_{3/2} < ... < x_{N+1/2} = b with periodic
// topology. Immutable after construction.
struct Mesh1D {
    double a = 0.0, b = 1.0;
    std::vector<double> edges; // n_cells + 1 entries
    int n_cells = 0;

    double width(int j) const { return edges[j + 1] - edges[j]; }
    double center(int j) const { return 0.5 * (edges[j] + edges[j + 1]); }
    double max_width() const;
    // x for reference coordinate xi in [-1,1] on cell j
    double to_physical(int j, double xi) const {
        return center(j) + 0.5 * width(j) * xi;
    }
};

Mesh1D build_mesh_1d(double a, double b, int n);

struct TensorMesh2D {
    Mesh1D x;
    Mesh1D y;
    int n_cells() const { return x.n_cells * y.n_cells; }
};

TensorMesh2D build_mesh_2d(double ax, double bx, int nx, double ay, double by, int ny);

} // namespace smdg
