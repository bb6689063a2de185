#include "smdg/mesh.hpp"

#include <algorithm>

#include "smdg/errors.hpp"

namespace smdg {

double Mesh1D::max_width() const {
    double h = 0.0;
    for (int j = 0; j < n_cells; ++j) h = std::max(h, width(j));
    return h;
}

Mesh1D build_mesh_1d(double a, double b, int n) {
    if (n < 1) throw config_error("build_mesh_1d: cell count must be >= 1");
    if (!(b > a)) throw config_error("build_mesh_1d: degenerate interval, need b > a");
    Mesh1D m;
    m.a = a;
    m.b = b;
    m.n_cells = n;
    m.edges.resize(n + 1);
    const double h = (b - a) / n;
    for (int j = 0; j <= n; ++j) m.edges[j] = a + h * j;
    m.edges[n] = b; // exact endpoint
    return m;
}

TensorMesh2D build_mesh_2d(double ax, double bx, int nx, double ay, double by, int ny) {
    return {build_mesh_1d(ax, bx, nx), build_mesh_1d(ay, by, ny)};
}

} // namespace smdg
