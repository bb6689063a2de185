#pragma once

#include <optional>
#include <vector>

namespace smdg {

// Dense LU with partial pivoting, row-major a (n x n). Solves in place into x.
// Throws well_posedness_error on a numerically singular pivot.
void lu_solve(std::vector<double> a, int n, std::vector<double>& x);

// Abstract linear operator on flat coefficient vectors; implementations are
// immutable after construction and safe to share across threads.
struct LinOp {
    virtual ~LinOp() = default;
    virtual int dim() const = 0;
    // y = A x; x and y must not alias.
    virtual void apply(const double* x, double* y) const = 0;

    // Materialize by column extraction (tests, spectra of small operators).
    std::vector<double> to_dense() const;
};

// Small dense operator (tests, scalar SDEs).
struct DenseOp final : LinOp {
    int n = 0;
    std::vector<double> a; // row-major
    DenseOp(int n_, std::vector<double> a_) : n(n_), a(std::move(a_)) {}
    int dim() const override { return n; }
    void apply(const double* x, double* y) const override;
};

// (C ⊗ I) on a stacked multi-field vector: out_i = sum_j C[i][j] x_j per
// field block. This is the linear-noise diffusion operator; constant-in-space
// linear noise projects onto V_h^k exactly, so the coefficient-space action
// is the coupling matrix itself.
struct BlockCouplingOp final : LinOp {
    int fields = 0;
    int block = 0;
    std::vector<double> c; // fields x fields, row-major
    BlockCouplingOp(int fields_, int block_, std::vector<double> c_)
        : fields(fields_), block(block_), c(std::move(c_)) {}
    int dim() const override { return fields * block; }
    void apply(const double* x, double* y) const override;

    // lambda^2 when C^T C = lambda^2 I (then ||BX|| = lambda ||X|| and the
    // mean-energy ODE closes); nullopt otherwise.
    std::optional<double> isometry_rate() const;
};

} // namespace smdg
