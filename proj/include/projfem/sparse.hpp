#ifndef PROJFEM_SPARSE_HPP
#define PROJFEM_SPARSE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace projfem {

using Vector = std::vector<double>;

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(int n_rows, int n_cols, std::vector<int> row_ptr,
              std::vector<int> col_idx, std::vector<double> values);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    Vector multiply(const Vector& x) const;

    /// Entry lookup by binary search; 0 if not stored.
    double at(int row, int col) const;

    CsrMatrix transposed() const;
    void scale(double factor);
    std::vector<double> diagonal() const;

    /// Max |A_ij - A_ji| over the stored pattern; matrices with a
    /// nonsymmetric pattern report the largest unmatched entry.
    double max_asymmetry() const;

private:
    int n_rows_ = 0;
    int n_cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Accumulates (row, col, value) triplets, then compresses duplicates.
class CooBuilder {
public:
    CooBuilder(int n_rows, int n_cols) : n_rows_(n_rows), n_cols_(n_cols) {}
    void add(int row, int col, double value);
    void reserve(std::size_t n) { entries_.reserve(n); }
    CsrMatrix build() const;

private:
    struct Entry {
        int row;
        int col;
        double value;
    };
    int n_rows_;
    int n_cols_;
    std::vector<Entry> entries_;
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;   // relative to ||b|| (absolute when b = 0)
    bool converged = false;
};

/// Mean-zero constraint for the singular Poisson-Neumann pressure solve:
/// the kernel of the operator is the constant vector; solutions are
/// normalized against the mass vector m = M_p 1 so that m'x = 0.
struct NullspaceMeanZero {
    std::span<const double> mass_vector;
};

/// x <- x - (m'x / m'1) 1. Idempotent.
void project_mean_zero(std::span<double> x, std::span<const double> mass_vector);

/// Conjugate gradients for SPD (or consistent SPSD) systems. When
/// `nullspace` is given, b is first made orthogonal to constants and the
/// iterate is re-projected to mass-weighted mean zero every iteration.
SolveReport cg_solve(const CsrMatrix& A, std::span<const double> b,
                     std::span<double> x, double tol, int max_iter,
                     const NullspaceMeanZero* nullspace = nullptr);

enum class Preconditioner { None, Jacobi };

/// BiCGStab for the nonsymmetric convection-diffusion systems.
/// Breakdown or stagnation reports converged = false.
SolveReport bicgstab_solve(const CsrMatrix& A, std::span<const double> b,
                           std::span<double> x, double tol, int max_iter,
                           Preconditioner precond = Preconditioner::Jacobi);

/// Variant with a prefactored Jacobi preconditioner (inverse diagonal),
/// shared across the two velocity-component solves of one step.
SolveReport bicgstab_solve(const CsrMatrix& A, std::span<const double> b,
                           std::span<double> x, double tol, int max_iter,
                           std::span<const double> inv_diag);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace projfem

#endif
