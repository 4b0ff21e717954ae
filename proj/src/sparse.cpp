#include "projfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projfem {

CsrMatrix::CsrMatrix(int n_rows, int n_cols, std::vector<int> row_ptr,
                     std::vector<int> col_idx, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (n_rows_ < 0 || n_cols_ < 0 ||
        row_ptr_.size() != static_cast<std::size_t>(n_rows_) + 1 ||
        col_idx_.size() != values_.size() ||
        row_ptr_.front() != 0 ||
        row_ptr_.back() != static_cast<int>(col_idx_.size())) {
        throw std::invalid_argument("CsrMatrix: inconsistent structure");
    }
    for (int r = 0; r < n_rows_; ++r) {
        if (row_ptr_[r + 1] < row_ptr_[r]) {
            throw std::invalid_argument("CsrMatrix: row_ptr not monotone");
        }
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= n_cols_) {
                throw std::invalid_argument("CsrMatrix: column out of range");
            }
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
                throw std::invalid_argument(
                    "CsrMatrix: columns not strictly increasing in row");
            }
        }
    }
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n_cols_ ||
        static_cast<int>(y.size()) != n_rows_) {
        throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
    }
    for (int r = 0; r < n_rows_; ++r) {
        double acc = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            acc += values_[k] * x[col_idx_[k]];
        }
        y[r] = acc;
    }
}

Vector CsrMatrix::multiply(const Vector& x) const {
    Vector y(n_rows_);
    multiply(x, y);
    return y;
}

double CsrMatrix::at(int row, int col) const {
    if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) {
        throw std::out_of_range("CsrMatrix::at");
    }
    auto begin = col_idx_.begin() + row_ptr_[row];
    auto end = col_idx_.begin() + row_ptr_[row + 1];
    auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return values_[it - col_idx_.begin()];
}

CsrMatrix CsrMatrix::transposed() const {
    std::vector<int> row_ptr(n_cols_ + 1, 0);
    for (int c : col_idx_) ++row_ptr[c + 1];
    for (int c = 0; c < n_cols_; ++c) row_ptr[c + 1] += row_ptr[c];
    std::vector<int> col_idx(col_idx_.size());
    std::vector<double> values(values_.size());
    std::vector<int> cursor(row_ptr.begin(), row_ptr.end() - 1);
    for (int r = 0; r < n_rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            int pos = cursor[col_idx_[k]]++;
            col_idx[pos] = r;
            values[pos] = values_[k];
        }
    }
    // rows come out sorted because the source rows are scanned in order
    return CsrMatrix(n_cols_, n_rows_, std::move(row_ptr), std::move(col_idx),
                     std::move(values));
}

void CsrMatrix::scale(double factor) {
    for (double& v : values_) v *= factor;
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n_rows_, 0.0);
    for (int r = 0; r < std::min(n_rows_, n_cols_); ++r) d[r] = at(r, r);
    return d;
}

double CsrMatrix::max_asymmetry() const {
    double worst = 0.0;
    for (int r = 0; r < n_rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            worst = std::max(worst, std::abs(values_[k] - at(col_idx_[k], r)));
        }
    }
    return worst;
}

void CooBuilder::add(int row, int col, double value) {
    if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) {
        throw std::out_of_range("CooBuilder::add: index out of range");
    }
    entries_.push_back({row, col, value});
}

CsrMatrix CooBuilder::build() const {
    std::vector<Entry> sorted = entries_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Entry& a, const Entry& b) {
                         return a.row != b.row ? a.row < b.row : a.col < b.col;
                     });
    std::vector<int> row_ptr(n_rows_ + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    col_idx.reserve(sorted.size());
    values.reserve(sorted.size());
    std::size_t i = 0;
    for (int r = 0; r < n_rows_; ++r) {
        while (i < sorted.size() && sorted[i].row == r) {
            int c = sorted[i].col;
            double v = 0.0;
            while (i < sorted.size() && sorted[i].row == r && sorted[i].col == c) {
                v += sorted[i].value;
                ++i;
            }
            col_idx.push_back(c);
            values.push_back(v);
        }
        row_ptr[r + 1] = static_cast<int>(col_idx.size());
    }
    return CsrMatrix(n_rows_, n_cols_, std::move(row_ptr), std::move(col_idx),
                     std::move(values));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void project_mean_zero(std::span<double> x, std::span<const double> m) {
    if (x.size() != m.size()) {
        throw std::invalid_argument("project_mean_zero: dimension mismatch");
    }
    double mass = 0.0;  // m'1
    for (double v : m) mass += v;
    if (mass == 0.0) throw std::invalid_argument("project_mean_zero: zero mass");
    double shift = dot(m, x) / mass;
    for (double& v : x) v -= shift;
}

namespace {

// b <- b - (1'b / n) 1, the component in the kernel of the operator
void remove_constant_component(std::span<double> b) {
    double mean = 0.0;
    for (double v : b) mean += v;
    mean /= static_cast<double>(b.size());
    for (double& v : b) v -= mean;
}

}  // namespace

SolveReport cg_solve(const CsrMatrix& A, std::span<const double> b,
                     std::span<double> x, double tol, int max_iter,
                     const NullspaceMeanZero* nullspace) {
    const int n = A.n_rows();
    if (A.n_cols() != n || static_cast<int>(b.size()) != n ||
        static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("cg_solve: dimension mismatch");
    }
    Vector rhs(b.begin(), b.end());
    if (nullspace) {
        remove_constant_component(rhs);
        project_mean_zero(x, nullspace->mass_vector);
    }
    const double bnorm = norm2(rhs);
    SolveReport report;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        report.converged = true;
        return report;
    }

    Vector r(n), p(n), Ap(n);
    A.multiply(x, r);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    p = r;
    double rr = dot(r, r);
    double residual = std::sqrt(rr) / bnorm;
    int it = 0;
    while (residual > tol && it < max_iter) {
        A.multiply(p, Ap);
        double pAp = dot(p, Ap);
        if (pAp <= 0.0) break;  // loss of positive definiteness
        double alpha = rr / pAp;
        axpy(alpha, p, x);
        axpy(-alpha, Ap, r);
        if (nullspace) project_mean_zero(x, nullspace->mass_vector);
        double rr_new = dot(r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        residual = std::sqrt(rr) / bnorm;
        ++it;
    }
    if (nullspace) project_mean_zero(x, nullspace->mass_vector);
    report.iterations = it;
    report.residual = residual;
    report.converged = residual <= tol;
    return report;
}

SolveReport bicgstab_solve(const CsrMatrix& A, std::span<const double> b,
                           std::span<double> x, double tol, int max_iter,
                           Preconditioner precond) {
    Vector inv_diag;
    if (precond == Preconditioner::Jacobi) {
        inv_diag = A.diagonal();
        for (double& d : inv_diag) d = (d != 0.0) ? 1.0 / d : 1.0;
    }
    return bicgstab_solve(A, b, x, tol, max_iter,
                          std::span<const double>(inv_diag));
}

SolveReport bicgstab_solve(const CsrMatrix& A, std::span<const double> b,
                           std::span<double> x, double tol, int max_iter,
                           std::span<const double> inv_diag) {
    const int n = A.n_rows();
    if (A.n_cols() != n || static_cast<int>(b.size()) != n ||
        static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("bicgstab_solve: dimension mismatch");
    }
    if (!inv_diag.empty() && static_cast<int>(inv_diag.size()) != n) {
        throw std::invalid_argument("bicgstab_solve: bad preconditioner size");
    }
    SolveReport report;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        report.converged = true;
        return report;
    }

    auto apply_precond = [&](const Vector& v, Vector& out) {
        if (!inv_diag.empty()) {
            for (int i = 0; i < n; ++i) out[i] = inv_diag[i] * v[i];
        } else {
            out = v;
        }
    };

    Vector r(n), r0(n), p(n), v(n), s(n), t(n), phat(n), shat(n);
    A.multiply(x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double residual = norm2(r) / bnorm;
    int it = 0;
    const double breakdown = 1e-300;
    while (residual > tol && it < max_iter) {
        double rho_new = dot(r0, r);
        if (std::abs(rho_new) < breakdown) break;
        double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        apply_precond(p, phat);
        A.multiply(phat, v);
        double r0v = dot(r0, v);
        if (std::abs(r0v) < breakdown) break;
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= tol) {
            axpy(alpha, phat, x);
            residual = norm2(s) / bnorm;
            ++it;
            break;
        }
        apply_precond(s, shat);
        A.multiply(shat, t);
        double tt = dot(t, t);
        if (tt < breakdown) break;
        omega = dot(t, s) / tt;
        if (std::abs(omega) < breakdown) break;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        residual = norm2(r) / bnorm;
        ++it;
    }
    report.iterations = it;
    report.residual = residual;
    report.converged = residual <= tol;
    return report;
}

}  // namespace projfem
