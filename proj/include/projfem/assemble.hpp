#ifndef PROJFEM_ASSEMBLE_HPP
#define PROJFEM_ASSEMBLE_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "projfem/fem.hpp"
#include "projfem/mesh.hpp"
#include "projfem/sparse.hpp"

namespace projfem {

/// Sparsity pattern shared by all operators on one (row, col) space pair,
/// with a per-cell scatter map from local (i, j) to nnz slots.
struct SparsityPattern {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<std::vector<int>> cell_scatter;  // per cell, row-major locals

    CsrMatrix matrix_with(std::vector<double> values) const;
    CsrMatrix zero_matrix() const;
};

SparsityPattern build_pattern(const FeSpace& rows, const FeSpace& cols);

/// Quadrature degrees fixed for the whole artifact: one conservative rule
/// for velocity-space terms, a lighter one for pure pressure terms.
inline constexpr int kVelocityQuadDegree = 6;
inline constexpr int kPressureQuadDegree = 4;

CsrMatrix mass_matrix(const FeSpace& space, const SparsityPattern& pattern,
                      int quad_degree);
CsrMatrix stiffness_matrix(const FeSpace& space, const SparsityPattern& pattern,
                           int quad_degree);

/// G_a with entries \int (d_a phi_q) psi_v: rows in the velocity space,
/// columns in the pressure space. The (grad p, v) coupling of the schemes.
CsrMatrix gradient_coupling(const FeSpace& vspace, const FeSpace& pspace,
                            int axis, const SparsityPattern& pattern);

/// GD_ab with entries \int (d_a psi_i)(d_b psi_j) on the velocity space;
/// the grad-div blocks of the penalty scheme.
CsrMatrix graddiv_block(const FeSpace& vspace, int axis_row, int axis_col,
                        const SparsityPattern& pattern);

/// All operators the four schemes share. D_a is the stored transpose of
/// G_a; for boundary-zero u the weak divergence (div u, q) equals
/// -(D_x u1 + D_y u2) up to quadrature round-off.
struct OperatorSet {
    const FeSpace* vspace = nullptr;
    const FeSpace* pspace = nullptr;
    SparsityPattern pat_v;   // velocity x velocity
    SparsityPattern pat_p;   // pressure x pressure
    SparsityPattern pat_vp;  // velocity rows, pressure cols
    CsrMatrix M_v, K_v;
    CsrMatrix M_p, K_p;
    CsrMatrix G_x, G_y;
    CsrMatrix D_x, D_y;
    CsrMatrix GD_xx, GD_xy, GD_yy;
    Vector mass_vector_p;  // M_p 1, the mean-zero weight
};

OperatorSet assemble_operator_set(const FeSpace& vspace, const FeSpace& pspace);

/// Skew-symmetric convection operator on the velocity space:
/// N(w)[i][j] = 1/2 \int [(w.grad phi_j) phi_i - (w.grad phi_i) phi_j].
/// Scalar: it acts identically on each velocity component. Element
/// matrices are antisymmetrized before scatter, so v'N(w)v = 0 in exact
/// arithmetic for any quadrature.
class ConvectionAssembler {
public:
    explicit ConvectionAssembler(const FeSpace& vspace,
                                 const SparsityPattern& pattern);
    /// Refill `values` (laid out on the bound pattern) in place.
    void fill(const Field& w1, const Field& w2,
              std::vector<double>& values) const;

private:
    const FeSpace* vspace_;
    const SparsityPattern* pattern_;
    std::vector<BasisEval> basis_;  // tabulated at the quadrature points
    const QuadratureRule* rule_;
};

CsrMatrix convection_matrix(const FeSpace& vspace, const Field& w1,
                            const Field& w2);

using VectorFn2 =
    std::function<std::pair<double, double>(double t, double x, double y)>;

/// Load vectors b_a[i] = \int f_a(., t) psi_i with the degree-6 rule.
std::pair<Vector, Vector> forcing_vector(const FeSpace& vspace,
                                         const VectorFn2& f, double t);

/// Homogeneous Dirichlet rows/columns by symmetric elimination: boundary
/// rows and columns zeroed, unit diagonal, b entries zeroed.
void apply_dirichlet(CsrMatrix& A, std::span<double> b,
                     const std::vector<int>& boundary_dofs);
void apply_dirichlet_matrix(CsrMatrix& A, const std::vector<int>& boundary_dofs);
void apply_dirichlet_rhs(std::span<double> b,
                         const std::vector<int>& boundary_dofs);

}  // namespace projfem

#endif
