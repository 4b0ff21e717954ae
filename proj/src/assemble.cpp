#include "projfem/assemble.hpp"

#include <algorithm>
#include <stdexcept>

namespace projfem {

CsrMatrix SparsityPattern::matrix_with(std::vector<double> values) const {
    return CsrMatrix(n_rows, n_cols, row_ptr, col_idx, std::move(values));
}

CsrMatrix SparsityPattern::zero_matrix() const {
    return matrix_with(std::vector<double>(col_idx.size(), 0.0));
}

SparsityPattern build_pattern(const FeSpace& rows, const FeSpace& cols) {
    if (&rows.mesh() != &cols.mesh()) {
        throw std::invalid_argument("build_pattern: spaces on different meshes");
    }
    const TriMesh& mesh = rows.mesh();
    SparsityPattern pat;
    pat.n_rows = rows.n_dofs();
    pat.n_cols = cols.n_dofs();

    std::vector<std::vector<int>> row_cols(pat.n_rows);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        for (int gi : rows.cell_dofs(t)) {
            const auto& cj = cols.cell_dofs(t);
            row_cols[gi].insert(row_cols[gi].end(), cj.begin(), cj.end());
        }
    }
    pat.row_ptr.assign(pat.n_rows + 1, 0);
    for (int r = 0; r < pat.n_rows; ++r) {
        auto& rc = row_cols[r];
        std::sort(rc.begin(), rc.end());
        rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
        pat.row_ptr[r + 1] = pat.row_ptr[r] + static_cast<int>(rc.size());
    }
    pat.col_idx.reserve(pat.row_ptr.back());
    for (auto& rc : row_cols) {
        pat.col_idx.insert(pat.col_idx.end(), rc.begin(), rc.end());
    }

    pat.cell_scatter.resize(mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& ri = rows.cell_dofs(t);
        const auto& cj = cols.cell_dofs(t);
        auto& scatter = pat.cell_scatter[t];
        scatter.reserve(ri.size() * cj.size());
        for (int gi : ri) {
            const int lo = pat.row_ptr[gi], hi = pat.row_ptr[gi + 1];
            for (int gj : cj) {
                auto it = std::lower_bound(pat.col_idx.begin() + lo,
                                           pat.col_idx.begin() + hi, gj);
                scatter.push_back(static_cast<int>(it - pat.col_idx.begin()));
            }
        }
    }
    return pat;
}

namespace {

std::vector<BasisEval> tabulate(FeKind kind, const QuadratureRule& rule) {
    std::vector<BasisEval> at;
    at.reserve(rule.points.size());
    for (const auto& pt : rule.points) at.push_back(reference_basis(kind, pt));
    return at;
}

Point physical_point(const TriMesh& mesh, int t, const std::array<double, 3>& l) {
    const auto& tri = mesh.triangle(t);
    const Point& a = mesh.vertex(tri[0]);
    const Point& b = mesh.vertex(tri[1]);
    const Point& c = mesh.vertex(tri[2]);
    return {l[0] * a.x + l[1] * b.x + l[2] * c.x,
            l[0] * a.y + l[1] * b.y + l[2] * c.y};
}

// physical gradient of tabulated basis function i at one point
inline std::array<double, 2> phys_grad(const AffineMap& map,
                                       const BasisEval& basis, int i) {
    return {map.Binvt[0][0] * basis.grad[i][0] + map.Binvt[0][1] * basis.grad[i][1],
            map.Binvt[1][0] * basis.grad[i][0] + map.Binvt[1][1] * basis.grad[i][1]};
}

}  // namespace

CsrMatrix mass_matrix(const FeSpace& space, const SparsityPattern& pattern,
                      int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const auto basis = tabulate(space.kind(), rule);
    const int d = space.dofs_per_cell();
    std::vector<double> values(pattern.col_idx.size(), 0.0);
    std::vector<double> local(d * d);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double scale = 0.5 * mesh.map(t).det;
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * scale;
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    local[i * d + j] += w * basis[q].value[i] * basis[q].value[j];
                }
            }
        }
        const auto& scatter = pattern.cell_scatter[t];
        for (int k = 0; k < d * d; ++k) values[scatter[k]] += local[k];
    }
    return pattern.matrix_with(std::move(values));
}

CsrMatrix stiffness_matrix(const FeSpace& space, const SparsityPattern& pattern,
                           int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const auto basis = tabulate(space.kind(), rule);
    const int d = space.dofs_per_cell();
    std::vector<double> values(pattern.col_idx.size(), 0.0);
    std::vector<double> local(d * d);
    std::vector<std::array<double, 2>> grads(d);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const AffineMap& map = mesh.map(t);
        const double scale = 0.5 * map.det;
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * scale;
            for (int i = 0; i < d; ++i) grads[i] = phys_grad(map, basis[q], i);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    local[i * d + j] += w * (grads[i][0] * grads[j][0] +
                                             grads[i][1] * grads[j][1]);
                }
            }
        }
        const auto& scatter = pattern.cell_scatter[t];
        for (int k = 0; k < d * d; ++k) values[scatter[k]] += local[k];
    }
    return pattern.matrix_with(std::move(values));
}

CsrMatrix gradient_coupling(const FeSpace& vspace, const FeSpace& pspace,
                            int axis, const SparsityPattern& pattern) {
    if (axis != 0 && axis != 1) {
        throw std::invalid_argument("gradient_coupling: axis must be 0 or 1");
    }
    const TriMesh& mesh = vspace.mesh();
    const QuadratureRule& rule = quadrature_rule(kVelocityQuadDegree);
    const auto vbasis = tabulate(vspace.kind(), rule);
    const auto pbasis = tabulate(pspace.kind(), rule);
    const int dv = vspace.dofs_per_cell();
    const int dp = pspace.dofs_per_cell();
    std::vector<double> values(pattern.col_idx.size(), 0.0);
    std::vector<double> local(dv * dp);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const AffineMap& map = mesh.map(t);
        const double scale = 0.5 * map.det;
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * scale;
            for (int j = 0; j < dp; ++j) {
                const auto gq = phys_grad(map, pbasis[q], j);
                const double gj = gq[axis];
                for (int i = 0; i < dv; ++i) {
                    local[i * dp + j] += w * gj * vbasis[q].value[i];
                }
            }
        }
        const auto& scatter = pattern.cell_scatter[t];
        for (int k = 0; k < dv * dp; ++k) values[scatter[k]] += local[k];
    }
    return pattern.matrix_with(std::move(values));
}

CsrMatrix graddiv_block(const FeSpace& vspace, int axis_row, int axis_col,
                        const SparsityPattern& pattern) {
    const TriMesh& mesh = vspace.mesh();
    const QuadratureRule& rule = quadrature_rule(kVelocityQuadDegree);
    const auto basis = tabulate(vspace.kind(), rule);
    const int d = vspace.dofs_per_cell();
    std::vector<double> values(pattern.col_idx.size(), 0.0);
    std::vector<double> local(d * d);
    std::vector<std::array<double, 2>> grads(d);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const AffineMap& map = mesh.map(t);
        const double scale = 0.5 * map.det;
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * scale;
            for (int i = 0; i < d; ++i) grads[i] = phys_grad(map, basis[q], i);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    local[i * d + j] += w * grads[i][axis_row] * grads[j][axis_col];
                }
            }
        }
        const auto& scatter = pattern.cell_scatter[t];
        for (int k = 0; k < d * d; ++k) values[scatter[k]] += local[k];
    }
    return pattern.matrix_with(std::move(values));
}

OperatorSet assemble_operator_set(const FeSpace& vspace, const FeSpace& pspace) {
    if (&vspace.mesh() != &pspace.mesh()) {
        throw std::invalid_argument("assemble_operator_set: mesh mismatch");
    }
    OperatorSet ops;
    ops.vspace = &vspace;
    ops.pspace = &pspace;
    ops.pat_v = build_pattern(vspace, vspace);
    ops.pat_p = build_pattern(pspace, pspace);
    ops.pat_vp = build_pattern(vspace, pspace);
    ops.M_v = mass_matrix(vspace, ops.pat_v, kVelocityQuadDegree);
    ops.K_v = stiffness_matrix(vspace, ops.pat_v, kVelocityQuadDegree);
    ops.M_p = mass_matrix(pspace, ops.pat_p, kPressureQuadDegree);
    ops.K_p = stiffness_matrix(pspace, ops.pat_p, kPressureQuadDegree);
    ops.G_x = gradient_coupling(vspace, pspace, 0, ops.pat_vp);
    ops.G_y = gradient_coupling(vspace, pspace, 1, ops.pat_vp);
    ops.D_x = ops.G_x.transposed();
    ops.D_y = ops.G_y.transposed();
    ops.GD_xx = graddiv_block(vspace, 0, 0, ops.pat_v);
    ops.GD_xy = graddiv_block(vspace, 0, 1, ops.pat_v);
    ops.GD_yy = graddiv_block(vspace, 1, 1, ops.pat_v);
    Vector ones(pspace.n_dofs(), 1.0);
    ops.mass_vector_p = ops.M_p.multiply(ones);
    return ops;
}

ConvectionAssembler::ConvectionAssembler(const FeSpace& vspace,
                                         const SparsityPattern& pattern)
    : vspace_(&vspace),
      pattern_(&pattern),
      rule_(&quadrature_rule(kVelocityQuadDegree)) {
    basis_ = tabulate(vspace.kind(), *rule_);
}

void ConvectionAssembler::fill(const Field& w1, const Field& w2,
                               std::vector<double>& values) const {
    const FeSpace& space = *vspace_;
    if (w1.space != &space || w2.space != &space) {
        throw std::invalid_argument("convection: w not in the velocity space");
    }
    const TriMesh& mesh = space.mesh();
    const int d = space.dofs_per_cell();
    values.assign(pattern_->col_idx.size(), 0.0);
    std::vector<double> local(d * d);
    std::vector<std::array<double, 2>> grads(d);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const AffineMap& map = mesh.map(t);
        const double scale = 0.5 * map.det;
        const auto& dofs = space.cell_dofs(t);
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < rule_->points.size(); ++q) {
            const double w = rule_->weights[q] * scale;
            double wx = 0.0, wy = 0.0;
            for (int i = 0; i < d; ++i) {
                wx += w1.values[dofs[i]] * basis_[q].value[i];
                wy += w2.values[dofs[i]] * basis_[q].value[i];
            }
            for (int i = 0; i < d; ++i) grads[i] = phys_grad(map, basis_[q], i);
            // b_ij = (w . grad phi_j) phi_i; antisymmetrized below
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    local[i * d + j] += w * (wx * grads[j][0] + wy * grads[j][1]) *
                                        basis_[q].value[i];
                }
            }
        }
        const auto& scatter = pattern_->cell_scatter[t];
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                values[scatter[i * d + j]] +=
                    0.5 * (local[i * d + j] - local[j * d + i]);
            }
        }
    }
}

CsrMatrix convection_matrix(const FeSpace& vspace, const Field& w1,
                            const Field& w2) {
    SparsityPattern pattern = build_pattern(vspace, vspace);
    ConvectionAssembler assembler(vspace, pattern);
    std::vector<double> values;
    assembler.fill(w1, w2, values);
    return pattern.matrix_with(std::move(values));
}

std::pair<Vector, Vector> forcing_vector(const FeSpace& vspace,
                                         const VectorFn2& f, double t) {
    const TriMesh& mesh = vspace.mesh();
    const QuadratureRule& rule = quadrature_rule(kVelocityQuadDegree);
    const auto basis = tabulate(vspace.kind(), rule);
    const int d = vspace.dofs_per_cell();
    Vector b1(vspace.n_dofs(), 0.0), b2(vspace.n_dofs(), 0.0);
    for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
        const double scale = 0.5 * mesh.map(tri).det;
        const auto& dofs = vspace.cell_dofs(tri);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const Point p = physical_point(mesh, tri, rule.points[q]);
            const auto [f1, f2] = f(t, p.x, p.y);
            const double w = rule.weights[q] * scale;
            for (int i = 0; i < d; ++i) {
                b1[dofs[i]] += w * f1 * basis[q].value[i];
                b2[dofs[i]] += w * f2 * basis[q].value[i];
            }
        }
    }
    return {std::move(b1), std::move(b2)};
}

void apply_dirichlet_matrix(CsrMatrix& A, const std::vector<int>& bdofs) {
    std::vector<bool> mask(A.n_cols(), false);
    for (int d : bdofs) mask[d] = true;
    const auto& row_ptr = A.row_ptr();
    const auto& col_idx = A.col_idx();
    auto& values = A.values();
    for (int r = 0; r < A.n_rows(); ++r) {
        const bool brow = r < A.n_cols() && mask[r];
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const int c = col_idx[k];
            if (brow || mask[c]) values[k] = (brow && c == r) ? 1.0 : 0.0;
        }
    }
}

void apply_dirichlet_rhs(std::span<double> b, const std::vector<int>& bdofs) {
    for (int d : bdofs) b[d] = 0.0;
}

void apply_dirichlet(CsrMatrix& A, std::span<double> b,
                     const std::vector<int>& bdofs) {
    apply_dirichlet_matrix(A, bdofs);
    apply_dirichlet_rhs(b, bdofs);
}

}  // namespace projfem
