#ifndef PROJFEM_FEM_HPP
#define PROJFEM_FEM_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "projfem/mesh.hpp"
#include "projfem/sparse.hpp"

namespace projfem {

enum class FeKind { P1, P2, P1Bubble };

std::string to_string(FeKind kind);
int dofs_per_cell(FeKind kind);

/// Basis values and reference gradients for one element kind at one
/// barycentric point. Gradients are with respect to reference (x^, y^).
struct BasisEval {
    std::array<double, 6> value{};
    std::array<std::array<double, 2>, 6> grad{};
    int count = 0;
};

/// Lagrange bases on the reference triangle; the bubble is 27 l0 l1 l2
/// (value 1 at the centroid) added hierarchically on top of P1.
BasisEval reference_basis(FeKind kind, const std::array<double, 3>& lambda);

/// Quadrature on the reference triangle. Weights are positive and sum to
/// one; integrals carry the factor area(T) = det/2 at the use site.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;  // barycentric
    std::vector<double> weights;
    int degree = 0;  // exactness
};

/// Smallest stocked rule with exactness >= degree (degree <= 6).
const QuadratureRule& quadrature_rule(int degree);

/// Scalar FE space over a mesh: global dof numbering per cell plus the
/// boundary dof list. Immutable after construction.
class FeSpace {
public:
    FeSpace(const TriMesh& mesh, FeKind kind);

    const TriMesh& mesh() const { return *mesh_; }
    FeKind kind() const { return kind_; }
    int n_dofs() const { return n_dofs_; }
    int dofs_per_cell() const { return dofs_per_cell_; }
    const std::vector<int>& cell_dofs(int t) const { return cell_dofs_[t]; }
    const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
    bool dof_on_boundary(int dof) const { return boundary_mask_[dof]; }

    /// Physical node position of a dof; bubble dofs sit at the centroid.
    Point dof_point(int dof) const;

private:
    const TriMesh* mesh_;
    FeKind kind_;
    int n_dofs_ = 0;
    int dofs_per_cell_ = 0;
    std::vector<std::vector<int>> cell_dofs_;
    std::vector<int> boundary_dofs_;
    std::vector<bool> boundary_mask_;
};

/// Coefficient vector over an FeSpace.
struct Field {
    const FeSpace* space = nullptr;
    Vector values;

    Field() = default;
    explicit Field(const FeSpace& s) : space(&s), values(s.n_dofs(), 0.0) {}
};

using ScalarFn = std::function<double(double, double)>;

/// Nodal interpolation: f at vertex/midpoint nodes, bubble dofs zero.
/// Sets initial and exact fields only; this is not an analysis operator.
Field interpolate(const FeSpace& space, const ScalarFn& f);

struct FieldValue {
    double value = 0.0;
    std::array<double, 2> gradient{};  // physical
};

FieldValue eval_field(const Field& field, int triangle,
                      const std::array<double, 3>& lambda);

}  // namespace projfem

#endif
