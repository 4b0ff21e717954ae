#include "projfem/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace projfem {

std::string to_string(FeKind kind) {
    switch (kind) {
        case FeKind::P1: return "P1";
        case FeKind::P2: return "P2";
        case FeKind::P1Bubble: return "P1b";
    }
    return "P1";
}

int dofs_per_cell(FeKind kind) {
    switch (kind) {
        case FeKind::P1: return 3;
        case FeKind::P2: return 6;
        case FeKind::P1Bubble: return 4;
    }
    return 3;
}

namespace {

// reference gradients of the barycentric coordinates
constexpr std::array<std::array<double, 2>, 3> kGradLambda = {
    {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};

}  // namespace

BasisEval reference_basis(FeKind kind, const std::array<double, 3>& l) {
    BasisEval out;
    switch (kind) {
        case FeKind::P1:
            out.count = 3;
            for (int i = 0; i < 3; ++i) {
                out.value[i] = l[i];
                out.grad[i] = kGradLambda[i];
            }
            break;
        case FeKind::P2:
            out.count = 6;
            for (int i = 0; i < 3; ++i) {
                out.value[i] = l[i] * (2.0 * l[i] - 1.0);
                out.grad[i] = {(4.0 * l[i] - 1.0) * kGradLambda[i][0],
                               (4.0 * l[i] - 1.0) * kGradLambda[i][1]};
            }
            for (int k = 0; k < 3; ++k) {
                int a = (k + 1) % 3, b = (k + 2) % 3;  // edge k opposite vertex k
                out.value[3 + k] = 4.0 * l[a] * l[b];
                out.grad[3 + k] = {
                    4.0 * (l[b] * kGradLambda[a][0] + l[a] * kGradLambda[b][0]),
                    4.0 * (l[b] * kGradLambda[a][1] + l[a] * kGradLambda[b][1])};
            }
            break;
        case FeKind::P1Bubble:
            out.count = 4;
            for (int i = 0; i < 3; ++i) {
                out.value[i] = l[i];
                out.grad[i] = kGradLambda[i];
            }
            out.value[3] = 27.0 * l[0] * l[1] * l[2];
            for (int c = 0; c < 2; ++c) {
                out.grad[3][c] = 27.0 * (l[1] * l[2] * kGradLambda[0][c] +
                                         l[0] * l[2] * kGradLambda[1][c] +
                                         l[0] * l[1] * kGradLambda[2][c]);
            }
            break;
    }
    return out;
}

namespace {

QuadratureRule centroid_rule() {
    return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, {1.0}, 1};
}

QuadratureRule three_point_rule() {
    QuadratureRule r;
    r.degree = 2;
    const double a = 2.0 / 3.0, b = 1.0 / 6.0, w = 1.0 / 3.0;
    r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
    r.weights = {w, w, w};
    return r;
}

void push_sym3(QuadratureRule& r, double a, double b, double w) {
    r.points.push_back({a, b, b});
    r.points.push_back({b, a, b});
    r.points.push_back({b, b, a});
    r.weights.insert(r.weights.end(), 3, w);
}

void push_sym6(QuadratureRule& r, double a, double b, double c, double w) {
    r.points.push_back({a, b, c});
    r.points.push_back({a, c, b});
    r.points.push_back({b, a, c});
    r.points.push_back({b, c, a});
    r.points.push_back({c, a, b});
    r.points.push_back({c, b, a});
    r.weights.insert(r.weights.end(), 6, w);
}

// Dunavant order 4, six points, all weights positive
QuadratureRule six_point_rule() {
    QuadratureRule r;
    r.degree = 4;
    push_sym3(r, 0.108103018168070, 0.445948490915965, 0.223381589678011);
    push_sym3(r, 0.816847572980459, 0.091576213509771, 0.109951743655322);
    return r;
}

// Radon order 5, seven points; coordinates in closed form via sqrt(15)
QuadratureRule seven_point_rule() {
    QuadratureRule r;
    r.degree = 5;
    const double s = std::sqrt(15.0);
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(9.0 / 40.0);
    const double b1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
    push_sym3(r, 1.0 - 2.0 * b1, b1, w1);
    const double b2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
    push_sym3(r, 1.0 - 2.0 * b2, b2, w2);
    return r;
}

// Dunavant order 6, twelve points
QuadratureRule twelve_point_rule() {
    QuadratureRule r;
    r.degree = 6;
    push_sym3(r, 0.873821971016996, 0.063089014491502, 0.050844906370207);
    push_sym3(r, 0.501426509658179, 0.249286745170910, 0.116786275726379);
    push_sym6(r, 0.636502499121399, 0.310352451033785, 0.053145049844816,
              0.082851075618374);
    return r;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
    if (degree < 1 || degree > 6) {
        throw std::invalid_argument("quadrature_rule: degree must be in 1..6");
    }
    static const QuadratureRule deg1 = centroid_rule();
    static const QuadratureRule deg2 = three_point_rule();
    static const QuadratureRule deg4 = six_point_rule();
    static const QuadratureRule deg5 = seven_point_rule();
    static const QuadratureRule deg6 = twelve_point_rule();
    switch (degree) {
        case 1: return deg1;
        case 2: return deg2;
        case 3:
        case 4: return deg4;
        case 5: return deg5;
        default: return deg6;
    }
}

FeSpace::FeSpace(const TriMesh& mesh, FeKind kind)
    : mesh_(&mesh), kind_(kind), dofs_per_cell_(projfem::dofs_per_cell(kind)) {
    const int nv = mesh.n_vertices();
    switch (kind) {
        case FeKind::P1: n_dofs_ = nv; break;
        case FeKind::P2: n_dofs_ = nv + mesh.n_edges(); break;
        case FeKind::P1Bubble: n_dofs_ = nv + mesh.n_triangles(); break;
    }
    cell_dofs_.resize(mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        auto& dofs = cell_dofs_[t];
        dofs.assign(tri.begin(), tri.end());
        if (kind == FeKind::P2) {
            for (int k = 0; k < 3; ++k) {
                dofs.push_back(nv + mesh.triangle_edges(t)[k]);
            }
        } else if (kind == FeKind::P1Bubble) {
            dofs.push_back(nv + t);
        }
    }
    boundary_mask_.assign(n_dofs_, false);
    for (int v = 0; v < nv; ++v) {
        if (mesh.vertex_on_boundary(v)) boundary_mask_[v] = true;
    }
    if (kind == FeKind::P2) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (mesh.edge_on_boundary(e)) boundary_mask_[nv + e] = true;
        }
    }
    // bubble dofs are interior by construction
    for (int d = 0; d < n_dofs_; ++d) {
        if (boundary_mask_[d]) boundary_dofs_.push_back(d);
    }
}

Point FeSpace::dof_point(int dof) const {
    const int nv = mesh_->n_vertices();
    if (dof < nv) return mesh_->vertex(dof);
    if (kind_ == FeKind::P2) return mesh_->edge_midpoint(dof - nv);
    const auto& tri = mesh_->triangle(dof - nv);
    const Point& a = mesh_->vertex(tri[0]);
    const Point& b = mesh_->vertex(tri[1]);
    const Point& c = mesh_->vertex(tri[2]);
    return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

Field interpolate(const FeSpace& space, const ScalarFn& f) {
    Field field(space);
    const int nv = space.mesh().n_vertices();
    const int n_nodal = space.kind() == FeKind::P1Bubble ? nv : space.n_dofs();
    for (int d = 0; d < n_nodal; ++d) {
        Point p = space.dof_point(d);
        field.values[d] = f(p.x, p.y);
    }
    return field;
}

FieldValue eval_field(const Field& field, int triangle,
                      const std::array<double, 3>& lambda) {
    const FeSpace& space = *field.space;
    const TriMesh& mesh = space.mesh();
    if (triangle < 0 || triangle >= mesh.n_triangles()) {
        throw std::out_of_range("eval_field: triangle index");
    }
    const BasisEval basis = reference_basis(space.kind(), lambda);
    const auto& dofs = space.cell_dofs(triangle);
    const auto& Binvt = mesh.map(triangle).Binvt;
    FieldValue out;
    std::array<double, 2> gref{};
    for (int i = 0; i < basis.count; ++i) {
        const double c = field.values[dofs[i]];
        out.value += c * basis.value[i];
        gref[0] += c * basis.grad[i][0];
        gref[1] += c * basis.grad[i][1];
    }
    out.gradient = {Binvt[0][0] * gref[0] + Binvt[0][1] * gref[1],
                    Binvt[1][0] * gref[0] + Binvt[1][1] * gref[1]};
    return out;
}

}  // namespace projfem
