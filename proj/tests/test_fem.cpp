#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "projfem/fem.hpp"
#include "projfem/mesh.hpp"

using namespace projfem;

namespace {

// exact reference-triangle integral of l1^a l2^b l0^c:
// a! b! c! / (a + b + c + 2)! * 2 * area, area = 1/2
double monomial_integral(int a, int b, int c) {
    auto fact = [](int m) {
        double f = 1.0;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
}

double quad_monomial(const QuadratureRule& rule, int a, int b, int c) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        acc += rule.weights[q] * std::pow(l[1], a) * std::pow(l[2], b) *
               std::pow(l[0], c);
    }
    return 0.5 * acc;  // weights sum to 1, reference area is 1/2
}

}  // namespace

TEST_CASE("quadrature rules: positive weights summing to 1") {
    for (int degree = 1; degree <= 6; ++degree) {
        const QuadratureRule& rule = quadrature_rule(degree);
        CHECK(rule.degree >= degree);
        double sum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-13);
    }
    CHECK_THROWS_AS(quadrature_rule(7), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_rule(0), std::invalid_argument);
}

TEST_CASE("quadrature exactness against the factorial formula") {
    for (int degree = 1; degree <= 6; ++degree) {
        const QuadratureRule& rule = quadrature_rule(degree);
        for (int total = 0; total <= rule.degree; ++total) {
            for (int a = 0; a <= total; ++a) {
                for (int b = 0; a + b <= total; ++b) {
                    const int c = total - a - b;
                    const double exact = monomial_integral(a, b, c);
                    CAPTURE(degree);
                    CAPTURE(a);
                    CAPTURE(b);
                    CHECK(quad_monomial(rule, a, b, c) ==
                          doctest::Approx(exact).epsilon(5e-13));
                }
            }
        }
    }
}

TEST_CASE("named quadrature spot values") {
    // area of the reference triangle
    CHECK(quad_monomial(quadrature_rule(1), 0, 0, 0) ==
          doctest::Approx(0.5).epsilon(1e-15));
    // int l1^2 = 1/12
    CHECK(quad_monomial(quadrature_rule(2), 2, 0, 0) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    // int l1^2 l2^2 = 1/180
    CHECK(quad_monomial(quadrature_rule(4), 2, 2, 0) ==
          doctest::Approx(1.0 / 180.0).epsilon(1e-12));
}

TEST_CASE("reference bases have the Kronecker property at their nodes") {
    auto p1 = reference_basis(FeKind::P1, {1.0, 0.0, 0.0});
    CHECK(p1.value[0] == doctest::Approx(1.0));
    CHECK(p1.value[1] == doctest::Approx(0.0));
    CHECK(p1.value[2] == doctest::Approx(0.0));

    // P2 midpoint node of edge 0 (between vertices 1 and 2)
    auto p2 = reference_basis(FeKind::P2, {0.0, 0.5, 0.5});
    for (int i = 0; i < 6; ++i) {
        CHECK(p2.value[i] == doctest::Approx(i == 3 ? 1.0 : 0.0).epsilon(1e-14));
    }

    // bubble is 1 at the centroid and vanishes on the edges
    auto pb = reference_basis(FeKind::P1Bubble,
                              {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    CHECK(pb.value[3] == doctest::Approx(1.0).epsilon(1e-14));
    auto edge = reference_basis(FeKind::P1Bubble, {0.0, 0.3, 0.7});
    CHECK(edge.value[3] == doctest::Approx(0.0));
}

TEST_CASE("partition of unity at 50 random reference points") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double l1 = unif(rng), l2 = unif(rng);
        if (l1 + l2 > 1.0) {
            l1 = 1.0 - l1;
            l2 = 1.0 - l2;
        }
        const std::array<double, 3> l{1.0 - l1 - l2, l1, l2};
        for (FeKind kind : {FeKind::P1, FeKind::P2}) {
            const auto basis = reference_basis(kind, l);
            double sum = 0.0;
            for (int i = 0; i < basis.count; ++i) sum += basis.value[i];
            CHECK(std::abs(sum - 1.0) <= 1e-14);
        }
    }
}

TEST_CASE("reference gradients match central finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.05, 0.45);
    const double h = 1e-6;
    for (FeKind kind : {FeKind::P1, FeKind::P2, FeKind::P1Bubble}) {
        for (int trial = 0; trial < 20; ++trial) {
            const double x = unif(rng), y = unif(rng);
            const std::array<double, 3> l{1.0 - x - y, x, y};
            const auto basis = reference_basis(kind, l);
            const auto xp = reference_basis(kind, {1.0 - (x + h) - y, x + h, y});
            const auto xm = reference_basis(kind, {1.0 - (x - h) - y, x - h, y});
            const auto yp = reference_basis(kind, {1.0 - x - (y + h), x, y + h});
            const auto ym = reference_basis(kind, {1.0 - x - (y - h), x, y - h});
            for (int i = 0; i < basis.count; ++i) {
                const double gx = (xp.value[i] - xm.value[i]) / (2.0 * h);
                const double gy = (yp.value[i] - ym.value[i]) / (2.0 * h);
                CHECK(std::abs(basis.grad[i][0] - gx) <= 1e-6);
                CHECK(std::abs(basis.grad[i][1] - gy) <= 1e-6);
            }
        }
    }
}

TEST_CASE("dof counts per space") {
    TriMesh mesh = TriMesh::structured(3);
    FeSpace p1(mesh, FeKind::P1);
    FeSpace p2(mesh, FeKind::P2);
    FeSpace p1b(mesh, FeKind::P1Bubble);
    CHECK(p1.n_dofs() == mesh.n_vertices());
    CHECK(p2.n_dofs() == mesh.n_vertices() + mesh.n_edges());
    CHECK(p1b.n_dofs() == mesh.n_vertices() + mesh.n_triangles());

    // bubble dofs are never boundary dofs
    for (int d : p1b.boundary_dofs()) CHECK(d < mesh.n_vertices());
    // boundary dof lists are sorted
    for (const FeSpace* s : {&p1, &p2, &p1b}) {
        const auto& bd = s->boundary_dofs();
        for (std::size_t i = 1; i < bd.size(); ++i) CHECK(bd[i - 1] < bd[i]);
    }
}

TEST_CASE("interpolation reproduces polynomials the space contains") {
    TriMesh mesh = TriMesh::structured(4, Diagonal::Alternating);
    FeSpace p1(mesh, FeKind::P1);
    FeSpace p2(mesh, FeKind::P2);
    const QuadratureRule& rule = quadrature_rule(4);

    auto max_err = [&](const FeSpace& space, const ScalarFn& f,
                       auto grad_exact) {
        Field field = interpolate(space, f);
        double worst = 0.0, worst_grad = 0.0;
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            for (const auto& l : rule.points) {
                const auto& tri = mesh.triangle(t);
                const double x = l[0] * mesh.vertex(tri[0]).x +
                                 l[1] * mesh.vertex(tri[1]).x +
                                 l[2] * mesh.vertex(tri[2]).x;
                const double y = l[0] * mesh.vertex(tri[0]).y +
                                 l[1] * mesh.vertex(tri[1]).y +
                                 l[2] * mesh.vertex(tri[2]).y;
                const FieldValue v = eval_field(field, t, l);
                worst = std::max(worst, std::abs(v.value - f(x, y)));
                const auto g = grad_exact(x, y);
                worst_grad = std::max({worst_grad, std::abs(v.gradient[0] - g[0]),
                                       std::abs(v.gradient[1] - g[1])});
            }
        }
        return std::pair{worst, worst_grad};
    };

    auto [e_const, g_const] = max_err(
        p1, [](double, double) { return 3.25; },
        [](double, double) { return std::array<double, 2>{0.0, 0.0}; });
    CHECK(e_const <= 1e-13);
    CHECK(g_const <= 1e-13);

    auto [e_lin, g_lin] = max_err(
        p1, [](double x, double y) { return 2.0 * x - 0.5 * y + 1.0; },
        [](double, double) { return std::array<double, 2>{2.0, -0.5}; });
    CHECK(e_lin <= 1e-13);
    CHECK(g_lin <= 1e-13);

    auto [e_quad, g_quad] = max_err(
        p2, [](double x, double y) { return x * x + 0.5 * x * y - y; },
        [](double x, double y) {
            return std::array<double, 2>{2.0 * x + 0.5 * y, 0.5 * x - 1.0};
        });
    CHECK(e_quad <= 1e-13);
    CHECK(g_quad <= 1e-13);
}

TEST_CASE("interpolating x on P2 is exact at quadrature points") {
    TriMesh mesh = TriMesh::structured(3);
    FeSpace p2(mesh, FeKind::P2);
    Field field = interpolate(p2, [](double x, double) { return x; });
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const FieldValue v =
            eval_field(field, t, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        CHECK(v.gradient[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(v.gradient[1] == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("interpolated manufactured pressure hits 4 pi at (1/4, 1/4)") {
    TriMesh mesh = TriMesh::structured(4);
    FeSpace p1(mesh, FeKind::P1);
    Field p = interpolate(p1, [](double x, double y) {
        return 2.0 * std::numbers::pi *
               (std::sin(2.0 * std::numbers::pi * x) +
                std::sin(2.0 * std::numbers::pi * y));
    });
    // vertex (0.25, 0.25) has dof index j*(n+1)+i = 1*5+1
    CHECK(p.values[6] ==
          doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("interpolated x^2 on P2 has gradient (2x, 0) at centroids") {
    TriMesh mesh = TriMesh::structured(4);
    FeSpace p2(mesh, FeKind::P2);
    Field field = interpolate(p2, [](double x, double) { return x * x; });
    const std::array<double, 3> centroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        const double cx = (mesh.vertex(tri[0]).x + mesh.vertex(tri[1]).x +
                           mesh.vertex(tri[2]).x) /
                          3.0;
        const FieldValue v = eval_field(field, t, centroid);
        CHECK(v.gradient[0] == doctest::Approx(2.0 * cx).epsilon(1e-12));
        CHECK(std::abs(v.gradient[1]) <= 1e-12);
    }
}
