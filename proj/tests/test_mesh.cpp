#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "projfem/mesh.hpp"

using namespace projfem;

TEST_CASE("structured mesh counts follow the closed formulas") {
    // V = (n+1)^2, T = 2n^2, E = 3n^2 + 2n (Euler: V - E + T = 1)
    struct Case {
        int n;
        int vertices, triangles, edges;
    };
    const Case cases[] = {{1, 4, 2, 5}, {2, 9, 8, 16}, {70, 5041, 9800, 14840}};
    for (const Case& c : cases) {
        CAPTURE(c.n);
        TriMesh mesh = TriMesh::structured(c.n);
        CHECK(mesh.n_vertices() == c.vertices);
        CHECK(mesh.n_triangles() == c.triangles);
        CHECK(mesh.n_edges() == c.edges);
        CHECK(mesh.n_vertices() - mesh.n_edges() + mesh.n_triangles() == 1);
    }
    CHECK(TriMesh::structured(70).h() == doctest::Approx(0.0142857).epsilon(1e-4));
}

TEST_CASE("n = 0 is rejected") {
    CHECK_THROWS_AS(TriMesh::structured(0), std::invalid_argument);
}

TEST_CASE("all triangles are CCW with positive area, summing to 1") {
    for (int n : {1, 2, 3, 7, 16}) {
        for (Diagonal d : {Diagonal::Right, Diagonal::Left, Diagonal::Alternating}) {
            CAPTURE(n);
            CAPTURE(to_string(d));
            TriMesh mesh = TriMesh::structured(n, d);
            double total = 0.0;
            for (int t = 0; t < mesh.n_triangles(); ++t) {
                CHECK(mesh.map(t).det > 0.0);
                total += mesh.map(t).area;
            }
            CHECK(std::abs(total - 1.0) <= 1e-13);
        }
    }
}

TEST_CASE("affine map of the unit right triangle is the identity") {
    // left diagonal at n = 1: triangle 0 is (0,0), (1,0), (0,1)
    TriMesh mesh = TriMesh::structured(1, Diagonal::Left);
    const AffineMap& m = mesh.map(0);
    CHECK(m.det == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.area == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.B[0][0] == 1.0);
    CHECK(m.B[0][1] == 0.0);
    CHECK(m.B[1][0] == 0.0);
    CHECK(m.B[1][1] == 1.0);
    CHECK(m.b[0] == 0.0);
    CHECK(m.b[1] == 0.0);
}

TEST_CASE("affine map determinants on the n = 2 mesh") {
    TriMesh mesh = TriMesh::structured(2);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        CHECK(mesh.map(t).det == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(mesh.map(t).area == doctest::Approx(0.125).epsilon(1e-14));
    }
}

TEST_CASE("edge-triangle incidence counting") {
    for (int n : {1, 2, 5, 12}) {
        TriMesh mesh = TriMesh::structured(n, Diagonal::Alternating);
        int boundary_edges = 0;
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (mesh.edge_on_boundary(e)) ++boundary_edges;
        }
        const int interior_edges = mesh.n_edges() - boundary_edges;
        CHECK(3 * mesh.n_triangles() == 2 * interior_edges + boundary_edges);
        CHECK(boundary_edges == 4 * n);
    }
}

TEST_CASE("boundary vertex flags match the coordinate rule, count 4n") {
    for (int n : {1, 3, 8}) {
        TriMesh mesh = TriMesh::structured(n);
        int count = 0;
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            const Point& p = mesh.vertex(v);
            const bool expected =
                p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
            CHECK(mesh.vertex_on_boundary(v) == expected);
            if (expected) ++count;
        }
        CHECK(count == 4 * n);
    }
}

TEST_CASE("each triangle_edges entry joins the opposite pair of vertices") {
    TriMesh mesh = TriMesh::structured(3, Diagonal::Left);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangle(t);
        for (int k = 0; k < 3; ++k) {
            const auto& e = mesh.edge(mesh.triangle_edges(t)[k]);
            const std::set<int> expect{tri[(k + 1) % 3], tri[(k + 2) % 3]};
            CHECK(expect == std::set<int>{e[0], e[1]});
        }
    }
}

TEST_CASE("barycentric coordinates invert the affine map") {
    TriMesh mesh = TriMesh::structured(4, Diagonal::Alternating);
    for (int t = 0; t < mesh.n_triangles(); t += 5) {
        const auto& tri = mesh.triangle(t);
        for (int v = 0; v < 3; ++v) {
            auto l = mesh.barycentric(t, mesh.vertex(tri[v]));
            for (int i = 0; i < 3; ++i) {
                CHECK(l[i] == doctest::Approx(i == v ? 1.0 : 0.0).epsilon(1e-12));
            }
        }
    }
}
