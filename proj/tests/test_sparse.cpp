#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "projfem/assemble.hpp"
#include "projfem/fem.hpp"
#include "projfem/mesh.hpp"
#include "projfem/sparse.hpp"
#include "support/dense.hpp"

using namespace projfem;
using namespace projfem::testing;

namespace {

CsrMatrix from_dense(const DenseMatrix& d) {
    CooBuilder builder(d.n_rows, d.n_cols);
    for (int i = 0; i < d.n_rows; ++i) {
        for (int j = 0; j < d.n_cols; ++j) {
            if (d.at(i, j) != 0.0) builder.add(i, j, d.at(i, j));
        }
    }
    return builder.build();
}

}  // namespace

TEST_CASE("spmv basics") {
    // identity
    CsrMatrix eye(2, 2, {0, 1, 2}, {0, 1}, {1.0, 1.0});
    Vector x{3.0, -4.0};
    CHECK(eye.multiply(x) == x);

    // empty matrix maps to zero
    CsrMatrix zero(2, 2, {0, 0, 0}, {}, {});
    CHECK(zero.multiply(x) == Vector{0.0, 0.0});

    // [[1,2],[3,4]] (1,1) = (3,7)
    CsrMatrix m(2, 2, {0, 2, 4}, {0, 1, 0, 1}, {1.0, 2.0, 3.0, 4.0});
    CHECK(m.multiply(Vector{1.0, 1.0}) == Vector{3.0, 7.0});

    CHECK_THROWS_AS(m.multiply(Vector{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("CSR structure validation") {
    CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}), std::invalid_argument);
    // columns must be strictly increasing within a row
    CHECK_THROWS_AS(CsrMatrix(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CsrMatrix(1, 2, {0, 1}, {5}, {1.0}), std::invalid_argument);
}

TEST_CASE("CooBuilder sums duplicates and sorts columns") {
    CooBuilder b(2, 2);
    b.add(0, 1, 2.0);
    b.add(0, 0, 1.0);
    b.add(0, 1, 3.0);
    b.add(1, 1, 4.0);
    CsrMatrix m = b.build();
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 5.0);
    CHECK(m.at(1, 0) == 0.0);
    CHECK(m.at(1, 1) == 4.0);
}

TEST_CASE("transpose round-trips") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    DenseMatrix d(7, 5);
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 5; ++j) {
            if ((i + 2 * j) % 3 == 0) d.at(i, j) = unif(rng);
        }
    }
    CsrMatrix m = from_dense(d);
    CsrMatrix mt = m.transposed();
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 5; ++j) CHECK(mt.at(j, i) == m.at(i, j));
    }
    CsrMatrix mtt = mt.transposed();
    CHECK(mtt.row_ptr() == m.row_ptr());
    CHECK(mtt.col_idx() == m.col_idx());
    CHECK(mtt.values() == m.values());
}

TEST_CASE("cg solves trivial systems immediately") {
    CsrMatrix eye(3, 3, {0, 1, 2, 3}, {0, 1, 2}, {1.0, 1.0, 1.0});
    Vector b{1.0, -2.0, 5.0};
    Vector x(3, 0.0);
    SolveReport r = cg_solve(eye, b, x, 1e-12, 10);
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]));

    CsrMatrix diag(2, 2, {0, 1, 2}, {0, 1}, {1.0, 4.0});
    Vector b2{1.0, 4.0};
    Vector x2(2, 0.0);
    r = cg_solve(diag, b2, x2, 1e-14, 10);
    CHECK(r.converged);
    CHECK(x2[0] == doctest::Approx(1.0));
    CHECK(x2[1] == doctest::Approx(1.0));
}

TEST_CASE("cg reaches 1e-12 on random SPD systems within the exact bound") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int n = 50;
    DenseMatrix b(n, n);
    for (auto& v : b.a) v = unif(rng);
    DenseMatrix spd(n, n);
    // A = B'B + I is SPD
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = i == j ? 1.0 : 0.0;
            for (int k = 0; k < n; ++k) acc += b.at(k, i) * b.at(k, j);
            spd.at(i, j) = acc;
        }
    }
    CsrMatrix A = from_dense(spd);
    Vector rhs(n);
    for (double& v : rhs) v = unif(rng);
    Vector x(n, 0.0);
    SolveReport r = cg_solve(A, rhs, x, 1e-12, 3 * n);
    CHECK(r.converged);
    CHECK(r.iterations <= 3 * n);
    Vector check = A.multiply(x);
    for (int i = 0; i < n; ++i) check[i] -= rhs[i];
    CHECK(norm2(check) <= 1e-10 * norm2(rhs));
}

TEST_CASE("mean-zero projection is idempotent and hits m'x = 0") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    Vector m(40), x(40);
    for (double& v : m) v = unif(rng);
    for (double& v : x) v = unif(rng) - 1.0;
    project_mean_zero(x, m);
    CHECK(std::abs(dot(m, x)) <= 1e-12 * norm2(x) * norm2(m));
    Vector once = x;
    project_mean_zero(x, m);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(x[i] - once[i]) <= 1e-15 * std::max(1.0, std::abs(once[i])));
    }
}

TEST_CASE("cg with nullspace matches the dense pseudo-inverse on Neumann K_p") {
    TriMesh mesh = TriMesh::structured(4);
    FeSpace pspace(mesh, FeKind::P1);
    SparsityPattern pat = build_pattern(pspace, pspace);
    CsrMatrix K = stiffness_matrix(pspace, pat, kPressureQuadDegree);
    CsrMatrix M = mass_matrix(pspace, pat, kPressureQuadDegree);
    Vector ones(pspace.n_dofs(), 1.0);
    Vector mass_vector = M.multiply(ones);

    // compatible rhs: K applied to something is orthogonal to constants
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector seed(pspace.n_dofs());
    for (double& v : seed) v = unif(rng);
    Vector b = K.multiply(seed);

    Vector x(pspace.n_dofs(), 0.0);
    NullspaceMeanZero nullspace{mass_vector};
    SolveReport r = cg_solve(K, b, x, 1e-13, 10 * pspace.n_dofs(), &nullspace);
    CHECK(r.converged);
    CHECK(std::abs(dot(mass_vector, x)) <= 1e-12 * std::max(1.0, norm2(x)));

    const std::vector<double> oracle =
        neumann_solve(from_csr(K), b, mass_vector);
    for (int i = 0; i < pspace.n_dofs(); ++i) {
        CHECK(x[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    }
}

TEST_CASE("bicgstab agrees with cg on an SPD system") {
    TriMesh mesh = TriMesh::structured(3);
    FeSpace space(mesh, FeKind::P1);
    SparsityPattern pat = build_pattern(space, space);
    CsrMatrix M = mass_matrix(space, pat, kPressureQuadDegree);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector b(space.n_dofs());
    for (double& v : b) v = unif(rng);
    Vector x_cg(space.n_dofs(), 0.0), x_bi(space.n_dofs(), 0.0);
    CHECK(cg_solve(M, b, x_cg, 1e-13, 1000).converged);
    CHECK(bicgstab_solve(M, b, x_bi, 1e-13, 1000).converged);
    for (int i = 0; i < space.n_dofs(); ++i) {
        CHECK(x_bi[i] == doctest::Approx(x_cg[i]).epsilon(1e-10));
    }
}

TEST_CASE("bicgstab matches back-substitution on an upper-triangular system") {
    // 3x3 upper triangular: solved by hand from the bottom up
    CsrMatrix U(3, 3, {0, 3, 5, 6}, {0, 1, 2, 1, 2, 2},
                {2.0, 1.0, -1.0, 3.0, 0.5, 4.0});
    const Vector b{3.0, 7.0, 8.0};
    // back-substitution oracle: x2 = 2, x1 = (7 - 0.5*2)/3 = 2, x0 = (3 - 2 + 2)/2
    Vector oracle(3);
    oracle[2] = b[2] / 4.0;
    oracle[1] = (b[1] - 0.5 * oracle[2]) / 3.0;
    oracle[0] = (b[0] - 1.0 * oracle[1] + 1.0 * oracle[2]) / 2.0;
    Vector x(3, 0.0);
    SolveReport r = bicgstab_solve(U, b, x, 1e-13, 100);
    CHECK(r.converged);
    for (int i = 0; i < 3; ++i) {
        CHECK(x[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
    }
}

TEST_CASE("bicgstab converges fast on a convection-dominated perturbation") {
    // regression baseline: I + N(w) on the n = 8 Taylor-Hood velocity space
    TriMesh mesh = TriMesh::structured(8);
    FeSpace vspace(mesh, FeKind::P2);
    Field w1 = interpolate(vspace, [](double x, double y) { return x * y; });
    Field w2 = interpolate(vspace, [](double x, double) { return 1.0 - x; });
    CsrMatrix N = convection_matrix(vspace, w1, w2);
    CooBuilder builder(vspace.n_dofs(), vspace.n_dofs());
    for (int r = 0; r < N.n_rows(); ++r) {
        builder.add(r, r, 1.0);
        for (int k = N.row_ptr()[r]; k < N.row_ptr()[r + 1]; ++k) {
            builder.add(r, N.col_idx()[k], N.values()[k]);
        }
    }
    CsrMatrix A = builder.build();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector b(vspace.n_dofs());
    for (double& v : b) v = unif(rng);
    Vector x(vspace.n_dofs(), 0.0);
    SolveReport r = bicgstab_solve(A, b, x, 1e-10, 1000);
    CHECK(r.converged);
    CHECK(r.iterations < 50);
}

TEST_CASE("zero rhs returns zero immediately") {
    CsrMatrix eye(2, 2, {0, 1, 2}, {0, 1}, {1.0, 1.0});
    Vector b{0.0, 0.0};
    Vector x{5.0, 5.0};
    SolveReport r = cg_solve(eye, b, x, 1e-12, 10);
    CHECK(r.converged);
    CHECK(x == Vector{0.0, 0.0});
    x = {3.0, 3.0};
    r = bicgstab_solve(eye, b, x, 1e-12, 10);
    CHECK(r.converged);
    CHECK(x == Vector{0.0, 0.0});
}
