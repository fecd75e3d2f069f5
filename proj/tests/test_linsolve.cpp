#include <gtest/gtest.h>

#include <sstream>

#include "cgstencil/linsolve.hpp"
#include "support.hpp"

using namespace cgstencil;
namespace ts = testing_support;

namespace {

// 7-point Dirichlet Laplacian (negated, so the diagonal is positive) on n^3 unknowns.
SparseSystem laplacian_3d(int n, std::mt19937_64& g) {
    const int N = n * n * n;
    TripletBuilder tb(N);
    auto id = [n](int i, int j, int k) { return (k * n + j) * n + i; };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int r = id(i, j, k);
                tb.add(r, r, 6.0);
                if (i > 0) tb.add(r, id(i - 1, j, k), -1.0);
                if (i + 1 < n) tb.add(r, id(i + 1, j, k), -1.0);
                if (j > 0) tb.add(r, id(i, j - 1, k), -1.0);
                if (j + 1 < n) tb.add(r, id(i, j + 1, k), -1.0);
                if (k > 0) tb.add(r, id(i, j, k - 1), -1.0);
                if (k + 1 < n) tb.add(r, id(i, j, k + 1), -1.0);
            }
    std::vector<double> b(static_cast<std::size_t>(N));
    for (auto& x : b) x = ts::uniform(g, -1.0, 1.0);
    return {tb.build(), b};
}

// Independent residual: dense mat-vec through Eigen.
double dense_relative_residual(const SparseSystem& sys, const std::vector<double>& x) {
    const Eigen::MatrixXd D = sys.A.to_dense();
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), static_cast<Eigen::Index>(sys.rhs.size()));
    return (b - D * xv).norm() / b.norm();
}

}  // namespace

TEST(TripletBuilder, MergesDuplicatesAndSortsColumns) {
    TripletBuilder tb(3);
    tb.add(0, 2, 1.0);
    tb.add(0, 0, 2.0);
    tb.add(0, 2, 3.0);
    tb.add(2, 1, 5.0);
    tb.add(1, 1, 1.0);
    tb.add(1, 1, -1.0);  // cancels
    const auto A = tb.build();
    EXPECT_EQ(A.nnz(), 3);
    EXPECT_EQ(A.row_nnz(0), 2);
    EXPECT_EQ(A.row_nnz(1), 0);
    EXPECT_EQ(A.col[0], 0);
    EXPECT_EQ(A.col[1], 2);
    EXPECT_DOUBLE_EQ(A.val[1], 4.0);
    EXPECT_DOUBLE_EQ(A.diagonal(0), 2.0);
    EXPECT_DOUBLE_EQ(A.diagonal(1), 0.0);
    EXPECT_THROW(tb.add(3, 0, 1.0), std::out_of_range);
}

TEST(Solve, IdentityConvergesImmediately) {
    TripletBuilder tb(5);
    for (int i = 0; i < 5; ++i) tb.add(i, i, 1.0);
    const SparseSystem sys{tb.build(), {1, 2, 3, 4, 5}};
    const auto res = solve(sys);
    EXPECT_LE(res.stats.iterations, 1);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(res.x[static_cast<std::size_t>(i)], i + 1.0, 1e-14);
}

TEST(Solve, ZeroRightHandSide) {
    TripletBuilder tb(2);
    tb.add(0, 0, 1.0);
    tb.add(1, 1, 1.0);
    const auto res = solve({tb.build(), {0.0, 0.0}});
    EXPECT_EQ(res.x, (std::vector<double>{0.0, 0.0}));
}

TEST(Solve, PoissonMatchesDense) {
    auto g = ts::rng(51);
    const auto sys = laplacian_3d(10, g);
    const auto it = solve(sys, 1e-12);
    const auto dx = dense_solve(sys);
    for (std::size_t i = 0; i < dx.size(); ++i) EXPECT_NEAR(it.x[i], dx[i], 1e-8);
    EXPECT_LE(it.stats.residual, 1e-12);
    EXPECT_EQ(it.stats.nnz_histogram.rbegin()->first, 7);
}

TEST(Solve, RandomNonsymmetricSystems) {
    auto g = ts::rng(52);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 50;
        TripletBuilder tb(n);
        for (int r = 0; r < n; ++r) {
            tb.add(r, r, 10.0 + ts::uniform(g, 0.0, 1.0));
            for (int k = 0; k < 5; ++k) tb.add(r, ts::uniform_int(g, 0, n - 1), ts::uniform(g, -1.0, 1.0));
        }
        std::vector<double> b(n);
        for (auto& x : b) x = ts::uniform(g, -1.0, 1.0);
        const SparseSystem sys{tb.build(), b};
        const auto res = solve(sys, 1e-10);
        EXPECT_LE(dense_relative_residual(sys, res.x), 1e-10);
    }
}

TEST(Solve, ReportedResidualMatchesIndependentMatVec) {
    auto g = ts::rng(53);
    const auto sys = laplacian_3d(6, g);
    for (double tol : {1e-4, 1e-8, 1e-12}) {
        const auto res = solve(sys, tol);
        EXPECT_LE(res.stats.residual, tol);
        EXPECT_NEAR(res.stats.residual, dense_relative_residual(sys, res.x), 1e-14);
    }
}

TEST(Solve, Failures) {
    TripletBuilder tb(2);
    tb.add(0, 1, 1.0);
    tb.add(1, 0, 1.0);
    EXPECT_THROW(solve({tb.build(), {1.0, 1.0}}), ZeroDiagonal);

    auto g = ts::rng(54);
    const auto sys = laplacian_3d(8, g);
    EXPECT_THROW(solve(sys, 1e-14, 2), SolverDiverged);

    TripletBuilder sing(2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) sing.add(r, c, 1.0);
    EXPECT_THROW(solve({sing.build(), {1.0, 0.0}}, 1e-10, 500), SolverDiverged);
    EXPECT_THROW(dense_solve({sing.build(), {1.0, 0.0}}), SingularSystem);
    EXPECT_THROW(solve(sys, 0.0), std::invalid_argument);
}

TEST(DenseSolve, Scalar) {
    TripletBuilder tb(1);
    tb.add(0, 0, 2.0);
    EXPECT_EQ(dense_solve({tb.build(), {4.0}}), std::vector<double>{2.0});
}

TEST(MatrixMarket, RoundTrip) {
    auto g = ts::rng(55);
    const auto sys = laplacian_3d(4, g);
    std::stringstream ms, vs;
    write_matrix_market(ms, sys.A);
    write_vector_market(vs, sys.rhs);
    const auto A = read_matrix_market(ms);
    const auto b = read_vector_market(vs);
    EXPECT_EQ(A.row_ptr, sys.A.row_ptr);
    EXPECT_EQ(A.col, sys.A.col);
    EXPECT_EQ(A.val, sys.A.val);
    EXPECT_EQ(b, sys.rhs);

    std::istringstream bad("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
    EXPECT_THROW(read_matrix_market(bad), std::runtime_error);
}
