#include <gtest/gtest.h>

#include "deeplda/error.hpp"
#include "deeplda/matrix.hpp"
#include "deeplda/rng.hpp"
#include "support/oracles.hpp"

namespace deeplda {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.next_uniform(lo, hi);
    return m;
}

Matrix random_int_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (double& v : m.data()) v = static_cast<double>(static_cast<int>(rng.next_below(11)) - 5);
    return m;
}

TEST(Matrix, MatmulIdentity) {
    const auto b = Matrix::from_rows({{3, 4}, {5, 6}});
    EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matrix, MatmulZero) {
    EXPECT_EQ(matmul(Matrix::from_rows({{1, 2}}), Matrix::from_rows({{0}, {0}})), Matrix::from_rows({{0}}));
}

TEST(Matrix, MatmulHandComputed) {
    const auto c = matmul(Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{5, 6}, {7, 8}}));
    EXPECT_EQ(c, Matrix::from_rows({{19, 22}, {43, 50}}));
}

TEST(Matrix, MatmulShapeErrorNamesBothShapes) {
    try {
        matmul(Matrix(2, 3), Matrix(2, 3));
        FAIL() << "expected ShapeError";
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("(2x3)"), std::string::npos) << msg;
        EXPECT_NE(msg.rfind("(2x3)"), msg.find("(2x3)")) << msg;
    }
}

TEST(Matrix, MatmulMatchesSequentialOracleBitwise) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_matrix(1 + rng.next_below(9), 1 + rng.next_below(9), rng);
        const auto b = random_matrix(a.cols(), 1 + rng.next_below(9), rng);
        EXPECT_EQ(matmul(a, b), testing::naive_matmul(a, b));
        EXPECT_EQ(matmul_transposed_lhs(transpose(a), b), matmul(a, b));
    }
}

TEST(Matrix, TransposeCases) {
    EXPECT_EQ(transpose(Matrix::from_rows({{1, 2, 3}})), Matrix::from_rows({{1}, {2}, {3}}));
    Rng rng(11);
    const auto a = random_matrix(2, 3, rng);
    const auto t = transpose(a);
    ASSERT_EQ(t.rows(), 3u);
    ASSERT_EQ(t.cols(), 2u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t(j, i), a(i, j));
    EXPECT_EQ(transpose(t), a);
}

TEST(Matrix, AddRowBroadcast) {
    const auto a = Matrix::from_rows({{1, 1}, {2, 2}});
    EXPECT_EQ(add_row_broadcast(a, Matrix(1, 2)), a);
    EXPECT_EQ(add_row_broadcast(a, Matrix::from_rows({{10, 20}})), Matrix::from_rows({{11, 21}, {12, 22}}));
    EXPECT_EQ(add_row_broadcast(Matrix::from_rows({{1, 2}}), Matrix::from_rows({{3, 4}})),
              Matrix::from_rows({{4, 6}}));
    EXPECT_THROW(add_row_broadcast(a, Matrix(1, 3)), ShapeError);
    EXPECT_THROW(add_row_broadcast(a, Matrix(2, 2)), ShapeError);
}

TEST(MatrixProperty, AssociativityWithinRelativeTolerance) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.next_below(6), k = 1 + rng.next_below(6), m = 1 + rng.next_below(6),
                          p = 1 + rng.next_below(6);
        const auto a = random_matrix(n, k, rng), b = random_matrix(k, m, rng), c = random_matrix(m, p, rng);
        const auto left = matmul(matmul(a, b), c);
        const auto right = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double scale = std::max({1.0, std::abs(left.data()[i]), std::abs(right.data()[i])});
            EXPECT_LE(std::abs(left.data()[i] - right.data()[i]) / scale, 1e-9);
        }
    }
}

TEST(MatrixProperty, TransposeOfProductIsExactForIntegers) {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_int_matrix(1 + rng.next_below(5), 1 + rng.next_below(5), rng);
        const auto b = random_int_matrix(a.cols(), 1 + rng.next_below(5), rng);
        EXPECT_EQ(transpose(matmul(a, b)), matmul(transpose(b), transpose(a)));
    }
}

TEST(Matrix, SolveSmallSystem) {
    // 2x + y = 5, x + 3y = 10  ->  x = 1, y = 3
    const auto x = solve(Matrix::from_rows({{2, 1}, {1, 3}}), std::vector<double>{5, 10});
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], 3.0, 1e-14);
    EXPECT_THROW(solve(Matrix::from_rows({{1, 2}, {2, 4}}), std::vector<double>{1, 2}), NumericalError);
}

TEST(Matrix, ConstructorRejectsWrongLength) {
    EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
    EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), ShapeError);
}

}  // namespace
}  // namespace deeplda
