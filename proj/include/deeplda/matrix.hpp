#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace deeplda {

/// Dense row-major matrix of doubles.
///
/// The storage length always equals rows() * cols(). A default-constructed
/// matrix is 0x0 and is only used as an "absent" placeholder.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds from nested rows; all rows must have equal length.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix column(std::span<const double> values);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    /// Rows selected by index, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const;

    std::string shape_string() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// a * b. Each entry is accumulated over k in increasing order, so results
/// are bitwise reproducible for a given build.
Matrix matmul(const Matrix& a, const Matrix& b);

/// transpose(a) * b with the same accumulation order as matmul(transpose(a), b).
Matrix matmul_transposed_lhs(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// Adds the 1 x cols row vector `bias` to every row of `a`.
Matrix add_row_broadcast(const Matrix& a, const Matrix& bias);

/// Column sums as a 1 x cols matrix, accumulated top to bottom.
Matrix column_sums(const Matrix& a);

/// Solves a * x = b for square a by Gaussian elimination with partial
/// pivoting. Throws NumericalError when a is (numerically) singular.
std::vector<double> solve(const Matrix& a, std::span<const double> b);

bool all_finite(const Matrix& a) noexcept;

}  // namespace deeplda
