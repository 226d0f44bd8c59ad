#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dvar {

using Vector = std::vector<double>;

/// Small dense row-major matrix. Sizes here are the portfolio dimension,
/// so nothing is blocked or vectorised.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    const std::vector<double>& data() const { return data_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator-() const;

    /// y = A x
    Vector apply(std::span<const double> x) const;
    /// Writes A x into out (out.size() == rows()).
    void apply_into(std::span<const double> x, std::span<double> out) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Largest absolute entry of a - b.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Lower-triangular L with L Lᵀ = a. Throws DecompositionError when a is
/// not symmetric positive definite.
Matrix cholesky(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace dvar
