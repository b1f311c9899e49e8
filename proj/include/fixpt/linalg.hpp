#pragma once

#include <cstddef>
#include <vector>

#include "fixpt/point.hpp"

namespace fixpt {

// Dense row-major matrix. Sizes here are tiny (n <= 32), so nothing clever.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    std::vector<std::vector<double>> to_rows() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Point operator*(const Matrix& m, const Point& x);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

double asymmetry(const Matrix& m);

struct SymmetricEigen {
    std::vector<double> values; // ascending
    Matrix vectors;             // columns are eigenvectors
};

// cyclic Jacobi; adequate and exact enough for the small symmetric matrices used here
SymmetricEigen eigen_symmetric(const Matrix& m);

// Gaussian elimination with partial pivoting. Throws SingularProx when a pivot vanishes.
Point solve(Matrix a, Point b);

} // namespace fixpt
