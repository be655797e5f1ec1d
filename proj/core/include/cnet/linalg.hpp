#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "cnet/error.hpp"

namespace cnet {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit floats.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Matrix& other) const = default;

    std::string shape_str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// w[m x n] * x[n] -> [m].
Vector matvec(const Matrix& w, const Vector& x);

/// w[m x n]^T * v[m] -> [n]; pulls a vector back through a layer.
Vector matvec_transposed(const Matrix& w, const Vector& v);

/// u[m] v[n]^T -> [m x n].
Matrix outer(const Vector& u, const Vector& v);

/// Elementwise product.
Vector hadamard(const Vector& u, const Vector& v);

/// Squared Euclidean distance between u and v.
double sq_dist(const Vector& u, const Vector& v);

/// m += u v^T without materializing the outer product.
void add_outer(Matrix& m, const Vector& u, const Vector& v);

/// a += b (shapes must match).
void add_in_place(Matrix& a, const Matrix& b);

/// a += alpha * b (shapes must match).
void add_scaled(Matrix& a, const Matrix& b, double alpha);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

} // namespace cnet
