#include "cnet/linalg.hpp"

#include <cmath>
#include <string>

namespace cnet {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw DimensionError("Matrix::from_rows", std::to_string(m.cols_) + " cols",
                                 std::to_string(row.size()) + " cols in row " + std::to_string(r));
        }
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

namespace {
std::string dim_str(std::size_t n) { return "vector[" + std::to_string(n) + "]"; }
} // namespace

Vector matvec(const Matrix& w, const Vector& x) {
    if (w.cols() != x.size()) {
        throw DimensionError("matvec", w.shape_str(), dim_str(x.size()));
    }
    Vector out(w.rows());
    const double* xp = x.data();
    for (std::size_t i = 0; i < w.rows(); ++i) {
        const double* row = w.data() + i * w.cols();
        double acc = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) acc += row[j] * xp[j];
        out[i] = acc;
    }
    return out;
}

Vector matvec_transposed(const Matrix& w, const Vector& v) {
    if (w.rows() != v.size()) {
        throw DimensionError("matvec_transposed", w.shape_str(), dim_str(v.size()));
    }
    Vector out(w.cols(), 0.0);
    // Row-major friendly: accumulate row i scaled by v[i] instead of striding columns.
    for (std::size_t i = 0; i < w.rows(); ++i) {
        const double* row = w.data() + i * w.cols();
        const double vi = v[i];
        for (std::size_t j = 0; j < w.cols(); ++j) out[j] += row[j] * vi;
    }
    return out;
}

Matrix outer(const Vector& u, const Vector& v) {
    Matrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double* row = m.data() + i * v.size();
        const double ui = u[i];
        for (std::size_t j = 0; j < v.size(); ++j) row[j] = ui * v[j];
    }
    return m;
}

Vector hadamard(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) {
        throw DimensionError("hadamard", dim_str(u.size()), dim_str(v.size()));
    }
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * v[i];
    return out;
}

double sq_dist(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) {
        throw DimensionError("sq_dist", dim_str(u.size()), dim_str(v.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        acc += d * d;
    }
    return acc;
}

void add_outer(Matrix& m, const Vector& u, const Vector& v) {
    if (m.rows() != u.size() || m.cols() != v.size()) {
        throw DimensionError("add_outer", m.shape_str(),
                             std::to_string(u.size()) + "x" + std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        double* row = m.data() + i * m.cols();
        const double ui = u[i];
        for (std::size_t j = 0; j < v.size(); ++j) row[j] += ui * v[j];
    }
}

void add_in_place(Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("add_in_place", a.shape_str(), b.shape_str());
    }
    double* ap = a.data();
    const double* bp = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) ap[i] += bp[i];
}

void add_scaled(Matrix& a, const Matrix& b, double alpha) {
    if (!a.same_shape(b)) {
        throw DimensionError("add_scaled", a.shape_str(), b.shape_str());
    }
    double* ap = a.data();
    const double* bp = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) ap[i] += alpha * bp[i];
}

bool all_finite(const Matrix& m) {
    const double* p = m.data();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!std::isfinite(p[i])) return false;
    }
    return true;
}

bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace cnet
