// Dense matrices over an arbitrary scalar backend, plus the elementwise and
// column-wise products everything downstream is built from.
//
// Matrices are immutable in spirit: every operation returns a fresh value and
// nothing here holds shared mutable state, so concurrent use is safe.

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace genrank {

template <typename S>
class Matrix {
public:
    using scalar_type = S;

    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, const S& fill = S{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<S> entries)
        : rows_(rows), cols_(cols), data_(entries) {
        if (data_.size() != rows * cols)
            throw ShapeError("matrix literal has " + std::to_string(data_.size()) +
                             " entries, expected " + std::to_string(rows * cols));
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, S{0});
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S{1};
        return m;
    }

    static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, S{1}); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    // Row-major entry storage, deterministic iteration order.
    const std::vector<S>& data() const { return data_; }
    std::vector<S>& data() { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator+(const Matrix& rhs) const {
        require_same_shape(rhs, "+");
        Matrix out(rows_, cols_);
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] = data_[t] + rhs.data_[t];
        return out;
    }

    Matrix operator-(const Matrix& rhs) const {
        require_same_shape(rhs, "-");
        Matrix out(rows_, cols_);
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] = data_[t] - rhs.data_[t];
        return out;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw ShapeError("matmul shape mismatch: " + shape_string() + " * " + rhs.shape_string());
        Matrix out(rows_, rhs.cols_, S{0});
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const S& a = (*this)(i, k);
                if (a == S{0}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    Matrix scaled(const S& factor) const {
        Matrix out(rows_, cols_);
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] = data_[t] * factor;
        return out;
    }

    // Entrywise (Hadamard) product.
    Matrix hadamard(const Matrix& rhs) const {
        require_same_shape(rhs, "hadamard");
        Matrix out(rows_, cols_);
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] = data_[t] * rhs.data_[t];
        return out;
    }

    template <typename F>
    auto map(F&& f) const -> Matrix<std::decay_t<decltype(f(std::declval<const S&>()))>> {
        Matrix<std::decay_t<decltype(f(std::declval<const S&>()))>> out(rows_, cols_);
        for (std::size_t t = 0; t < data_.size(); ++t) out.data()[t] = f(data_[t]);
        return out;
    }

    Matrix submatrix(const std::vector<std::size_t>& row_idx,
                     const std::vector<std::size_t>& col_idx) const {
        Matrix out(row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out(i, j) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    std::string shape_string() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void require_same_shape(const Matrix& rhs, const char* op) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw ShapeError(std::string(op) + " shape mismatch: " + shape_string() + " vs " +
                             rhs.shape_string());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

template <typename S>
class DiagonalMatrix {
public:
    DiagonalMatrix() = default;
    explicit DiagonalMatrix(std::vector<S> diag) : diag_(std::move(diag)) {}

    std::size_t size() const { return diag_.size(); }
    const S& operator[](std::size_t ell) const { return diag_[ell]; }
    S& operator[](std::size_t ell) { return diag_[ell]; }
    const std::vector<S>& entries() const { return diag_; }

    Matrix<S> to_dense() const {
        Matrix<S> m(diag_.size(), diag_.size(), S{0});
        for (std::size_t i = 0; i < diag_.size(); ++i) m(i, i) = diag_[i];
        return m;
    }

private:
    std::vector<S> diag_;
};

// M with column ell scaled by D_ell; the cheap route to left * D.
template <typename S>
Matrix<S> scale_columns(const Matrix<S>& m, const DiagonalMatrix<S>& d) {
    if (m.cols() != d.size())
        throw ShapeError("scale_columns: " + m.shape_string() + " vs diag of " +
                         std::to_string(d.size()));
    Matrix<S> out = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) * d[j];
    return out;
}

// Entrywise k-th power; k = 0 is the all-ones matrix (empty product).
template <typename S>
Matrix<S> hadamard_power(const Matrix<S>& m, unsigned k) {
    Matrix<S> out(m.rows(), m.cols(), S{1});
    for (unsigned t = 0; t < k; ++t) out = out.hadamard(m);
    return out;
}

// Column-wise Kronecker product: column j is p_j (x) q_j. Row pairs (i1, i2)
// are ordered with the first factor's index changing slower, i.e. the entry at
// row i1*q.rows() + i2 equals P(i1, j) * Q(i2, j).
template <typename S>
Matrix<S> khatri_rao(const Matrix<S>& p, const Matrix<S>& q) {
    if (p.cols() != q.cols())
        throw ShapeError("khatri_rao column-count mismatch: " + p.shape_string() + " vs " +
                         q.shape_string());
    Matrix<S> out(p.rows() * q.rows(), p.cols());
    for (std::size_t i1 = 0; i1 < p.rows(); ++i1)
        for (std::size_t i2 = 0; i2 < q.rows(); ++i2)
            for (std::size_t j = 0; j < p.cols(); ++j)
                out(i1 * q.rows() + i2, j) = p(i1, j) * q(i2, j);
    return out;
}

// --- fixture text format ----------------------------------------------------
// First line "rows cols", then row-major entries. Rationals read "p/q" or
// plain integers; doubles read decimal literals.

namespace detail {

template <typename S>
S scalar_from_token(const std::string& token);

template <>
inline Rational scalar_from_token<Rational>(const std::string& token) {
    return rational_from_string(token);
}

template <>
inline double scalar_from_token<double>(const std::string& token) {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("not a float literal: '" + token + "'");
    return v;
}

}  // namespace detail

template <typename S>
Matrix<S> read_matrix(std::istream& in) {
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw std::invalid_argument("matrix text: missing 'rows cols' header");
    if (rows == 0 || cols == 0) throw ShapeError("matrix text: dimensions must be >= 1");
    Matrix<S> m(rows, cols);
    for (std::size_t t = 0; t < rows * cols; ++t) {
        std::string token;
        if (!(in >> token))
            throw std::invalid_argument("matrix text: expected " + std::to_string(rows * cols) +
                                        " entries, got " + std::to_string(t));
        m.data()[t] = detail::scalar_from_token<S>(token);
    }
    return m;
}

template <typename S>
Matrix<S> read_matrix_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_matrix<S>(in);
}

inline void write_scalar(std::ostream& out, const Rational& v) { out << v; }

inline void write_scalar(std::ostream& out, double v) {
    std::ostringstream tmp;
    tmp.precision(std::numeric_limits<double>::max_digits10);
    tmp << v;
    out << tmp.str();
}

template <typename S>
void write_matrix(std::ostream& out, const Matrix<S>& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            write_scalar(out, m(i, j));
        }
        out << '\n';
    }
}

}  // namespace genrank
