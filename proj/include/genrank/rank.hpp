// Rank engines: exact rank over rationals via fraction-free (Bareiss)
// elimination, numerical rank via singular values, Kruskal rank by exhaustive
// column-subset enumeration, and the minor-expansion oracles used to cross-
// check everything else.
//
// Subset-enumeration operations take an explicit budget (number of subsets)
// and refuse to run past it; the oracles are desk-scale by construction.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"

namespace genrank {

constexpr std::size_t kDefaultSubsetBudget = 1'000'000;

enum class RankBackend { exact, floating };

struct RankResult {
    std::size_t rank = 0;
    RankBackend backend = RankBackend::exact;
    double tolerance = 0.0;  // realized threshold; float backend only
    std::optional<std::vector<double>> singular_values;
};

struct TolerancePolicy {
    enum class Kind { relative, absolute };
    Kind kind = Kind::relative;
    double value = 1.0;

    // threshold = c * sigma_max * max(rows, cols) * machine_epsilon
    static TolerancePolicy relative(double c = 1.0) { return {Kind::relative, c}; }
    static TolerancePolicy absolute(double tau) { return {Kind::absolute, tau}; }
};

namespace detail {

// Fraction-free elimination over integers with first-nonzero pivoting; after
// each step entries are (signed) minors of the original matrix, so the
// division by the previous pivot is exact. Returns the number of pivots.
inline std::size_t bareiss_rank(std::vector<BigInt>& a, std::size_t rows, std::size_t cols) {
    auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return a[i * cols + j]; };
    std::size_t rank = 0;
    BigInt prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (at(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                at(i, j) = (at(rank, col) * at(i, j) - at(i, col) * at(rank, j)) / prev;
            at(i, col) = 0;
        }
        prev = at(rank, col);
        ++rank;
    }
    return rank;
}

// Scales each row by the LCM of its denominators (rank-invariant) so the
// elimination runs on integers, where Bareiss needs no gcd normalization.
inline std::vector<BigInt> to_row_scaled_integers(const Matrix<Rational>& m) {
    std::vector<BigInt> a(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        BigInt scale = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            scale = boost::multiprecision::lcm(scale, denominator(m(i, j)));
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rational& v = m(i, j);
            a[i * m.cols() + j] = numerator(v) * (scale / denominator(v));
        }
    }
    return a;
}

inline void guard_budget(const BigInt& count, std::size_t budget, const std::string& op) {
    if (count > BigInt(budget))
        throw ResourceError(op + ": " + count.str() + " subsets exceed budget " +
                            std::to_string(budget));
}

}  // namespace detail

// Exact rank; no tolerance is involved anywhere on this path.
inline RankResult rank_exact(const Matrix<Rational>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {0, RankBackend::exact, 0.0, std::nullopt};
    auto a = detail::to_row_scaled_integers(m);
    std::size_t r = detail::bareiss_rank(a, m.rows(), m.cols());
    return {r, RankBackend::exact, 0.0, std::nullopt};
}

// Fraction-free determinant. Exact for Rational; for floating scalars this is
// ordinary elimination in disguise.
template <typename S>
S determinant(Matrix<S> a) {
    if (a.rows() != a.cols()) throw ShapeError("determinant: matrix is " + a.shape_string());
    const std::size_t n = a.rows();
    if (n == 0) return S{1};
    S prev{1};
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t i = col; i < n; ++i)
            if (a(i, col) != S{0}) {
                pivot = i;
                break;
            }
        if (pivot == n) return S{0};
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            sign = -sign;
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j < n; ++j)
                a(i, j) = (a(col, col) * a(i, j) - a(i, col) * a(col, j)) / prev;
            a(i, col) = S{0};
        }
        prev = a(col, col);
    }
    return sign > 0 ? a(n - 1, n - 1) : S{0} - a(n - 1, n - 1);
}

// det of the (I, J) submatrix; indices are zero-based.
template <typename S>
S minor_det(const Matrix<S>& m, const std::vector<std::size_t>& row_idx,
            const std::vector<std::size_t>& col_idx) {
    if (row_idx.size() != col_idx.size())
        throw ShapeError("minor: |I| = " + std::to_string(row_idx.size()) +
                         " != |J| = " + std::to_string(col_idx.size()));
    return determinant(m.submatrix(row_idx, col_idx));
}

// Largest r such that every r-subset of columns is linearly independent.
// Scans downward from rank(m): if every r-subset of columns passes at level r,
// every subset of a smaller level passes too.
inline std::size_t kruskal_rank(const Matrix<Rational>& m,
                                std::size_t budget = kDefaultSubsetBudget) {
    const std::size_t upper = rank_exact(m).rank;
    for (std::size_t r = upper; r >= 1; --r) {
        detail::guard_budget(binomial(m.cols(), r), budget, "kruskal_rank");
        bool all_independent = true;
        std::vector<std::size_t> all_rows(m.rows());
        std::iota(all_rows.begin(), all_rows.end(), 0);
        for_each_combination(m.cols(), r, [&](const std::vector<std::size_t>& cols) {
            if (!all_independent) return;
            if (rank_exact(m.submatrix(all_rows, cols)).rank != r) all_independent = false;
        });
        if (all_independent) return r;
    }
    return 0;
}

// Sum of squared order-r minors; nonzero exactly when rank(m) >= r.
inline Rational rank_condition_value(const Matrix<Rational>& m, std::size_t r,
                                     std::size_t budget = kDefaultSubsetBudget) {
    if (r == 0) return 1;
    if (r > std::min(m.rows(), m.cols())) return 0;
    detail::guard_budget(binomial(m.rows(), r) * binomial(m.cols(), r), budget,
                         "rank_condition_value");
    Rational total = 0;
    for_each_combination(m.rows(), r, [&](const std::vector<std::size_t>& rows) {
        for_each_combination(m.cols(), r, [&](const std::vector<std::size_t>& cols) {
            Rational d = minor_det(m, rows, cols);
            total += d * d;
        });
    });
    return total;
}

// Minor of A * D * B^T expanded over column subsets:
//   sum over |S|-subsets of [N] of (prod_{l in S} D_l) det_{I,S}(A) det_{J,S}(B).
// Zero when |I| > N (no subsets). Brute-force oracle for minor_det on products.
inline Rational cauchy_binet_diag_expand(const Matrix<Rational>& a,
                                         const DiagonalMatrix<Rational>& d,
                                         const Matrix<Rational>& b,
                                         const std::vector<std::size_t>& row_idx,
                                         const std::vector<std::size_t>& col_idx,
                                         std::size_t budget = kDefaultSubsetBudget) {
    if (a.cols() != d.size() || b.cols() != d.size())
        throw ShapeError("cauchy_binet_diag_expand: inner dimensions disagree");
    if (row_idx.size() != col_idx.size())
        throw ShapeError("cauchy_binet_diag_expand: |I| != |J|");
    const std::size_t s = row_idx.size();
    const std::size_t n_inner = d.size();
    if (s > n_inner) return 0;
    detail::guard_budget(binomial(n_inner, s), budget, "cauchy_binet_diag_expand");
    Rational total = 0;
    for_each_combination(n_inner, s, [&](const std::vector<std::size_t>& subset) {
        Rational weight = 1;
        for (std::size_t l : subset) weight *= d[l];
        if (weight == 0) return;
        total += weight * minor_det(a, row_idx, subset) * minor_det(b, col_idx, subset);
    });
    return total;
}

// Numerical rank: count singular values above the policy threshold.
inline RankResult rank_float(const Matrix<double>& m,
                             TolerancePolicy policy = TolerancePolicy::relative()) {
    for (double v : m.data())
        if (!std::isfinite(v)) throw DomainError("rank_float: non-finite entry");
    Eigen::MatrixXd em(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            em(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
    const auto& sv = svd.singularValues();
    std::vector<double> sigmas(sv.data(), sv.data() + sv.size());
    const double sigma_max = sigmas.empty() ? 0.0 : sigmas.front();
    double threshold = 0.0;
    switch (policy.kind) {
        case TolerancePolicy::Kind::relative:
            threshold = policy.value * sigma_max *
                        static_cast<double>(std::max(m.rows(), m.cols())) *
                        std::numeric_limits<double>::epsilon();
            break;
        case TolerancePolicy::Kind::absolute:
            threshold = policy.value;
            break;
    }
    std::size_t r = 0;
    for (double s : sigmas)
        if (s > threshold) ++r;
    return {r, RankBackend::floating, threshold, std::move(sigmas)};
}

}  // namespace genrank
