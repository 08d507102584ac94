// Exact factorizations of Hadamard powers, polynomial Hadamard functions, and
// their Khatri-Rao companions, each as left * diag * right^T with columns
// labeled by weak compositions (plus a coordinate for the Khatri-Rao forms).
// Reconstruction is exact over rationals; there is no float variant.

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"

namespace genrank {

enum class DecompositionKind { hadamard_power, poly, khatri_power, khatri_poly, tensor_directsum };

inline const char* to_string(DecompositionKind k) {
    switch (k) {
        case DecompositionKind::hadamard_power: return "hadamard_power";
        case DecompositionKind::poly: return "poly";
        case DecompositionKind::khatri_power: return "khatri_power";
        case DecompositionKind::khatri_poly: return "khatri_poly";
        case DecompositionKind::tensor_directsum: return "tensor_directsum";
    }
    return "?";
}

// Inner-column label: a weak composition, optionally tagged with the
// zero-based coordinate of the Khatri-Rao block it lives in.
struct ColumnLabel {
    int coordinate = -1;  // -1 when the decomposition has no coordinate part
    WeakComposition comp;

    bool operator==(const ColumnLabel&) const = default;

    std::string to_string() const {
        if (coordinate < 0) return comp.to_string();
        return "(" + std::to_string(coordinate) + "," + comp.to_string() + ")";
    }
};

struct Decomposition {
    Matrix<Rational> left;
    DiagonalMatrix<Rational> diag;
    Matrix<Rational> right;
    std::vector<ColumnLabel> column_labels;
    DecompositionKind kind = DecompositionKind::hadamard_power;

    std::size_t inner_dimension() const { return diag.size(); }

    Matrix<Rational> reconstruction() const {
        if (inner_dimension() == 0)
            return Matrix<Rational>(left.rows(), right.rows(), Rational{0});
        return scale_columns(left, diag) * right.transpose();
    }

    // Debug dump: shapes, labels, diagonal entries as strings.
    nlohmann::json dump() const {
        nlohmann::json j;
        j["kind"] = to_string(kind);
        j["left_shape"] = {left.rows(), left.cols()};
        j["right_shape"] = {right.rows(), right.cols()};
        j["inner_dimension"] = inner_dimension();
        std::vector<std::string> labels, diag_entries;
        for (const auto& l : column_labels) labels.push_back(l.to_string());
        for (const auto& v : diag.entries()) diag_entries.push_back(v.str());
        j["column_labels"] = labels;
        j["diag"] = diag_entries;
        return j;
    }
};

namespace detail {

// Column a_1^(k_1) o ... o a_d^(k_d) evaluated at row i: prod_l A(i,l)^{k_l}.
inline Rational hadamard_monomial(const Matrix<Rational>& a, std::size_t i,
                                  const WeakComposition& comp) {
    Rational v = 1;
    for (std::size_t l = 0; l < comp.size(); ++l)
        for (int t = 0; t < comp[l]; ++t) v *= a(i, l);
    return v;
}

inline void require_equal_inner(const Matrix<Rational>& a, const Matrix<Rational>& b) {
    if (a.cols() != b.cols())
        throw ShapeError("decomposition factors need equal column counts: " + a.shape_string() +
                         " vs " + b.shape_string());
}

}  // namespace detail

// (A B^T)^(k) = left * diag * right^T with columns over lambda(k) and
// multinomial diagonal weights.
inline Decomposition decompose_hadamard_power(const Matrix<Rational>& a,
                                              const Matrix<Rational>& b, int k) {
    detail::require_equal_inner(a, b);
    const std::size_t d = a.cols();
    auto comps = enumerate_lambda(d, k);
    Decomposition out;
    out.kind = DecompositionKind::hadamard_power;
    out.left = Matrix<Rational>(a.rows(), comps.size());
    out.right = Matrix<Rational>(b.rows(), comps.size());
    std::vector<Rational> diag(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        diag[c] = Rational(multinomial(comps[c]));
        for (std::size_t i = 0; i < a.rows(); ++i)
            out.left(i, c) = detail::hadamard_monomial(a, i, comps[c]);
        for (std::size_t i = 0; i < b.rows(); ++i)
            out.right(i, c) = detail::hadamard_monomial(b, i, comps[c]);
        out.column_labels.push_back({-1, comps[c]});
    }
    out.diag = DiagonalMatrix<Rational>(std::move(diag));
    return out;
}

// sum_k c_k (A B^T)^(k) with inner indices Lambda(K, (c_k)) and diagonal
// c_{|k|} * multinomial(k).
inline Decomposition decompose_poly(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                    const SupportFilter& coeffs) {
    detail::require_equal_inner(a, b);
    const std::size_t d = a.cols();
    auto comps = enumerate_Lambda(d, coeffs.max_degree(), &coeffs);
    Decomposition out;
    out.kind = DecompositionKind::poly;
    out.left = Matrix<Rational>(a.rows(), comps.size());
    out.right = Matrix<Rational>(b.rows(), comps.size());
    std::vector<Rational> diag(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        diag[c] = coeffs.coefficient(comps[c].sum()) * Rational(multinomial(comps[c]));
        for (std::size_t i = 0; i < a.rows(); ++i)
            out.left(i, c) = detail::hadamard_monomial(a, i, comps[c]);
        for (std::size_t i = 0; i < b.rows(); ++i)
            out.right(i, c) = detail::hadamard_monomial(b, i, comps[c]);
        out.column_labels.push_back({-1, comps[c]});
    }
    out.diag = DiagonalMatrix<Rational>(std::move(diag));
    return out;
}

namespace detail {

// Shared core of the two Khatri-Rao builders. Columns are indexed by
// (coordinate, composition) pairs with the coordinate changing slower; the
// left factor is the d-fold block diagonal of the Hadamard-monomial matrix of
// A, the right factor's column (l, k) is b_l o b_1^(k_1) o ... o b_d^(k_d).
inline Decomposition khatri_decomposition(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                          const std::vector<WeakComposition>& comps,
                                          const std::vector<Rational>& base_weights,
                                          DecompositionKind kind) {
    const std::size_t d = a.cols();
    const std::size_t m = a.rows();
    const std::size_t n = b.rows();
    const std::size_t block = comps.size();

    Matrix<Rational> a_tilde(m, block);
    for (std::size_t c = 0; c < block; ++c)
        for (std::size_t i = 0; i < m; ++i) a_tilde(i, c) = hadamard_monomial(a, i, comps[c]);

    Decomposition out;
    out.kind = kind;
    out.left = Matrix<Rational>(m * d, d * block, Rational{0});
    out.right = Matrix<Rational>(n, d * block);
    std::vector<Rational> diag(d * block);
    for (std::size_t l = 0; l < d; ++l) {
        for (std::size_t c = 0; c < block; ++c) {
            const std::size_t col = l * block + c;
            diag[col] = base_weights[c];
            for (std::size_t i = 0; i < m; ++i) out.left(l * m + i, col) = a_tilde(i, c);
            for (std::size_t i = 0; i < n; ++i)
                out.right(i, col) = b(i, l) * hadamard_monomial(b, i, comps[c]);
            out.column_labels.push_back({static_cast<int>(l), comps[c]});
        }
    }
    out.diag = DiagonalMatrix<Rational>(std::move(diag));
    return out;
}

}  // namespace detail

// B^T (Khatri-Rao) (A B^T)^(k): inner indices [d] x lambda(k). Distinct
// columns (i, k) and (j, r) of the right factor coincide exactly when
// k + e_i = r + e_j (they share a fiber of the fiber map).
inline Decomposition decompose_khatri_power(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                            int k) {
    detail::require_equal_inner(a, b);
    auto comps = enumerate_lambda(a.cols(), k);
    std::vector<Rational> weights(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) weights[c] = Rational(multinomial(comps[c]));
    return detail::khatri_decomposition(a, b, comps, weights, DecompositionKind::khatri_power);
}

// B^T (Khatri-Rao) sum_k c_k (A B^T)^(k): inner indices [d] x Lambda(K,(c_k)).
inline Decomposition decompose_khatri_poly(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                           const SupportFilter& coeffs) {
    detail::require_equal_inner(a, b);
    auto comps = enumerate_Lambda(a.cols(), coeffs.max_degree(), &coeffs);
    std::vector<Rational> weights(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c)
        weights[c] = coeffs.coefficient(comps[c].sum()) * Rational(multinomial(comps[c]));
    return detail::khatri_decomposition(a, b, comps, weights, DecompositionKind::khatri_poly);
}

// Two-factor form: left^T * right equals the target exactly. Rows of the
// factors are flat coordinates of direct sums of tensor powers.
struct TensorFactorPair {
    Matrix<Rational> left;
    Matrix<Rational> right;
    bool khatri = true;

    Matrix<Rational> reconstruction() const {
        if (left.rows() == 0) return Matrix<Rational>(left.cols(), right.cols(), Rational{0});
        return left.transpose() * right;
    }

    // Uniform view for verify_reconstruction and the CLI.
    Decomposition as_decomposition() const {
        Decomposition d;
        d.kind = DecompositionKind::tensor_directsum;
        d.left = left.transpose();
        d.right = right.transpose();
        d.diag = DiagonalMatrix<Rational>(std::vector<Rational>(left.rows(), Rational{1}));
        return d;
    }
};

namespace detail {

// v^{(x) k} flattened lexicographically, first tensor factor slowest.
inline std::vector<Rational> tensor_power(const std::vector<Rational>& v, int k) {
    std::vector<Rational> out{Rational{1}};
    for (int t = 0; t < k; ++t) {
        std::vector<Rational> next;
        next.reserve(out.size() * v.size());
        for (const auto& x : v)
            for (const auto& y : out) next.push_back(x * y);
        out = std::move(next);
    }
    return out;
}

inline std::vector<Rational> matrix_row(const Matrix<Rational>& m, std::size_t i) {
    std::vector<Rational> row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    return row;
}

inline std::vector<int> support_degrees(const SupportFilter& coeffs) {
    std::vector<int> out;
    for (int k = 0; k <= coeffs.max_degree(); ++k)
        if (coeffs.keeps(k)) out.push_back(k);
    return out;
}

}  // namespace detail

// Direct-sum embedding of B^T (Khatri-Rao) sum_k c_k (A B^T)^(k). Per nonzero
// c_k the factors carry a d^{k+1}-coordinate segment holding e_{i1} (x)
// c_k a_{i2}^{(x) k} on the left (columns (i1, i2), i1 slower) and
// b_j^{(x)(k+1)} on the right, so left^T * right is the target exactly.
inline TensorFactorPair decompose_tensor_directsum(const Matrix<Rational>& a,
                                                   const Matrix<Rational>& b,
                                                   const SupportFilter& coeffs,
                                                   std::size_t budget = kDefaultSubsetBudget) {
    detail::require_equal_inner(a, b);
    const std::size_t d = a.cols();
    const std::size_t m = a.rows();
    const std::size_t n = b.rows();
    auto degrees = detail::support_degrees(coeffs);

    BigInt total = 0;
    for (int k : degrees) total += boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(k + 1));
    detail::guard_budget(total, budget, "decompose_tensor_directsum");
    const std::size_t rows_total = total.convert_to<std::size_t>();

    TensorFactorPair out;
    out.khatri = true;
    out.left = Matrix<Rational>(rows_total, d * m, Rational{0});
    out.right = Matrix<Rational>(rows_total, n, Rational{0});

    std::size_t offset = 0;
    for (int k : degrees) {
        const Rational& ck = coeffs.coefficient(k);
        std::size_t seg = 1;
        for (int t = 0; t < k; ++t) seg *= d;  // d^k
        for (std::size_t i2 = 0; i2 < m; ++i2) {
            auto pow_a = detail::tensor_power(detail::matrix_row(a, i2), k);
            for (std::size_t i1 = 0; i1 < d; ++i1)
                for (std::size_t t = 0; t < seg; ++t)
                    out.left(offset + i1 * seg + t, i1 * m + i2) = ck * pow_a[t];
        }
        for (std::size_t j = 0; j < n; ++j) {
            auto pow_b = detail::tensor_power(detail::matrix_row(b, j), k + 1);
            for (std::size_t t = 0; t < seg * d; ++t) out.right(offset + t, j) = pow_b[t];
        }
        offset += seg * d;
    }
    return out;
}

// Inner-product form without the Khatri-Rao part: columns <(+)_k c_k a_i^{(x)k},
// (+)_k b_j^{(x)k}> = sum_k c_k <a_i, b_j>^k, so left^T * right equals
// sum_k c_k (A B^T)^(k).
inline TensorFactorPair decompose_tensor_directsum_plain(const Matrix<Rational>& a,
                                                         const Matrix<Rational>& b,
                                                         const SupportFilter& coeffs,
                                                         std::size_t budget = kDefaultSubsetBudget) {
    detail::require_equal_inner(a, b);
    const std::size_t d = a.cols();
    auto degrees = detail::support_degrees(coeffs);

    BigInt total = 0;
    for (int k : degrees) total += boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(k));
    detail::guard_budget(total, budget, "decompose_tensor_directsum_plain");
    const std::size_t rows_total = total.convert_to<std::size_t>();

    TensorFactorPair out;
    out.khatri = false;
    out.left = Matrix<Rational>(rows_total, a.rows(), Rational{0});
    out.right = Matrix<Rational>(rows_total, b.rows(), Rational{0});

    std::size_t offset = 0;
    for (int k : degrees) {
        const Rational& ck = coeffs.coefficient(k);
        std::size_t seg = 1;
        for (int t = 0; t < k; ++t) seg *= d;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            auto pow_a = detail::tensor_power(detail::matrix_row(a, i), k);
            for (std::size_t t = 0; t < seg; ++t) out.left(offset + t, i) = ck * pow_a[t];
        }
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto pow_b = detail::tensor_power(detail::matrix_row(b, j), k);
            for (std::size_t t = 0; t < seg; ++t) out.right(offset + t, j) = pow_b[t];
        }
        offset += seg;
    }
    return out;
}

// True iff left * diag * right^T equals the target entry for entry (and in
// shape) with exact rational equality.
inline bool verify_reconstruction(const Decomposition& d, const Matrix<Rational>& target) {
    Matrix<Rational> rec = d.reconstruction();
    return rec.rows() == target.rows() && rec.cols() == target.cols() && rec == target;
}

// --- target builders shared by tests, the rank laws, and the CLI ------------

inline Matrix<Rational> hadamard_poly_apply(const Matrix<Rational>& m, const SupportFilter& coeffs) {
    Matrix<Rational> out(m.rows(), m.cols(), Rational{0});
    Matrix<Rational> power = Matrix<Rational>::ones(m.rows(), m.cols());
    for (int k = 0; k <= coeffs.max_degree(); ++k) {
        if (k > 0) power = power.hadamard(m);
        if (coeffs.keeps(k)) out = out + power.scaled(coeffs.coefficient(k));
    }
    return out;
}

inline Matrix<Rational> khatri_power_target(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                            int k) {
    return khatri_rao(b.transpose(), hadamard_power(a * b.transpose(), static_cast<unsigned>(k)));
}

inline Matrix<Rational> khatri_poly_target(const Matrix<Rational>& a, const Matrix<Rational>& b,
                                           const SupportFilter& coeffs) {
    return khatri_rao(b.transpose(), hadamard_poly_apply(a * b.transpose(), coeffs));
}

}  // namespace genrank
