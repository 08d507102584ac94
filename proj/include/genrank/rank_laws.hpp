// The predicted-rank formulas for every law, generic-pair samplers, the
// truncation-degree computation that reduces analytic Hadamard functions to
// polynomials, and the randomized empirical verification harness.
//
// "Generic" is operationalized as random sampling plus trial repetition:
// exceptional pairs live in the zero set of a fixed analytic function, so
// random rational points miss it with overwhelming probability. Reports
// record evidence, never certificates, and mismatches are data, not errors.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "activation.hpp"
#include "combinatorics.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"
#include "rank.hpp"

namespace genrank {

enum class LawKind {
    matmul,
    hadamard_power,
    poly,
    khatri_power,
    khatri_poly,
    analytic,
    analytic_khatri,
    zhang_blockdiag,
};

inline const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::matmul: return "matmul";
        case LawKind::hadamard_power: return "hadamard-power";
        case LawKind::poly: return "poly";
        case LawKind::khatri_power: return "khatri-power";
        case LawKind::khatri_poly: return "khatri-poly";
        case LawKind::analytic: return "analytic";
        case LawKind::analytic_khatri: return "analytic-khatri";
        case LawKind::zhang_blockdiag: return "zhang-blockdiag";
    }
    return "?";
}

inline LawKind law_kind_from_string(const std::string& s) {
    for (LawKind k : {LawKind::matmul, LawKind::hadamard_power, LawKind::poly,
                      LawKind::khatri_power, LawKind::khatri_poly, LawKind::analytic,
                      LawKind::analytic_khatri, LawKind::zhang_blockdiag})
        if (s == to_string(k)) return k;
    throw ConstraintError("unknown rank law '" + s + "'");
}

// A rank statement: which matrix family, with which parameters. `coeffs`
// carries the polynomial support for the poly/khatri-poly/zhang laws and the
// truncated surrogate for the analytic laws.
struct RankLaw {
    LawKind kind = LawKind::matmul;
    std::size_t d = 1;
    int k = 1;
    SupportFilter coeffs;

    static RankLaw matmul(std::size_t d) { return {LawKind::matmul, d, 0, {}}; }
    static RankLaw hadamard_power(std::size_t d, int k) {
        return {LawKind::hadamard_power, d, k, {}};
    }
    static RankLaw poly(std::size_t d, SupportFilter c) {
        return {LawKind::poly, d, 0, std::move(c)};
    }
    static RankLaw khatri_power(std::size_t d, int k) { return {LawKind::khatri_power, d, k, {}}; }
    static RankLaw khatri_poly(std::size_t d, SupportFilter c) {
        return {LawKind::khatri_poly, d, 0, std::move(c)};
    }
    static RankLaw zhang_blockdiag(std::size_t d, SupportFilter c) {
        return {LawKind::zhang_blockdiag, d, 0, std::move(c)};
    }

    bool uses_coeffs() const {
        return kind == LawKind::poly || kind == LawKind::khatri_poly || kind == LawKind::analytic ||
               kind == LawKind::analytic_khatri || kind == LawKind::zhang_blockdiag;
    }
};

namespace detail {

inline std::size_t min_with_count(std::size_t a, std::size_t b, const BigInt& count) {
    BigInt best = BigInt(std::min(a, b));
    if (count < best) best = count;
    return best.convert_to<std::size_t>();
}

inline BigInt poly_support_count(std::size_t d, const SupportFilter& coeffs, int shift) {
    BigInt acc = 0;
    for (int k = 0; k <= coeffs.max_degree(); ++k)
        if (coeffs.keeps(k)) acc += multiset_count(d, static_cast<std::size_t>(k + shift));
    return acc;
}

}  // namespace detail

// The exact generic-rank formula for the law on an m x n-target configuration
// (for Khatri-Rao laws the target has md rows built from an m x d factor).
inline std::size_t predicted_rank(const RankLaw& law, std::size_t m, std::size_t n) {
    switch (law.kind) {
        case LawKind::matmul:
            return detail::min_with_count(m, n, BigInt(law.d));
        case LawKind::hadamard_power:
            return detail::min_with_count(m, n, multiset_count(law.d, static_cast<std::size_t>(law.k)));
        case LawKind::poly:
            return detail::min_with_count(m, n, detail::poly_support_count(law.d, law.coeffs, 0));
        case LawKind::khatri_power:
            return detail::min_with_count(m * law.d, n,
                                          multiset_count(law.d, static_cast<std::size_t>(law.k) + 1));
        case LawKind::khatri_poly:
            return detail::min_with_count(m * law.d, n,
                                          detail::poly_support_count(law.d, law.coeffs, 1));
        case LawKind::analytic:
            return std::min(m, n);
        case LawKind::analytic_khatri:
            return std::min(m * law.d, n);
        case LawKind::zhang_blockdiag: {
            if (n % law.d != 0)
                throw ConstraintError("zhang-blockdiag law needs d | n, got d = " +
                                      std::to_string(law.d) + ", n = " + std::to_string(n));
            return detail::min_with_count(m * law.d, n,
                                          BigInt(law.d) * BigInt(law.coeffs.support_size()));
        }
    }
    return 0;
}

// Smallest K with sum_{k <= K, c_k != 0} multiset_count(d, k (+1 if khatri))
// >= target. Throws InsufficientSupportError when a polynomial stream runs out
// first (the degree condition fails).
inline std::size_t analytic_truncation_degree(std::size_t d, std::size_t target,
                                              const CoeffStream& stream, bool khatri) {
    constexpr std::size_t hard_cap = 4096;
    BigInt acc = 0;
    for (std::size_t k = 0;; ++k) {
        if (stream.max_degree && k > *stream.max_degree)
            throw InsufficientSupportError(
                "coefficient stream exhausted at degree " + std::to_string(*stream.max_degree) +
                " with accumulated dimension " + acc.str() + " < target " + std::to_string(target));
        if (k > hard_cap)
            throw InsufficientSupportError("no nonzero coefficients found up to degree " +
                                           std::to_string(hard_cap));
        if (stream.coefficient(k) != 0)
            acc += multiset_count(d, k + (khatri ? 1 : 0));
        if (acc >= BigInt(target)) return k;
    }
}

// Builds the analytic / analytic-khatri law for a concrete (m, n) cell by
// truncating the stream at the degree the theorems require.
inline RankLaw make_analytic_law(std::size_t d, std::size_t m, std::size_t n,
                                 const CoeffStream& stream, bool khatri) {
    const std::size_t target = khatri ? std::min(m * d, n) : std::min(m, n);
    const std::size_t K = analytic_truncation_degree(d, target, stream, khatri);
    std::vector<Rational> coeffs(K + 1);
    for (std::size_t k = 0; k <= K; ++k) coeffs[k] = stream.coefficient(k);
    RankLaw law;
    law.kind = khatri ? LawKind::analytic_khatri : LawKind::analytic;
    law.d = d;
    law.coeffs = SupportFilter(std::move(coeffs));
    return law;
}

// --- samplers ----------------------------------------------------------------

struct SamplerSpec {
    enum class Kind { integer, gaussian };
    Kind kind = Kind::integer;
    long long range = 100;  // integer sampler: entries uniform in [-range, range]

    static SamplerSpec integer(long long r = 100) { return {Kind::integer, r}; }
    static SamplerSpec gaussian() { return {Kind::gaussian, 0}; }
};

inline std::pair<Matrix<Rational>, Matrix<Rational>> sample_integer_pair(std::size_t m,
                                                                         std::size_t n,
                                                                         std::size_t d,
                                                                         long long range,
                                                                         std::uint64_t seed) {
    if (range < 1) throw ConstraintError("integer sampler range must be >= 1");
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<long long> dist(-range, range);
    Matrix<Rational> a(m, d), b(n, d);
    for (auto& v : a.data()) v = Rational(dist(gen));
    for (auto& v : b.data()) v = Rational(dist(gen));
    return {std::move(a), std::move(b)};
}

inline std::pair<Matrix<double>, Matrix<double>> sample_gaussian_pair(std::size_t m, std::size_t n,
                                                                      std::size_t d,
                                                                      std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix<double> a(m, d), b(n, d);
    for (auto& v : a.data()) v = dist(gen);
    for (auto& v : b.data()) v = dist(gen);
    return {std::move(a), std::move(b)};
}

// --- target construction ------------------------------------------------------

namespace detail {

// Zeroes B outside the Eq.-(bform) block pattern: column j keeps only the
// rows of the j-th n/d block.
template <typename S>
Matrix<S> mask_block_diagonal(const Matrix<S>& b, std::size_t d) {
    if (b.rows() % d != 0)
        throw ConstraintError("block-diagonal mask needs d | n");
    const std::size_t block = b.rows() / d;
    Matrix<S> out(b.rows(), b.cols(), S{0});
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = j * block; i < (j + 1) * block; ++i) out(i, j) = b(i, j);
    return out;
}

template <typename S>
Matrix<S> poly_apply(const Matrix<S>& m, const SupportFilter& coeffs) {
    Matrix<S> out(m.rows(), m.cols(), S{0});
    Matrix<S> power(m.rows(), m.cols(), S{1});
    for (int k = 0; k <= coeffs.max_degree(); ++k) {
        if (k > 0) power = power.hadamard(m);
        if (!coeffs.keeps(k)) continue;
        if constexpr (std::is_same_v<S, Rational>)
            out = out + power.scaled(coeffs.coefficient(k));
        else
            out = out + power.scaled(to_double(coeffs.coefficient(k)));
    }
    return out;
}

}  // namespace detail

// The matrix whose rank the law predicts, built from a sampled pair.
template <typename S>
Matrix<S> build_law_target(const RankLaw& law, const Matrix<S>& a, const Matrix<S>& b) {
    switch (law.kind) {
        case LawKind::matmul:
            return a * b.transpose();
        case LawKind::hadamard_power:
            return hadamard_power(a * b.transpose(), static_cast<unsigned>(law.k));
        case LawKind::poly:
        case LawKind::analytic:
            return detail::poly_apply(a * b.transpose(), law.coeffs);
        case LawKind::khatri_power:
            return khatri_rao(b.transpose(),
                              hadamard_power(a * b.transpose(), static_cast<unsigned>(law.k)));
        case LawKind::khatri_poly:
        case LawKind::analytic_khatri:
            return khatri_rao(b.transpose(), detail::poly_apply(a * b.transpose(), law.coeffs));
        case LawKind::zhang_blockdiag: {
            Matrix<S> masked = detail::mask_block_diagonal(b, law.d);
            return khatri_rao(masked.transpose(),
                              detail::poly_apply(a * masked.transpose(), law.coeffs));
        }
    }
    throw ConstraintError("build_law_target: unhandled law");
}

// --- empirical verification ---------------------------------------------------

struct RankReport {
    RankLaw law;
    std::size_t m = 0, n = 0;
    std::size_t predicted = 0;
    std::size_t trials = 0;
    SamplerSpec sampler;
    std::uint64_t master_seed = 0;
    std::map<std::size_t, std::size_t> empirical_ranks;  // rank -> how many trials hit it
    bool kruskal_checked = false;
    std::vector<std::uint64_t> mismatch_seeds;
    std::vector<std::uint64_t> kruskal_mismatch_seeds;

    std::size_t matches() const {
        auto it = empirical_ranks.find(predicted);
        std::size_t hit = it == empirical_ranks.end() ? 0 : it->second;
        return hit;
    }
    std::size_t empirical_min() const {
        return empirical_ranks.empty() ? 0 : empirical_ranks.begin()->first;
    }
    std::size_t empirical_max() const {
        return empirical_ranks.empty() ? 0 : empirical_ranks.rbegin()->first;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["law"] = to_string(law.kind);
        j["d"] = law.d;
        j["k"] = law.k;
        if (law.uses_coeffs()) {
            std::vector<std::string> cs;
            for (const auto& c : law.coeffs.coefficients) cs.push_back(c.str());
            j["coeffs"] = cs;
        }
        j["m"] = m;
        j["n"] = n;
        j["predicted"] = predicted;
        j["trials"] = trials;
        j["sampler"] = sampler.kind == SamplerSpec::Kind::integer ? "integer" : "gaussian";
        if (sampler.kind == SamplerSpec::Kind::integer) j["range"] = sampler.range;
        j["seed"] = master_seed;
        j["empirical_min"] = empirical_min();
        j["empirical_max"] = empirical_max();
        j["matches"] = matches();
        j["kruskal_checked"] = kruskal_checked;
        j["mismatch_seeds"] = mismatch_seeds;
        j["kruskal_mismatch_seeds"] = kruskal_mismatch_seeds;
        return j;
    }
};

// Runs `trials` independent draws, compares the computed rank (exact for the
// integer sampler, SVD for the gaussian one) against the law's prediction and
// records the seeds of disagreeing trials. Trial t uses derive_seed(seed, t),
// so any logged trial reproduces in isolation.
inline RankReport empirical_rank_experiment(const RankLaw& law, std::size_t m, std::size_t n,
                                            std::size_t trials, SamplerSpec sampler,
                                            std::uint64_t seed, bool check_kruskal = false,
                                            TolerancePolicy float_policy = TolerancePolicy::relative(),
                                            std::size_t budget = kDefaultSubsetBudget) {
    RankReport report;
    report.law = law;
    report.m = m;
    report.n = n;
    report.trials = trials;
    report.sampler = sampler;
    report.master_seed = seed;
    report.predicted = predicted_rank(law, m, n);
    report.kruskal_checked = check_kruskal;

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        std::size_t empirical = 0;
        if (sampler.kind == SamplerSpec::Kind::integer) {
            auto [a, b] = sample_integer_pair(m, n, law.d, sampler.range, trial_seed);
            Matrix<Rational> target = build_law_target(law, a, b);
            empirical = rank_exact(target).rank;
            if (check_kruskal && kruskal_rank(target, budget) != report.predicted)
                report.kruskal_mismatch_seeds.push_back(trial_seed);
        } else {
            auto [a, b] = sample_gaussian_pair(m, n, law.d, trial_seed);
            Matrix<double> target = build_law_target(law, a, b);
            empirical = rank_float(target, float_policy).rank;
        }
        ++report.empirical_ranks[empirical];
        if (empirical != report.predicted) report.mismatch_seeds.push_back(trial_seed);
    }
    return report;
}

}  // namespace genrank
