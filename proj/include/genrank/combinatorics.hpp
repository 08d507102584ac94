// Weak compositions, multiset counts, and the fiber machinery behind the
// Khatri-Rao decompositions. Everything is exact integer arithmetic and every
// enumeration is lexicographic, so downstream column orders are reproducible.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace genrank {

inline BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result *= BigInt(n - k + i);
        result /= BigInt(i);
    }
    return result;
}

// Number of multisets of cardinality k from [d]: C(k+d-1, k).
inline BigInt multiset_count(std::size_t d, std::size_t k) {
    if (d == 0) throw ConstraintError("multiset_count: d must be >= 1");
    return binomial(k + d - 1, k);
}

// k1,...,kd >= 0. Compared lexicographically (first part changes slowest).
struct WeakComposition {
    std::vector<int> parts;

    WeakComposition() = default;
    explicit WeakComposition(std::vector<int> p) : parts(std::move(p)) {}
    WeakComposition(std::initializer_list<int> p) : parts(p) {}

    std::size_t size() const { return parts.size(); }
    int operator[](std::size_t i) const { return parts[i]; }

    int sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

    std::size_t support_size() const {
        return static_cast<std::size_t>(std::count_if(parts.begin(), parts.end(),
                                                      [](int p) { return p != 0; }));
    }

    auto operator<=>(const WeakComposition&) const = default;

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts[i]);
        }
        return s + ")";
    }
};

namespace detail {

inline void enumerate_compositions_rec(std::size_t d, int budget, bool exact_sum,
                                       std::vector<int>& prefix,
                                       std::vector<WeakComposition>& out) {
    if (prefix.size() + 1 == d) {
        if (exact_sum) {
            prefix.push_back(budget);
            out.emplace_back(prefix);
            prefix.pop_back();
        } else {
            for (int last = 0; last <= budget; ++last) {
                prefix.push_back(last);
                out.emplace_back(prefix);
                prefix.pop_back();
            }
        }
        return;
    }
    for (int p = 0; p <= budget; ++p) {
        prefix.push_back(p);
        enumerate_compositions_rec(d, budget - p, exact_sum, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace detail

// lambda(k): all weak compositions of k into d parts, lexicographic.
inline std::vector<WeakComposition> enumerate_lambda(std::size_t d, int k) {
    if (d == 0) throw ConstraintError("enumerate_lambda: d must be >= 1");
    if (k < 0) throw ConstraintError("enumerate_lambda: k must be >= 0");
    std::vector<WeakComposition> out;
    std::vector<int> prefix;
    detail::enumerate_compositions_rec(d, k, /*exact_sum=*/true, prefix, out);
    return out;
}

// Coefficients c_0..c_K; a composition with part-sum k survives iff c_k != 0.
struct SupportFilter {
    std::vector<Rational> coefficients;

    SupportFilter() = default;
    explicit SupportFilter(std::vector<Rational> c) : coefficients(std::move(c)) {}

    int max_degree() const { return static_cast<int>(coefficients.size()) - 1; }

    bool keeps(int k) const {
        return k >= 0 && k < static_cast<int>(coefficients.size()) &&
               coefficients[static_cast<std::size_t>(k)] != 0;
    }

    const Rational& coefficient(int k) const { return coefficients[static_cast<std::size_t>(k)]; }

    std::size_t support_size() const {
        std::size_t n = 0;
        for (const auto& c : coefficients)
            if (c != 0) ++n;
        return n;
    }
};

// Lambda(K): all weak compositions with part-sum <= K, lexicographic; with a
// filter, only those whose part-sum k has c_k != 0.
inline std::vector<WeakComposition> enumerate_Lambda(std::size_t d, int K,
                                                     const SupportFilter* filter = nullptr) {
    if (d == 0) throw ConstraintError("enumerate_Lambda: d must be >= 1");
    if (K < 0) throw ConstraintError("enumerate_Lambda: K must be >= 0");
    std::vector<WeakComposition> all;
    std::vector<int> prefix;
    detail::enumerate_compositions_rec(d, K, /*exact_sum=*/false, prefix, all);
    if (!filter) return all;
    std::vector<WeakComposition> kept;
    for (auto& comp : all)
        if (filter->keeps(comp.sum())) kept.push_back(std::move(comp));
    return kept;
}

// k! / (k1! ... kd!) computed as a product of binomials of partial sums.
inline BigInt multinomial(const WeakComposition& comp) {
    BigInt result = 1;
    std::size_t acc = 0;
    for (int p : comp.parts) {
        if (p < 0) throw ConstraintError("multinomial: negative part");
        acc += static_cast<std::size_t>(p);
        result *= binomial(acc, static_cast<std::size_t>(p));
    }
    return result;
}

// phi(i, k) = k + e_i, the surjection [d] x lambda(k) ->> lambda(k+1).
// i is a zero-based coordinate.
inline WeakComposition fiber_map(std::size_t i, const WeakComposition& comp) {
    if (i >= comp.size()) throw ConstraintError("fiber_map: coordinate out of range");
    WeakComposition out = comp;
    ++out.parts[i];
    return out;
}

// s preimage pairs (i, k) under phi with pairwise-distinct images in
// lambda(k+1) and at most `cap` pairs per coordinate. Placement: images are
// grouped by support size (smallest first, forced placements first), each goes
// to its least-loaded admissible coordinate, then the selection is pruned from
// the most-loaded coordinates down to s, newest placements first.
inline std::vector<std::pair<std::size_t, WeakComposition>> balanced_fiber_transversal(
    std::size_t d, int k, std::size_t s, std::size_t cap) {
    if (d == 0) throw ConstraintError("balanced_fiber_transversal: d must be >= 1");
    const BigInt total_images = multiset_count(d, static_cast<std::size_t>(k) + 1);
    if (BigInt(s) > total_images || s > cap * d)
        throw ConstraintError("balanced_fiber_transversal: s = " + std::to_string(s) +
                              " exceeds min(cap*d, multiset_count(d,k+1))");

    std::vector<WeakComposition> images = enumerate_lambda(d, k + 1);
    std::stable_sort(images.begin(), images.end(),
                     [](const WeakComposition& a, const WeakComposition& b) {
                         return a.support_size() < b.support_size();
                     });

    struct Placement {
        std::size_t coord;
        WeakComposition image;
    };
    std::vector<Placement> placed;
    std::vector<std::size_t> load(d, 0);
    for (const auto& image : images) {
        std::size_t best = d;
        for (std::size_t i = 0; i < d; ++i) {
            if (image[i] == 0) continue;
            if (best == d || load[i] < load[best]) best = i;
        }
        placed.push_back({best, image});
        ++load[best];
    }

    while (placed.size() > s) {
        std::size_t worst =
            static_cast<std::size_t>(std::max_element(load.begin(), load.end()) - load.begin());
        for (std::size_t t = placed.size(); t-- > 0;) {
            if (placed[t].coord == worst) {
                placed.erase(placed.begin() + static_cast<std::ptrdiff_t>(t));
                --load[worst];
                break;
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        if (load[i] > cap)
            throw ConstraintError("balanced_fiber_transversal: coordinate " + std::to_string(i) +
                                  " exceeds cap after pruning");

    std::vector<std::pair<std::size_t, WeakComposition>> out;
    out.reserve(placed.size());
    for (const auto& p : placed) {
        WeakComposition preimage = p.image;
        --preimage.parts[p.coord];
        out.emplace_back(p.coord, std::move(preimage));
    }
    return out;
}

// Visits every r-subset of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
    if (r > n) return;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(static_cast<const std::vector<std::size_t>&>(idx));
        bool advanced = false;
        for (std::size_t i = r; i-- > 0;) {
            if (idx[i] < n - r + i) {
                ++idx[i];
                for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return;
    }
}

}  // namespace genrank
