// Scalar backends and small numeric helpers shared across the library.
//
// Exact arithmetic uses boost::multiprecision (header-only): cpp_rational for
// matrix entries, cpp_int for counts that outgrow machine words (binomials,
// fraction-free pivots).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace genrank {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Parses "p/q" or a plain integer; these are the two fixture spellings.
inline Rational rational_from_string(const std::string& token) {
    try {
        return Rational(token);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + token + "'");
    }
}

// SplitMix64 step; the library's one way of deriving child seeds so that every
// trial is reproducible in isolation from its logged seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

// Saturating conversion for report fields; desk-scale values fit, astronomical
// counts clamp instead of wrapping.
inline long long clamp_to_ll(const BigInt& v) {
    static const BigInt hi = std::numeric_limits<long long>::max();
    static const BigInt lo = std::numeric_limits<long long>::min();
    if (v > hi) return std::numeric_limits<long long>::max();
    if (v < lo) return std::numeric_limits<long long>::min();
    return v.template convert_to<long long>();
}

}  // namespace genrank
