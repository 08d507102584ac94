// Activation functions: float evaluation for the network path and exact
// rational Taylor coefficients (of the function and of its derivative,
// recentred at the expansion point) for the truncation machinery.
//
// tanh and the logistic series come from the power-series recurrences of
// t' = 1 - t^2 and s' = s - s^2. The gelu series carries a common positive
// factor 1/sqrt(2*pi) on its non-constant part; the exact-series surface
// returns the rational cofactors, which preserves the coefficient support
// (the only thing the rank laws and truncation degrees consume).

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace genrank {

// A Taylor-coefficient source: exact rational coefficients on demand, with a
// final degree when the underlying function is a polynomial.
struct CoeffStream {
    std::function<Rational(std::size_t)> coefficient;
    std::optional<std::size_t> max_degree;

    bool nonzero_at(std::size_t k) const {
        if (max_degree && k > *max_degree) return false;
        return coefficient(k) != 0;
    }
};

class Activation {
public:
    enum class Kind { polynomial, tanh_fn, logistic, arctan, gelu, custom };

    static Activation tanh() { return Activation(Kind::tanh_fn, "tanh"); }
    static Activation logistic() { return Activation(Kind::logistic, "logistic"); }
    static Activation arctan() { return Activation(Kind::arctan, "arctan"); }
    static Activation gelu() { return Activation(Kind::gelu, "gelu"); }

    static Activation polynomial(std::vector<Rational> coeffs) {
        Activation a(Kind::polynomial, "poly");
        while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
        a.poly_coeffs_ = std::move(coeffs);
        if (a.poly_coeffs_.empty()) a.poly_coeffs_.push_back(Rational{0});
        return a;
    }

    static Activation custom(std::string name, std::function<double(double)> value,
                             std::function<double(double)> derivative, double center,
                             double radius, std::function<Rational(std::size_t)> derivative_coeff,
                             std::optional<std::size_t> derivative_degree = std::nullopt) {
        Activation a(Kind::custom, std::move(name));
        a.custom_value_ = std::move(value);
        a.custom_derivative_ = std::move(derivative);
        a.center_ = center;
        a.radius_ = radius;
        a.custom_derivative_coeff_ = std::move(derivative_coeff);
        a.custom_derivative_degree_ = derivative_degree;
        return a;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    // eta: the point the Taylor machinery expands around.
    double center() const { return center_; }

    // Radius of convergence of the series at the center; inf for entire kinds.
    double radius() const { return radius_; }

    bool restricts_to_polynomial() const {
        return kind_ == Kind::polynomial ||
               (kind_ == Kind::custom && custom_derivative_degree_.has_value());
    }

    double value(double x) const {
        switch (kind_) {
            case Kind::tanh_fn: return std::tanh(x);
            case Kind::logistic: return 1.0 / (1.0 + std::exp(-x));
            case Kind::arctan: return std::atan(x);
            case Kind::gelu: return x * normal_cdf(x);
            case Kind::polynomial: return horner(poly_coeffs_, x);
            case Kind::custom: return custom_value_(x);
        }
        return 0.0;
    }

    double derivative(double x) const {
        switch (kind_) {
            case Kind::tanh_fn: {
                double t = std::tanh(x);
                return 1.0 - t * t;
            }
            case Kind::logistic: {
                double s = 1.0 / (1.0 + std::exp(-x));
                return s * (1.0 - s);
            }
            case Kind::arctan: return 1.0 / (1.0 + x * x);
            case Kind::gelu: return normal_cdf(x) + x * normal_pdf(x);
            case Kind::polynomial: {
                std::vector<Rational> d = differentiate(poly_coeffs_);
                return horner(d, x);
            }
            case Kind::custom: return custom_derivative_(x);
        }
        return 0.0;
    }

    // Exact coefficients of psi(center + x), first `count` of them.
    std::vector<Rational> value_series(std::size_t count) const {
        switch (kind_) {
            case Kind::tanh_fn: return tanh_series(count);
            case Kind::logistic: return logistic_series(count);
            case Kind::arctan: {
                std::vector<Rational> c(count, Rational{0});
                for (std::size_t j = 0; 2 * j + 1 < count; ++j)
                    c[2 * j + 1] = Rational((j % 2 == 0) ? 1 : -1, 2 * j + 1);
                return c;
            }
            case Kind::gelu: {
                // x/2 + (1/sqrt(2 pi)) * sum_j (-1)^j x^{2j+2} / (j! 2^j (2j+1));
                // rational cofactors only, see the header note.
                std::vector<Rational> c(count, Rational{0});
                if (count > 1) c[1] = Rational(1, 2);
                Rational fact_pow = 1;  // j! * 2^j
                for (std::size_t j = 0; 2 * j + 2 < count; ++j) {
                    if (j > 0) fact_pow *= Rational(2 * j);
                    c[2 * j + 2] = Rational((j % 2 == 0) ? 1 : -1) / (fact_pow * Rational(2 * j + 1));
                }
                return c;
            }
            case Kind::polynomial: {
                std::vector<Rational> c = poly_coeffs_;
                c.resize(count, Rational{0});
                return c;
            }
            case Kind::custom:
                throw ConstraintError("custom activation exposes only its derivative series");
        }
        return {};
    }

    // Exact coefficients of psi'(center + x), first `count` of them.
    std::vector<Rational> derivative_series(std::size_t count) const {
        if (kind_ == Kind::custom) {
            std::vector<Rational> c(count, Rational{0});
            for (std::size_t k = 0; k < count; ++k) {
                if (custom_derivative_degree_ && k > *custom_derivative_degree_) break;
                c[k] = custom_derivative_coeff_(k);
            }
            return c;
        }
        std::vector<Rational> v = value_series(count + 1);
        std::vector<Rational> c(count);
        for (std::size_t k = 0; k < count; ++k) c[k] = Rational(k + 1) * v[k + 1];
        return c;
    }

    CoeffStream value_stream() const {
        Activation self = *this;
        std::optional<std::size_t> deg;
        if (kind_ == Kind::polynomial) deg = poly_coeffs_.size() - 1;
        return {[self](std::size_t k) {
                    auto v = self.value_series(k + 1);
                    return v[k];
                },
                deg};
    }

    CoeffStream derivative_stream() const {
        Activation self = *this;
        std::optional<std::size_t> deg;
        if (kind_ == Kind::polynomial) deg = poly_coeffs_.size() >= 2 ? poly_coeffs_.size() - 2 : 0;
        if (kind_ == Kind::custom) deg = custom_derivative_degree_;
        return {[self](std::size_t k) {
                    auto v = self.derivative_series(k + 1);
                    return v[k];
                },
                deg};
    }

    // psi's own coefficients; polynomial kind only.
    const std::vector<Rational>& polynomial_coefficients() const {
        if (kind_ != Kind::polynomial)
            throw ConstraintError("polynomial_coefficients: activation '" + name_ +
                                  "' is not a polynomial");
        return poly_coeffs_;
    }

private:
    Activation(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {
        switch (kind_) {
            case Kind::tanh_fn: radius_ = std::acos(-1.0) / 2.0; break;  // poles at +/- i pi/2
            case Kind::logistic: radius_ = std::acos(-1.0); break;       // poles at +/- i pi
            case Kind::arctan: radius_ = 1.0; break;                     // poles at +/- i
            default: radius_ = std::numeric_limits<double>::infinity(); break;
        }
    }

    static double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
    static double normal_pdf(double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
    }

    static double horner(const std::vector<Rational>& coeffs, double x) {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + to_double(coeffs[i]);
        return acc;
    }

    static std::vector<Rational> differentiate(const std::vector<Rational>& coeffs) {
        if (coeffs.size() <= 1) return {Rational{0}};
        std::vector<Rational> d(coeffs.size() - 1);
        for (std::size_t k = 0; k + 1 < coeffs.size(); ++k) d[k] = Rational(k + 1) * coeffs[k + 1];
        return d;
    }

    // t' = 1 - t^2, t(0) = 0.
    static std::vector<Rational> tanh_series(std::size_t count) {
        std::vector<Rational> t(std::max<std::size_t>(count, 1), Rational{0});
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
            Rational conv = 0;
            for (std::size_t i = 0; i <= k; ++i) conv += t[i] * t[k - i];
            Rational rhs = (k == 0 ? Rational{1} : Rational{0}) - conv;
            t[k + 1] = rhs / Rational(k + 1);
        }
        t.resize(count);
        return t;
    }

    // s' = s - s^2, s(0) = 1/2; recentred at 0 means coefficients of s itself.
    static std::vector<Rational> logistic_series(std::size_t count) {
        std::vector<Rational> s(std::max<std::size_t>(count, 1), Rational{0});
        s[0] = Rational(1, 2);
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            Rational conv = 0;
            for (std::size_t i = 0; i <= k; ++i) conv += s[i] * s[k - i];
            s[k + 1] = (s[k] - conv) / Rational(k + 1);
        }
        s.resize(count);
        return s;
    }

    Kind kind_;
    std::string name_;
    double center_ = 0.0;
    double radius_ = std::numeric_limits<double>::infinity();
    std::vector<Rational> poly_coeffs_;
    std::function<double(double)> custom_value_;
    std::function<double(double)> custom_derivative_;
    std::function<Rational(std::size_t)> custom_derivative_coeff_;
    std::optional<std::size_t> custom_derivative_degree_;
};

// "tanh" | "logistic" | "arctan" | "gelu" | "poly:c0,c1,..." (rationals).
inline Activation parse_activation(const std::string& text) {
    if (text == "tanh") return Activation::tanh();
    if (text == "logistic") return Activation::logistic();
    if (text == "arctan") return Activation::arctan();
    if (text == "gelu") return Activation::gelu();
    if (text.rfind("poly:", 0) == 0) {
        std::vector<Rational> coeffs;
        std::string rest = text.substr(5);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string token =
                rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (token.empty()) throw ConstraintError("parse_activation: empty coefficient");
            coeffs.push_back(rational_from_string(token));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (coeffs.empty()) throw ConstraintError("parse_activation: poly needs coefficients");
        return Activation::polynomial(std::move(coeffs));
    }
    throw ConstraintError("parse_activation: unknown activation '" + text + "'");
}

}  // namespace genrank
