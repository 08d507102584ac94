// Two-layer network machinery: forward map, Khatri-Rao Jacobians, the
// rank-at-initialization test, capacity predicates, and the width-doubling
// interpolation solver (damped Gauss-Newton on a shifted target, assembled as
// two weight blocks with oppositely scaled output weights).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "activation.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "numeric.hpp"
#include "rank.hpp"

namespace genrank {

// W is d x m (column i = weights of neuron i); b and v have length m.
struct NetworkParams {
    Matrix<double> W;
    std::vector<double> b;
    std::vector<double> v;

    std::size_t input_dim() const { return W.rows(); }
    std::size_t width() const { return W.cols(); }
};

inline void check_network_shapes(const NetworkParams& p, const Matrix<double>& x) {
    if (p.b.size() != p.width() || p.v.size() != p.width())
        throw ShapeError("network params: W is " + p.W.shape_string() + " but |b| = " +
                         std::to_string(p.b.size()) + ", |v| = " + std::to_string(p.v.size()));
    if (x.rows() != p.input_dim())
        throw ShapeError("network input: X is " + x.shape_string() + ", expected " +
                         std::to_string(p.input_dim()) + " rows");
}

namespace detail {

// Preactivation matrix W^T X + b 1^T, stored m x n.
inline Matrix<double> preactivation(const NetworkParams& p, const Matrix<double>& x) {
    const std::size_t m = p.width(), n = x.cols(), d = p.input_dim();
    Matrix<double> pre(m, n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = p.b[i];
            for (std::size_t l = 0; l < d; ++l) acc += p.W(l, i) * x(l, j);
            pre(i, j) = acc;
        }
    return pre;
}

}  // namespace detail

// h(W, b, v, X) = psi(X^T W + 1 b^T) v, psi applied coordinate-wise.
inline std::vector<double> forward(const NetworkParams& p, const Matrix<double>& x,
                                   const Activation& act) {
    check_network_shapes(p, x);
    Matrix<double> pre = detail::preactivation(p, x);
    std::vector<double> out(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p.width(); ++i) acc += p.v[i] * act.value(pre(i, j));
        out[j] = acc;
    }
    return out;
}

// Transpose-Jacobian of h with respect to vec(W) (columns of W stacked,
// neuron-major): diag(v) psi'(W^T X + b 1^T) (Khatri-Rao) X, an md x n matrix
// whose row i*d + l carries v_i psi'(preactivation(i, j)) X(l, j).
inline Matrix<double> jacobian_wrt_W(const NetworkParams& p, const Matrix<double>& x,
                                     const Activation& act) {
    check_network_shapes(p, x);
    const std::size_t m = p.width(), n = x.cols(), d = p.input_dim();
    Matrix<double> pre = detail::preactivation(p, x);
    Matrix<double> jac(m * d, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = p.v[i] * act.derivative(pre(i, j));
            for (std::size_t l = 0; l < d; ++l) jac(i * d + l, j) = w * x(l, j);
        }
    return jac;
}

// Transpose-Jacobian with respect to all of (W, b, v): the W block above,
// then m rows v_i psi'(.) for b, then m rows psi(.) for v. (md + 2m) x n.
inline Matrix<double> full_jacobian(const NetworkParams& p, const Matrix<double>& x,
                                    const Activation& act) {
    check_network_shapes(p, x);
    const std::size_t m = p.width(), n = x.cols(), d = p.input_dim();
    Matrix<double> pre = detail::preactivation(p, x);
    Matrix<double> jac(m * d + 2 * m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dval = act.derivative(pre(i, j));
            for (std::size_t l = 0; l < d; ++l) jac(i * d + l, j) = p.v[i] * dval * x(l, j);
            jac(m * d + i, j) = p.v[i] * dval;
            jac(m * d + m + i, j) = act.value(pre(i, j));
        }
    return jac;
}

// How psi' is turned into the function phi applied near zero. The proof's
// surrounding argument needs psi' recentred at eta (the default); the literal
// "psi' - eta" constant-shift reading is kept available for comparison.
enum class PhiConvention { recenter, subtract_center };

inline double apply_phi(const Activation& act, PhiConvention conv, double x) {
    return conv == PhiConvention::recenter ? act.derivative(act.center() + x)
                                           : act.derivative(x) - act.center();
}

struct InitializationRank {
    std::size_t rank = 0;
    double rho = 1.0;
    Matrix<double> W0;  // already scaled by 1/rho, d x m
    bool degenerate_data = false;
    RankResult detail;
};

// Draws W0 with iid standard normal entries, scales it so every entry of
// W0^T X lands within safety * radius of the expansion point, and returns the
// numerical rank of phi(W0^T X) (Khatri-Rao) X. rho = 1 when the radius is
// infinite and the entries are already modest.
inline InitializationRank rank_at_initialization(const Matrix<double>& x, std::size_t m,
                                                 const Activation& act, std::uint64_t seed,
                                                 TolerancePolicy tol = TolerancePolicy::relative(),
                                                 double safety = 0.5,
                                                 PhiConvention conv = PhiConvention::recenter) {
    if (m == 0) throw ConstraintError("rank_at_initialization: m must be >= 1");
    const std::size_t d = x.rows(), n = x.cols();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix<double> w0(d, m);
    for (auto& v : w0.data()) v = dist(gen);

    Matrix<double> pre(m, n, 0.0);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < d; ++l) acc += w0(l, i) * x(l, j);
            pre(i, j) = acc;
            max_abs = std::max(max_abs, std::abs(acc));
        }

    double rho = 1.0;
    if (std::isfinite(act.radius())) {
        rho = std::max(1.0, max_abs / (safety * act.radius()));
    } else if (max_abs > 1.0) {
        rho = max_abs;
    }

    InitializationRank out;
    out.rho = rho;
    out.W0 = w0.map([rho](double v) { return v / rho; });
    for (std::size_t j = 0; j < n; ++j) {
        bool all_zero = true;
        for (std::size_t l = 0; l < d && all_zero; ++l) all_zero = x(l, j) == 0.0;
        if (all_zero) out.degenerate_data = true;
    }

    Matrix<double> phi_mat =
        pre.map([&](double v) { return apply_phi(act, conv, v / rho); });
    out.detail = rank_float(khatri_rao(phi_mat, x), tol);
    out.rank = out.detail.rank;
    return out;
}

// --- capacity predicates -------------------------------------------------------

enum class CapacityReason {
    thm61_satisfied,
    sard_param_count,
    sard_poly_rank,
    m_odd,
    width_insufficient,
    degree_condition_failed,
};

inline const char* to_string(CapacityReason r) {
    switch (r) {
        case CapacityReason::thm61_satisfied: return "thm61_satisfied";
        case CapacityReason::sard_param_count: return "sard_param_count";
        case CapacityReason::sard_poly_rank: return "sard_poly_rank";
        case CapacityReason::m_odd: return "m_odd";
        case CapacityReason::width_insufficient: return "width_insufficient";
        case CapacityReason::degree_condition_failed: return "degree_condition_failed";
    }
    return "?";
}

struct CapacityVerdict {
    bool surjective_predicted = false;
    CapacityReason reason = CapacityReason::thm61_satisfied;
    std::vector<std::pair<std::string, long long>> bound_values;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["surjective_predicted"] = surjective_predicted;
        j["reason"] = to_string(reason);
        nlohmann::json bounds = nlohmann::json::object();
        for (const auto& [name, value] : bound_values) bounds[name] = value;
        j["bound_values"] = bounds;
        return j;
    }
};

namespace detail {

// sum_{k>=1} 1{c_k != 0} multiset_count(d, k) over psi's coefficients,
// computed from the derivative series (c_k != 0, k >= 1 <=> derivative
// coefficient k-1 nonzero); accumulation stops once the cap is reached.
inline BigInt polynomial_degree_sum(const Activation& act, std::size_t d, const BigInt& cap) {
    CoeffStream stream = act.derivative_stream();
    BigInt acc = 0;
    const std::size_t top = stream.max_degree ? *stream.max_degree : 0;
    for (std::size_t j = 0; j <= top; ++j) {
        if (stream.nonzero_at(j)) acc += multiset_count(d, j + 1);
        if (acc >= cap) break;
    }
    return acc;
}

}  // namespace detail

// Pure integer arithmetic on (m, n, d) and psi's coefficient support; the
// data matrix is never inspected. Checks, in order: the two provable
// non-surjectivity conditions, then the structural requirements of the
// width-doubling construction, then the polynomial degree condition.
inline CapacityVerdict capacity_verdict(std::size_t m, std::size_t n, std::size_t d,
                                        const Activation& act) {
    CapacityVerdict out;
    const bool poly = act.restricts_to_polynomial();
    const BigInt cap = BigInt(n) + 1;
    BigInt degree_sum = poly ? detail::polynomial_degree_sum(act, d, cap) : BigInt(-1);

    out.bound_values = {
        {"m", static_cast<long long>(m)},
        {"n", static_cast<long long>(n)},
        {"d", static_cast<long long>(d)},
        {"md", static_cast<long long>(m * d)},
        {"two_n", static_cast<long long>(2 * n)},
        {"m_times_d_plus_2", static_cast<long long>(m * (d + 2))},
        {"degree_sum", poly ? clamp_to_ll(degree_sum) : -1},
        {"n_minus_2m", static_cast<long long>(n) - 2 * static_cast<long long>(m)},
    };

    if (m * (d + 2) < n) {
        out.reason = CapacityReason::sard_param_count;
        return out;
    }
    if (poly && degree_sum < BigInt(static_cast<long long>(n) - 2 * static_cast<long long>(m))) {
        out.reason = CapacityReason::sard_poly_rank;
        return out;
    }
    if (m % 2 != 0) {
        out.reason = CapacityReason::m_odd;
        return out;
    }
    if (m * d < 2 * n) {
        out.reason = CapacityReason::width_insufficient;
        return out;
    }
    if (poly && degree_sum < BigInt(n)) {
        out.reason = CapacityReason::degree_condition_failed;
        return out;
    }
    out.surjective_predicted = true;
    out.reason = CapacityReason::thm61_satisfied;
    return out;
}

struct CapacityRefused : std::runtime_error {
    CapacityVerdict verdict;
    explicit CapacityRefused(CapacityVerdict v)
        : std::runtime_error(std::string("capacity verdict refuses interpolation: ") +
                             to_string(v.reason)),
          verdict(std::move(v)) {}
};

// --- width-doubling interpolation solver ---------------------------------------

struct SolverConfig {
    double tol = 1e-8;             // convergence: assembled infinity-norm residual
    int max_iterations = 200;      // Gauss-Newton iterations per epsilon level
    int max_restarts = 5;          // fresh W0 draws
    int max_epsilon_levels = 8;    // epsilon = 1, 1/2, ..., 2^-(levels-1)
    double lambda_init = 1e-3;     // Levenberg-Marquardt damping schedule
    double lambda_increase = 10.0;
    double lambda_decrease = 0.3;
    double safety = 0.5;           // fraction of the convergence radius used by rho
    bool force = false;            // run despite a negative capacity verdict
    PhiConvention phi = PhiConvention::recenter;
    TolerancePolicy rank_tolerance = TolerancePolicy::relative();
};

struct TraceEntry {
    int restart = 0;
    double epsilon = 1.0;
    int iteration = 0;
    double lambda = 0.0;
    double residual_norm = 0.0;  // infinity norm, already divided by epsilon

    nlohmann::json to_json() const {
        return {{"restart", restart},
                {"epsilon", epsilon},
                {"iteration", iteration},
                {"lambda", lambda},
                {"residual", residual_norm}};
    }
};

struct InterpolationResult {
    bool converged = false;
    NetworkParams params;          // assembled width-m parameters
    double residual = std::numeric_limits<double>::infinity();  // ||h - y||_inf
    double epsilon = 1.0;          // accepted epsilon
    int restarts_used = 0;
    std::size_t init_rank = 0;     // Jacobian rank at the accepted initialization
    std::vector<TraceEntry> trace;
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Damped Gauss-Newton for F(W) = target, minimum-norm steps through the
// n x n normal matrix J J^T + lambda I. Returns true on convergence.
inline bool lm_solve(const Matrix<double>& x, const std::vector<double>& target,
                     Matrix<double>& w, const std::vector<double>& bias,
                     const std::vector<double>& v0, const Activation& act,
                     const SolverConfig& cfg, double epsilon, int restart,
                     std::vector<TraceEntry>& trace) {
    const std::size_t n = x.cols();
    const std::size_t k = w.rows() * w.cols();
    double lambda = cfg.lambda_init;

    auto residual_of = [&](const Matrix<double>& cand) {
        std::vector<double> r = forward({cand, bias, v0}, x, act);
        for (std::size_t j = 0; j < n; ++j) r[j] -= target[j];
        return r;
    };

    std::vector<double> r = residual_of(w);
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const double rn = inf_norm(r) / epsilon;
        trace.push_back({restart, epsilon, iter, lambda, rn});
        if (rn < cfg.tol) return true;

        Matrix<double> jt = jacobian_wrt_W({w, bias, v0}, x, act);  // k x n
        Eigen::MatrixXd J(n, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t j = 0; j < n; ++j)
                J(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) = jt(a, j);
        Eigen::VectorXd rv(n);
        for (std::size_t j = 0; j < n; ++j) rv(static_cast<Eigen::Index>(j)) = r[j];

        Eigen::MatrixXd normal = J * J.transpose();
        normal.diagonal().array() += lambda;
        Eigen::VectorXd u = normal.ldlt().solve(rv);
        Eigen::VectorXd delta = -J.transpose() * u;

        // delta is indexed like vec(W): neuron-major, coordinate i*d + l.
        Matrix<double> w_try = w;
        {
            const std::size_t d = w.rows(), m = w.cols();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t l = 0; l < d; ++l)
                    w_try(l, i) += delta(static_cast<Eigen::Index>(i * d + l));
        }

        std::vector<double> r_try = residual_of(w_try);
        if (two_norm(r_try) < two_norm(r)) {
            w = std::move(w_try);
            r = std::move(r_try);
            lambda = std::max(lambda * cfg.lambda_decrease, 1e-14);
        } else {
            lambda *= cfg.lambda_increase;
            if (lambda > 1e10) return false;
        }
    }
    return inf_norm(r) / epsilon < cfg.tol;
}

}  // namespace detail

// Assembles [W W0] with output weights [v0/eps; -(1-eps) v0/eps] and biases
// eta * ones, realizing (1/eps) F(W) - ((1-eps)/eps) F(W0).
inline NetworkParams assemble_doubled(const Matrix<double>& w, const Matrix<double>& w0,
                                      const std::vector<double>& v0, double eta, double epsilon) {
    const std::size_t d = w.rows(), mh = w.cols();
    if (w0.rows() != d || w0.cols() != mh) throw ShapeError("assemble_doubled: half shapes differ");
    NetworkParams p;
    p.W = Matrix<double>(d, 2 * mh);
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t i = 0; i < mh; ++i) {
            p.W(l, i) = w(l, i);
            p.W(l, mh + i) = w0(l, i);
        }
    p.b.assign(2 * mh, eta);
    p.v.resize(2 * mh);
    for (std::size_t i = 0; i < mh; ++i) {
        p.v[i] = v0[i] / epsilon;
        p.v[mh + i] = -(1.0 - epsilon) * v0[i] / epsilon;
    }
    return p;
}

// Width-doubling interpolation. Solves the half-width network onto the target
// F(W0) + eps (y - F(W0)) for the largest epsilon in {1, 1/2, 1/4, ...} whose
// Gauss-Newton solve converges, then assembles the width-m parameters.
// Refuses odd m (the construction pairs neurons) and negative capacity
// verdicts unless cfg.force; exhausted restarts return converged = false with
// the trace attached.
inline InterpolationResult interpolate(const Matrix<double>& x, const std::vector<double>& y,
                                       std::size_t m, const Activation& act, std::uint64_t seed,
                                       SolverConfig cfg = {}) {
    const std::size_t d = x.rows(), n = x.cols();
    if (y.size() != n)
        throw ShapeError("interpolate: |y| = " + std::to_string(y.size()) + ", X has " +
                         std::to_string(n) + " columns");
    CapacityVerdict verdict = capacity_verdict(m, n, d, act);
    if (m % 2 != 0) {
        if (verdict.surjective_predicted) {
            verdict.surjective_predicted = false;
            verdict.reason = CapacityReason::m_odd;
        }
        throw CapacityRefused(verdict);  // force cannot pair an odd width
    }
    if (!verdict.surjective_predicted && !cfg.force) throw CapacityRefused(verdict);

    const std::size_t mh = m / 2;
    const double eta = act.center();
    const std::vector<double> v0(mh, 1.0);

    InterpolationResult result;
    for (int restart = 0; restart < cfg.max_restarts; ++restart) {
        result.restarts_used = restart + 1;
        const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(restart));
        InitializationRank init =
            rank_at_initialization(x, mh, act, rs, cfg.rank_tolerance, cfg.safety, cfg.phi);
        if (init.rank < n) continue;  // rank failure: fresh draw

        NetworkParams half{init.W0, std::vector<double>(mh, eta), v0};
        std::vector<double> f0 = forward(half, x, act);

        double epsilon = 1.0;
        for (int level = 0; level < cfg.max_epsilon_levels; ++level, epsilon *= 0.5) {
            std::vector<double> target(n);
            for (std::size_t j = 0; j < n; ++j) target[j] = f0[j] + epsilon * (y[j] - f0[j]);
            Matrix<double> w = init.W0;
            if (!detail::lm_solve(x, target, w, half.b, v0, act, cfg, epsilon, restart,
                                  result.trace))
                continue;

            result.params = assemble_doubled(w, init.W0, v0, eta, epsilon);
            std::vector<double> h = forward(result.params, x, act);
            double res = 0.0;
            for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(h[j] - y[j]));
            result.converged = true;
            result.residual = res;
            result.epsilon = epsilon;
            result.init_rank = init.rank;
            return result;
        }
    }
    result.converged = false;
    return result;
}

// --- multivariate outputs -------------------------------------------------------

enum class MultiOutputMode { split_neurons, solve_V };

struct MultiOutputResult {
    bool converged = false;
    Matrix<double> W;  // d x m
    std::vector<double> b;
    Matrix<double> V;  // m x q
    std::vector<double> column_residuals;
    double residual = std::numeric_limits<double>::infinity();
    std::vector<TraceEntry> trace;
};

// split_neurons: one width-(m/q) interpolation per output column, assembled
// with the block-diagonal V. solve_V: draw W once (scaled like the rank test),
// verify psi(X^T W + eta 1 1^T) has rank n, then solve the linear system for V
// by least squares; needs m >= n.
inline MultiOutputResult interpolate_multioutput(const Matrix<double>& x, const Matrix<double>& Y,
                                                 std::size_t m, const Activation& act,
                                                 MultiOutputMode mode, std::uint64_t seed,
                                                 SolverConfig cfg = {}) {
    const std::size_t n = x.cols(), q = Y.cols();
    if (Y.rows() != n)
        throw ShapeError("interpolate_multioutput: Y is " + Y.shape_string() + ", expected " +
                         std::to_string(n) + " rows");
    MultiOutputResult out;

    if (mode == MultiOutputMode::split_neurons) {
        if (q == 0 || m % q != 0)
            throw ConstraintError("split_neurons needs q | m, got m = " + std::to_string(m) +
                                  ", q = " + std::to_string(q));
        const std::size_t per = m / q;
        const std::size_t d = x.rows();
        out.W = Matrix<double>(d, m, 0.0);
        out.b.assign(m, 0.0);
        out.V = Matrix<double>(m, q, 0.0);
        out.converged = true;
        for (std::size_t i = 0; i < q; ++i) {
            std::vector<double> yi(n);
            for (std::size_t j = 0; j < n; ++j) yi[j] = Y(j, i);
            InterpolationResult r = interpolate(x, yi, per, act, derive_seed(seed, i), cfg);
            out.converged = out.converged && r.converged;
            out.column_residuals.push_back(r.residual);
            for (auto& t : r.trace) out.trace.push_back(t);
            if (!r.converged) continue;
            for (std::size_t l = 0; l < d; ++l)
                for (std::size_t c = 0; c < per; ++c) out.W(l, i * per + c) = r.params.W(l, c);
            for (std::size_t c = 0; c < per; ++c) {
                out.b[i * per + c] = r.params.b[c];
                out.V(i * per + c, i) = r.params.v[c];
            }
        }
        out.residual = out.column_residuals.empty()
                           ? 0.0
                           : *std::max_element(out.column_residuals.begin(),
                                               out.column_residuals.end());
        return out;
    }

    // solve_V
    if (m < n)
        throw ConstraintError("solve_V needs m >= n, got m = " + std::to_string(m) +
                              ", n = " + std::to_string(n));
    const double eta = act.center();
    for (int restart = 0; restart < cfg.max_restarts; ++restart) {
        const std::uint64_t rs = derive_seed(seed, 1000 + static_cast<std::uint64_t>(restart));
        InitializationRank init =
            rank_at_initialization(x, m, act, rs, cfg.rank_tolerance, cfg.safety, cfg.phi);
        NetworkParams p{init.W0, std::vector<double>(m, eta), std::vector<double>(m, 1.0)};
        Matrix<double> pre = detail::preactivation(p, x);
        Matrix<double> psi_mat(n, m);  // psi(X^T W + eta 1 1^T)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i) psi_mat(j, i) = act.value(pre(i, j));
        if (rank_float(psi_mat, cfg.rank_tolerance).rank < n) continue;

        Eigen::MatrixXd psi(n, m), rhs(n, q);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < m; ++i)
                psi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = psi_mat(j, i);
            for (std::size_t c = 0; c < q; ++c)
                rhs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = Y(j, c);
        }
        Eigen::MatrixXd V = psi.completeOrthogonalDecomposition().solve(rhs);
        Eigen::MatrixXd residual = psi * V - rhs;

        out.W = init.W0;
        out.b.assign(m, eta);
        out.V = Matrix<double>(m, q);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < q; ++c)
                out.V(i, c) = V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        out.column_residuals.assign(q, 0.0);
        for (std::size_t c = 0; c < q; ++c)
            out.column_residuals[c] =
                residual.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff();
        out.residual = *std::max_element(out.column_residuals.begin(), out.column_residuals.end());
        out.converged = true;
        return out;
    }
    return out;
}

// --- serialization ---------------------------------------------------------------

inline nlohmann::json params_to_json(const NetworkParams& p) {
    nlohmann::json j;
    j["d"] = p.input_dim();
    j["m"] = p.width();
    j["W"] = p.W.data();  // row-major d x m
    j["b"] = p.b;
    j["v"] = p.v;
    return j;
}

inline NetworkParams params_from_json(const nlohmann::json& j) {
    NetworkParams p;
    const std::size_t d = j.at("d"), m = j.at("m");
    std::vector<double> w = j.at("W");
    if (w.size() != d * m) throw ShapeError("params_from_json: W length mismatch");
    p.W = Matrix<double>(d, m);
    p.W.data() = std::move(w);
    p.b = j.at("b").get<std::vector<double>>();
    p.v = j.at("v").get<std::vector<double>>();
    return p;
}

}  // namespace genrank
