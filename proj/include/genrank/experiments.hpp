// Batch experiment runners behind the CLI subcommands. Configs are flat JSON
// documents (flags override file values at the CLI layer); identical config
// plus master seed gives byte-identical CSV/JSON output. Grid cells run in a
// worker pool but rows are emitted in deterministic grid order, and every row
// carries the seed that reproduces its cell in isolation.

#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "activation.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "network.hpp"
#include "numeric.hpp"
#include "rank.hpp"
#include "rank_laws.hpp"

namespace genrank {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacityRefused = 3;

namespace detail {

template <typename T>
void maybe_get(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline std::vector<Rational> rationals_from_strings(const std::vector<std::string>& tokens) {
    std::vector<Rational> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(rational_from_string(t));
    return out;
}

inline std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ':';
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::string join_coeffs(const SupportFilter& coeffs) {
    std::string s;
    for (std::size_t i = 0; i < coeffs.coefficients.size(); ++i) {
        if (i) s += ':';
        s += coeffs.coefficients[i].str();
    }
    return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

// Runs fn(i) for i in [0, count) on `jobs` threads; fn must only touch slot i
// of its output. Deterministic because slots are preassigned.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

// --- rank-grid ------------------------------------------------------------------

struct RankGridConfig {
    std::string law = "hadamard-power";
    std::vector<std::size_t> ds{2};
    std::vector<int> ks{2};
    std::vector<std::size_t> ms{4};
    std::vector<std::size_t> ns{4};
    std::vector<Rational> coeffs;  // poly/khatri-poly/zhang laws
    std::string act;               // analytic laws: activation whose series is applied
    std::size_t trials = 100;
    std::string sampler = "integer";
    long long range = 100;
    std::uint64_t seed = 1;
    bool check_kruskal = false;
    bool strict = false;
    std::size_t jobs = 0;
    std::size_t md_cap = 0;  // nonzero: skip cells with m*d above it
    std::string out;
    std::string format = "csv";

    static RankGridConfig from_json(const nlohmann::json& j) {
        RankGridConfig c;
        detail::maybe_get(j, "law", c.law);
        detail::maybe_get(j, "d", c.ds);
        detail::maybe_get(j, "k", c.ks);
        detail::maybe_get(j, "m", c.ms);
        detail::maybe_get(j, "n", c.ns);
        if (j.contains("coeffs"))
            c.coeffs = detail::rationals_from_strings(j.at("coeffs").get<std::vector<std::string>>());
        detail::maybe_get(j, "act", c.act);
        detail::maybe_get(j, "trials", c.trials);
        detail::maybe_get(j, "sampler", c.sampler);
        detail::maybe_get(j, "range", c.range);
        detail::maybe_get(j, "seed", c.seed);
        detail::maybe_get(j, "check_kruskal", c.check_kruskal);
        detail::maybe_get(j, "strict", c.strict);
        detail::maybe_get(j, "jobs", c.jobs);
        detail::maybe_get(j, "md_cap", c.md_cap);
        detail::maybe_get(j, "out", c.out);
        detail::maybe_get(j, "format", c.format);
        return c;
    }
};

// The cells of a config, in deterministic d -> k -> m -> n order. For laws
// without a degree parameter k collapses to a single slot; zhang cells with
// d not dividing n are skipped.
struct GridCell {
    std::size_t d;
    int k;
    std::size_t m, n;
    std::size_t index;  // position in the emitted report
};

inline std::vector<GridCell> enumerate_grid(const RankGridConfig& cfg) {
    const LawKind kind = law_kind_from_string(cfg.law);
    const bool uses_k = kind == LawKind::hadamard_power || kind == LawKind::khatri_power;
    std::vector<int> ks = uses_k ? cfg.ks : std::vector<int>{0};
    std::vector<GridCell> cells;
    for (std::size_t d : cfg.ds)
        for (int k : ks)
            for (std::size_t m : cfg.ms)
                for (std::size_t n : cfg.ns) {
                    if (cfg.md_cap && m * d > cfg.md_cap) continue;
                    if (kind == LawKind::zhang_blockdiag && n % d != 0) continue;
                    cells.push_back({d, k, m, n, cells.size()});
                }
    return cells;
}

inline RankLaw law_for_cell(const RankGridConfig& cfg, const GridCell& cell) {
    const LawKind kind = law_kind_from_string(cfg.law);
    RankLaw law;
    law.kind = kind;
    law.d = cell.d;
    law.k = cell.k;
    switch (kind) {
        case LawKind::matmul:
        case LawKind::hadamard_power:
        case LawKind::khatri_power:
            break;
        case LawKind::poly:
        case LawKind::khatri_poly:
        case LawKind::zhang_blockdiag:
            if (cfg.coeffs.empty())
                throw ConstraintError("law '" + cfg.law + "' needs --coeffs");
            law.coeffs = SupportFilter(cfg.coeffs);
            break;
        case LawKind::analytic:
        case LawKind::analytic_khatri: {
            if (cfg.act.empty())
                throw ConstraintError("law '" + cfg.law + "' needs --act");
            Activation act = parse_activation(cfg.act);
            return make_analytic_law(cell.d, cell.m, cell.n, act.value_stream(),
                                     kind == LawKind::analytic_khatri);
        }
    }
    return law;
}

inline std::vector<RankReport> run_rank_grid(const RankGridConfig& cfg) {
    if (cfg.ds.empty() || cfg.ms.empty() || cfg.ns.empty() || cfg.ks.empty())
        throw ConstraintError("rank-grid: empty dimension grid");
    if (cfg.trials == 0) throw ConstraintError("rank-grid: trials must be >= 1");
    SamplerSpec sampler = cfg.sampler == "integer"  ? SamplerSpec::integer(cfg.range)
                          : cfg.sampler == "gaussian" ? SamplerSpec::gaussian()
                                                      : throw ConstraintError(
                                                            "unknown sampler '" + cfg.sampler + "'");
    std::vector<GridCell> cells = enumerate_grid(cfg);
    if (cells.empty()) throw ConstraintError("rank-grid: grid has no cells");

    std::vector<RankReport> reports(cells.size());
    detail::parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
        const GridCell& cell = cells[i];
        RankLaw law = law_for_cell(cfg, cell);
        const std::uint64_t cell_seed = derive_seed(cfg.seed, cell.index);
        reports[i] = empirical_rank_experiment(law, cell.m, cell.n, cfg.trials, sampler, cell_seed,
                                               cfg.check_kruskal);
    });
    return reports;
}

inline std::string rank_grid_csv(const std::vector<RankReport>& reports) {
    std::ostringstream out;
    out << "# genrank rank-grid csv v1\n";
    out << "law,d,k,coeffs,m,n,sampler,range,trials,predicted,empirical_min,empirical_max,"
           "matches,mismatch_count,mismatch_seeds,kruskal_checked,kruskal_mismatch_count,"
           "kruskal_mismatch_seeds,cell_seed\n";
    for (const auto& r : reports) {
        out << to_string(r.law.kind) << ',' << r.law.d << ',' << r.law.k << ','
            << detail::join_coeffs(r.law.coeffs) << ',' << r.m << ',' << r.n << ','
            << (r.sampler.kind == SamplerSpec::Kind::integer ? "integer" : "gaussian") << ','
            << r.sampler.range << ',' << r.trials << ',' << r.predicted << ','
            << r.empirical_min() << ',' << r.empirical_max() << ',' << r.matches() << ','
            << r.mismatch_seeds.size() << ',' << detail::join_u64(r.mismatch_seeds) << ','
            << (r.kruskal_checked ? 1 : 0) << ',' << r.kruskal_mismatch_seeds.size() << ','
            << detail::join_u64(r.kruskal_mismatch_seeds) << ',' << r.master_seed << '\n';
    }
    return out.str();
}

inline nlohmann::json rank_grid_json(const std::vector<RankReport>& reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(r.to_json());
    return {{"schema", "genrank rank-grid json v1"}, {"rows", rows}};
}

inline int cmd_rank_grid(const RankGridConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<RankReport> reports;
    try {
        reports = run_rank_grid(cfg);
    } catch (const ConstraintError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::string payload = cfg.format == "json" ? rank_grid_json(reports).dump(2) + "\n"
                                               : rank_grid_csv(reports);
    if (!cfg.out.empty())
        detail::write_text_file(cfg.out, payload);
    else
        out << payload;

    std::size_t mismatched_cells = 0, kruskal_mismatched = 0;
    for (const auto& r : reports) {
        if (!r.mismatch_seeds.empty()) ++mismatched_cells;
        if (!r.kruskal_mismatch_seeds.empty()) ++kruskal_mismatched;
    }
    err << "rank-grid: " << reports.size() << " cells, " << mismatched_cells
        << " with rank mismatches, " << kruskal_mismatched << " with kruskal mismatches\n";
    if (cfg.strict && (mismatched_cells || kruskal_mismatched)) return kExitVerificationFailure;
    return kExitOk;
}

// --- decompose-verify -------------------------------------------------------------

struct DecomposeVerifyConfig {
    std::vector<std::string> kinds{"hadamard-power", "poly", "khatri-power", "khatri-poly",
                                   "tensor-directsum"};
    std::size_t instances = 50;
    std::size_t d_max = 4;
    int k_max = 4;
    std::size_t m_max = 6;
    std::size_t n_max = 6;
    long long entry_range = 5;
    std::uint64_t seed = 1;
    bool inject_fault = false;  // test hook: perturbs a diagonal entry before verifying
    std::string out;

    static DecomposeVerifyConfig from_json(const nlohmann::json& j) {
        DecomposeVerifyConfig c;
        detail::maybe_get(j, "kinds", c.kinds);
        detail::maybe_get(j, "instances", c.instances);
        detail::maybe_get(j, "d_max", c.d_max);
        detail::maybe_get(j, "k_max", c.k_max);
        detail::maybe_get(j, "m_max", c.m_max);
        detail::maybe_get(j, "n_max", c.n_max);
        detail::maybe_get(j, "entry_range", c.entry_range);
        detail::maybe_get(j, "seed", c.seed);
        detail::maybe_get(j, "inject_fault", c.inject_fault);
        detail::maybe_get(j, "out", c.out);
        return c;
    }
};

namespace detail {

struct DecomposeInstance {
    std::size_t d, m, n;
    int k;
    Matrix<Rational> a, b;
    SupportFilter coeffs;
};

inline DecomposeInstance random_decompose_instance(std::uint64_t seed, const DecomposeVerifyConfig& cfg) {
    std::mt19937_64 gen(seed);
    auto pick = [&](long long lo, long long hi) {
        return std::uniform_int_distribution<long long>(lo, hi)(gen);
    };
    DecomposeInstance inst;
    inst.d = static_cast<std::size_t>(pick(1, static_cast<long long>(cfg.d_max)));
    inst.k = static_cast<int>(pick(0, cfg.k_max));
    inst.m = static_cast<std::size_t>(pick(1, static_cast<long long>(cfg.m_max)));
    inst.n = static_cast<std::size_t>(pick(1, static_cast<long long>(cfg.n_max)));
    inst.a = Matrix<Rational>(inst.m, inst.d);
    inst.b = Matrix<Rational>(inst.n, inst.d);
    for (auto& v : inst.a.data()) v = Rational(pick(-cfg.entry_range, cfg.entry_range));
    for (auto& v : inst.b.data()) v = Rational(pick(-cfg.entry_range, cfg.entry_range));
    std::vector<Rational> coeffs(static_cast<std::size_t>(inst.k) + 1);
    bool any = false;
    for (auto& c : coeffs) {
        c = Rational(pick(-cfg.entry_range, cfg.entry_range));
        any = any || c != 0;
    }
    if (!any) coeffs.back() = 1;  // keep at least one nonzero coefficient in play
    inst.coeffs = SupportFilter(std::move(coeffs));
    return inst;
}

}  // namespace detail

// Builds and verifies every configured decomposition kind over the random
// grid. Exit 0 iff every reconstruction is exact; any failure dumps the
// instance to err and exits 1. tensor-directsum additionally cross-checks its
// reconstruction against decompose_khatri_poly on the same inputs.
inline int cmd_decompose_verify(const DecomposeVerifyConfig& cfg, std::ostream& out,
                                std::ostream& err) {
    if (cfg.instances == 0 || cfg.kinds.empty()) {
        err << "usage error: decompose-verify needs kinds and instances >= 1\n";
        return kExitUsage;
    }
    std::size_t checked = 0;
    for (std::size_t kind_idx = 0; kind_idx < cfg.kinds.size(); ++kind_idx) {
        const std::string& kind = cfg.kinds[kind_idx];
        for (std::size_t t = 0; t < cfg.instances; ++t) {
            const std::uint64_t inst_seed = derive_seed(cfg.seed, kind_idx * cfg.instances + t);
            auto inst = detail::random_decompose_instance(inst_seed, cfg);
            Matrix<Rational> target;
            Decomposition dec;
            bool cross_check_ok = true;
            if (kind == "hadamard-power") {
                target = hadamard_power(inst.a * inst.b.transpose(), static_cast<unsigned>(inst.k));
                dec = decompose_hadamard_power(inst.a, inst.b, inst.k);
            } else if (kind == "poly") {
                target = hadamard_poly_apply(inst.a * inst.b.transpose(), inst.coeffs);
                dec = decompose_poly(inst.a, inst.b, inst.coeffs);
            } else if (kind == "khatri-power") {
                target = khatri_power_target(inst.a, inst.b, inst.k);
                dec = decompose_khatri_power(inst.a, inst.b, inst.k);
            } else if (kind == "khatri-poly") {
                target = khatri_poly_target(inst.a, inst.b, inst.coeffs);
                dec = decompose_khatri_poly(inst.a, inst.b, inst.coeffs);
            } else if (kind == "tensor-directsum") {
                target = khatri_poly_target(inst.a, inst.b, inst.coeffs);
                TensorFactorPair pair = decompose_tensor_directsum(inst.a, inst.b, inst.coeffs);
                dec = pair.as_decomposition();
                cross_check_ok =
                    decompose_khatri_poly(inst.a, inst.b, inst.coeffs).reconstruction() ==
                    pair.reconstruction();
            } else {
                err << "usage error: unknown decomposition kind '" << kind << "'\n";
                return kExitUsage;
            }
            if (cfg.inject_fault && dec.inner_dimension() > 0) dec.diag[0] += 1;
            if (!verify_reconstruction(dec, target) || !cross_check_ok) {
                nlohmann::json dump = dec.dump();
                dump["kind_requested"] = kind;
                dump["seed"] = inst_seed;
                dump["d"] = inst.d;
                dump["k"] = inst.k;
                dump["m"] = inst.m;
                dump["n"] = inst.n;
                err << "reconstruction failure:\n" << dump.dump(2) << '\n';
                return kExitVerificationFailure;
            }
            ++checked;
        }
    }
    out << "decompose-verify: " << checked << " reconstructions exact\n";
    if (!cfg.out.empty())
        detail::write_text_file(cfg.out, nlohmann::json{{"checked", checked}}.dump(2) + "\n");
    return kExitOk;
}

// --- interpolate -------------------------------------------------------------------

struct InterpolateConfig {
    std::string x_file;  // matrix text format, d x n
    std::string y_file;  // matrix text format, n x 1
    std::vector<std::size_t> random_dims;  // {d, n, m} to synthesize an instance
    std::size_t m = 0;                     // width when files are given
    std::string act = "tanh";
    std::uint64_t seed = 1;
    double tol = 1e-6;
    bool force = false;
    int max_restarts = 5;
    std::string out_params;
    std::string trace_path;

    static InterpolateConfig from_json(const nlohmann::json& j) {
        InterpolateConfig c;
        detail::maybe_get(j, "x_file", c.x_file);
        detail::maybe_get(j, "y_file", c.y_file);
        detail::maybe_get(j, "random", c.random_dims);
        detail::maybe_get(j, "m", c.m);
        detail::maybe_get(j, "act", c.act);
        detail::maybe_get(j, "seed", c.seed);
        detail::maybe_get(j, "tol", c.tol);
        detail::maybe_get(j, "force", c.force);
        detail::maybe_get(j, "max_restarts", c.max_restarts);
        detail::maybe_get(j, "out", c.out_params);
        detail::maybe_get(j, "trace", c.trace_path);
        return c;
    }
};

inline int cmd_interpolate(const InterpolateConfig& cfg, std::ostream& out, std::ostream& err) {
    Matrix<double> x;
    std::vector<double> y;
    std::size_t width = 0;
    try {
        if (cfg.random_dims.size() == 3) {
            const std::size_t d = cfg.random_dims[0], n = cfg.random_dims[1];
            width = cfg.random_dims[2];
            std::mt19937_64 gen(derive_seed(cfg.seed, 0xDA7A));
            std::normal_distribution<double> dist(0.0, 1.0);
            x = Matrix<double>(d, n);
            for (auto& v : x.data()) v = dist(gen);
            y.resize(n);
            for (auto& v : y) v = dist(gen);
        } else if (!cfg.x_file.empty() && !cfg.y_file.empty() && cfg.m > 0) {
            std::ifstream xf(cfg.x_file), yf(cfg.y_file);
            if (!xf) throw ConstraintError("cannot open X file: " + cfg.x_file);
            if (!yf) throw ConstraintError("cannot open y file: " + cfg.y_file);
            x = read_matrix<double>(xf);
            Matrix<double> ym = read_matrix<double>(yf);
            if (ym.cols() != 1) throw ShapeError("y file must be n x 1");
            y = ym.data();
            width = cfg.m;
        } else {
            throw ConstraintError("interpolate needs either --random d,n,m or --x/--y/--m");
        }
        if (y.size() != x.cols()) throw ShapeError("y length must match the columns of X");

        Activation act = parse_activation(cfg.act);
        SolverConfig solver;
        solver.force = cfg.force;
        solver.max_restarts = cfg.max_restarts;
        InterpolationResult result = interpolate(x, y, width, act, cfg.seed, solver);

        if (!cfg.trace_path.empty()) {
            std::ostringstream lines;
            for (const auto& t : result.trace) lines << t.to_json().dump() << '\n';
            detail::write_text_file(cfg.trace_path, lines.str());
        }
        if (!result.converged) {
            err << "interpolate: solver did not converge within " << cfg.max_restarts
                << " restarts\n";
            return kExitVerificationFailure;
        }
        nlohmann::json pj = params_to_json(result.params);
        pj["residual"] = result.residual;
        pj["epsilon"] = result.epsilon;
        pj["restarts_used"] = result.restarts_used;
        pj["seed"] = cfg.seed;
        pj["act"] = cfg.act;
        if (!cfg.out_params.empty()) detail::write_text_file(cfg.out_params, pj.dump(2) + "\n");
        out << "residual " << result.residual << " epsilon " << result.epsilon << " restarts "
            << result.restarts_used << '\n';
        return result.residual < cfg.tol ? kExitOk : kExitVerificationFailure;
    } catch (const CapacityRefused& e) {
        err << e.verdict.to_json().dump(2) << '\n';
        return kExitCapacityRefused;
    } catch (const ConstraintError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ShapeError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}

// --- capacity-check ----------------------------------------------------------------

struct CapacityCheckConfig {
    std::size_t m = 0, n = 0, d = 0;
    std::string act = "tanh";
};

inline int cmd_capacity_check(const CapacityCheckConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Activation act = parse_activation(cfg.act);
        CapacityVerdict verdict = capacity_verdict(cfg.m, cfg.n, cfg.d, act);
        out << verdict.to_json().dump(2) << '\n';
        return kExitOk;
    } catch (const ConstraintError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace genrank
