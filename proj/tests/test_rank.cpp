#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "genrank/rank.hpp"

using namespace genrank;

namespace {

Matrix<Rational> random_int_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& gen,
                                   long long range) {
    std::uniform_int_distribution<long long> dist(-range, range);
    Matrix<Rational> m(rows, cols);
    for (auto& v : m.data()) v = Rational(dist(gen));
    return m;
}

Matrix<Rational> permuted(const Matrix<Rational>& m, std::mt19937_64& gen) {
    std::vector<std::size_t> rows(m.rows()), cols(m.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), gen);
    std::shuffle(cols.begin(), cols.end(), gen);
    return m.submatrix(rows, cols);
}

}  // namespace

TEST_CASE("rank_exact on fixed matrices") {
    CHECK(rank_exact(Matrix<Rational>(3, 4)).rank == 0);
    CHECK(rank_exact(Matrix<Rational>::identity(5)).rank == 5);
    Matrix<Rational> proportional(2, 2, {Rational(1), Rational(2), Rational(2), Rational(4)});
    CHECK(rank_exact(proportional).rank == 1);
    CHECK(rank_exact(proportional).backend == RankBackend::exact);
}

TEST_CASE("rank_exact handles non-integer rationals") {
    Matrix<Rational> m(2, 2, {Rational(1, 2), Rational(1, 3), Rational(3, 2), Rational(1)});
    CHECK(rank_exact(m).rank == 2);
    Matrix<Rational> dependent(2, 2, {Rational(1, 2), Rational(1, 3), Rational(3, 2), Rational(1)});
    dependent(1, 1) = Rational(2, 3);  // row 1 = 3 * row 0
    CHECK(rank_exact(dependent).rank == 1);
}

TEST_CASE("rank_exact is invariant under permutations and transposition") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_int_matrix(4, 5, gen, 2);
        auto r = rank_exact(m).rank;
        CHECK(rank_exact(m.transpose()).rank == r);
        CHECK(rank_exact(permuted(m, gen)).rank == r);
    }
}

TEST_CASE("rank_condition_value is the rank oracle") {
    CHECK(rank_condition_value(Matrix<Rational>(2, 3), 1) == Rational(0));
    CHECK(rank_condition_value(Matrix<Rational>(1, 1, {Rational(2)}), 1) == Rational(4));
    Matrix<Rational> rank_one(2, 2, {Rational(1), Rational(2), Rational(2), Rational(4)});
    CHECK(rank_condition_value(rank_one, 2) == Rational(0));
    CHECK(rank_condition_value(rank_one, 1) != Rational(0));
}

TEST_CASE("rank_condition_value nonzero iff rank_exact >= r, random 4x4 over {-2..2}") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 120; ++trial) {
        auto m = random_int_matrix(4, 4, gen, 2);
        const std::size_t r = rank_exact(m).rank;
        for (std::size_t order = 1; order <= 4; ++order)
            CHECK((rank_condition_value(m, order) != 0) == (r >= order));
    }
}

TEST_CASE("rank_condition_value budget guard") {
    Matrix<Rational> m(10, 10, Rational(1));
    CHECK_THROWS_AS(rank_condition_value(m, 5, /*budget=*/100), ResourceError);
}

TEST_CASE("minor_det on fixed matrices") {
    CHECK(minor_det(Matrix<Rational>(1, 1, {Rational(5)}), {0}, {0}) == Rational(5));
    auto id = Matrix<Rational>::identity(4);
    CHECK(minor_det(id, {0, 1, 2, 3}, {0, 1, 2, 3}) == Rational(1));
    Matrix<Rational> m(2, 2, {Rational(1), Rational(2), Rational(3), Rational(4)});
    CHECK(minor_det(m, {0, 1}, {0, 1}) == Rational(-2));
    CHECK_THROWS_AS(minor_det(m, {0, 1}, {0}), ShapeError);
}

TEST_CASE("kruskal_rank on fixed matrices") {
    CHECK(kruskal_rank(Matrix<Rational>::identity(4)) == 4);
    Matrix<Rational> pairwise(2, 2, {Rational(1), Rational(1), Rational(0), Rational(0)});
    CHECK(kruskal_rank(pairwise) == 1);
    Matrix<Rational> with_zero_col(2, 2, {Rational(1), Rational(0), Rational(2), Rational(0)});
    CHECK(kruskal_rank(with_zero_col) == 0);
}

TEST_CASE("kruskal_rank never exceeds rank_exact") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_int_matrix(3, 5, gen, 2);
        CHECK(kruskal_rank(m) <= rank_exact(m).rank);
    }
}

TEST_CASE("kruskal_rank budget guard names the binomial count") {
    std::mt19937_64 gen(43);
    auto m = random_int_matrix(6, 12, gen, 3);
    try {
        kruskal_rank(m, /*budget=*/3);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("cauchy_binet_diag_expand equals the product minor") {
    SECTION("s > N gives zero") {
        Matrix<Rational> a(3, 2), b(3, 2);
        DiagonalMatrix<Rational> d({Rational(1), Rational(1)});
        CHECK(cauchy_binet_diag_expand(a, d, b, {0, 1, 2}, {0, 1, 2}) == Rational(0));
    }
    SECTION("identity case") {
        auto id = Matrix<Rational>::identity(3);
        DiagonalMatrix<Rational> d({Rational(1), Rational(1), Rational(1)});
        CHECK(cauchy_binet_diag_expand(id, d, id, {0, 1}, {0, 1}) == Rational(1));
    }
    SECTION("random instances match minor(A D B^T) exactly") {
        std::mt19937_64 gen(47);
        std::uniform_int_distribution<std::size_t> size_dist(1, 3);
        std::uniform_int_distribution<std::size_t> inner_dist(1, 6);
        std::uniform_int_distribution<long long> entry(-4, 4);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t m = size_dist(gen) + 1, n = size_dist(gen) + 1;
            const std::size_t inner = inner_dist(gen);
            auto a = random_int_matrix(m, inner, gen, 4);
            auto b = random_int_matrix(n, inner, gen, 4);
            std::vector<Rational> diag(inner);
            for (auto& v : diag) v = Rational(entry(gen));
            DiagonalMatrix<Rational> d(diag);

            const std::size_t s = 1 + trial % std::min(m, n);
            std::vector<std::size_t> all_m(m), all_n(n);
            std::iota(all_m.begin(), all_m.end(), 0);
            std::iota(all_n.begin(), all_n.end(), 0);
            std::shuffle(all_m.begin(), all_m.end(), gen);
            std::shuffle(all_n.begin(), all_n.end(), gen);
            std::vector<std::size_t> I(all_m.begin(), all_m.begin() + s);
            std::vector<std::size_t> J(all_n.begin(), all_n.begin() + s);
            std::sort(I.begin(), I.end());
            std::sort(J.begin(), J.end());

            Matrix<Rational> product = scale_columns(a, d) * b.transpose();
            CHECK(cauchy_binet_diag_expand(a, d, b, I, J) == minor_det(product, I, J));
        }
    }
    SECTION("budget guard") {
        Matrix<Rational> a(2, 30), b(2, 30);
        DiagonalMatrix<Rational> d(std::vector<Rational>(30, Rational(1)));
        CHECK_THROWS_AS(cauchy_binet_diag_expand(a, d, b, {0, 1}, {0, 1}, /*budget=*/10),
                        ResourceError);
    }
}

TEST_CASE("rank_float on fixed matrices") {
    Matrix<double> id(3, 3, 0.0);
    for (int i = 0; i < 3; ++i) id(i, i) = 1.0;
    CHECK(rank_float(id).rank == 3);
    CHECK(rank_float(id, TolerancePolicy::absolute(0.5)).rank == 3);
}

TEST_CASE("rank_float drops singular values below the relative threshold") {
    Matrix<double> m(2, 2, 0.0);
    m(0, 0) = 1.0;
    m(1, 1) = 1e-30;
    auto result = rank_float(m, TolerancePolicy::relative(1.0));
    CHECK(result.rank == 1);
    REQUIRE(result.singular_values.has_value());
    CHECK(result.singular_values->size() == 2);
    CHECK(result.tolerance > 0.0);
}

TEST_CASE("rank_float: random gaussian 5x5 is full rank across seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        Matrix<double> m(5, 5);
        for (auto& v : m.data()) v = dist(gen);
        CHECK(rank_float(m).rank == 5);
    }
}

TEST_CASE("rank_float rejects non-finite entries") {
    Matrix<double> m(1, 2, 0.0);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rank_float(m), DomainError);
}
