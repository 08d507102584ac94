#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "genrank/matrix.hpp"

using namespace genrank;

namespace {

Matrix<Rational> random_int_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& gen,
                                   long long range = 5) {
    std::uniform_int_distribution<long long> dist(-range, range);
    Matrix<Rational> m(rows, cols);
    for (auto& v : m.data()) v = Rational(dist(gen));
    return m;
}

}  // namespace

TEST_CASE("hadamard_power basics") {
    Matrix<Rational> two(1, 1, {Rational(2)});
    CHECK(hadamard_power(two, 3) == Matrix<Rational>(1, 1, {Rational(8)}));

    Matrix<Rational> m(2, 2, {Rational(1), Rational(2), Rational(3), Rational(4)});
    CHECK(hadamard_power(m, 0) == Matrix<Rational>::ones(2, 2));
    CHECK(hadamard_power(m, 2) ==
          Matrix<Rational>(2, 2, {Rational(1), Rational(4), Rational(9), Rational(16)}));
}

TEST_CASE("hadamard_power is additive in the exponent") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = random_int_matrix(3, 4, gen);
        unsigned j = trial % 4, k = (trial * 3) % 5;
        CHECK(hadamard_power(m, j + k) == hadamard_power(m, j).hadamard(hadamard_power(m, k)));
    }
}

TEST_CASE("khatri_rao on column vectors") {
    Matrix<Rational> p(2, 1, {Rational(1), Rational(2)});
    Matrix<Rational> q(2, 1, {Rational(3), Rational(4)});
    CHECK(khatri_rao(p, q) ==
          Matrix<Rational>(4, 1, {Rational(3), Rational(4), Rational(6), Rational(8)}));
}

TEST_CASE("khatri_rao with a one-row all-ones factor is the identity") {
    std::mt19937_64 gen(11);
    auto m = random_int_matrix(3, 4, gen);
    CHECK(khatri_rao(Matrix<Rational>::ones(1, 4), m) == m);
}

TEST_CASE("khatri_rao shape law and row ordering") {
    std::mt19937_64 gen(13);
    auto p = random_int_matrix(3, 5, gen);
    auto q = random_int_matrix(4, 5, gen);
    auto kr = khatri_rao(p, q);
    REQUIRE(kr.rows() == 12);
    REQUIRE(kr.cols() == 5);
    // first index changes slower: row i1*b + i2
    for (std::size_t i1 = 0; i1 < 3; ++i1)
        for (std::size_t i2 = 0; i2 < 4; ++i2)
            for (std::size_t j = 0; j < 5; ++j)
                CHECK(kr(i1 * 4 + i2, j) == p(i1, j) * q(i2, j));
}

TEST_CASE("khatri_rao rejects column-count mismatch") {
    Matrix<Rational> p(2, 2), q(2, 3);
    CHECK_THROWS_AS(khatri_rao(p, q), ShapeError);
}

TEST_CASE("matrix product and transpose") {
    Matrix<Rational> a(2, 3, {Rational(1), Rational(2), Rational(3), Rational(4), Rational(5),
                              Rational(6)});
    auto ata = a.transpose() * a;
    REQUIRE(ata.rows() == 3);
    REQUIRE(ata.cols() == 3);
    CHECK(ata(0, 0) == Rational(17));
    CHECK(ata == ata.transpose());
    CHECK_THROWS_AS(a * a, ShapeError);
}

TEST_CASE("matrix text format round trip, rationals") {
    Matrix<Rational> m(2, 2, {Rational(1, 3), Rational(-2), Rational(5), Rational(7, 2)});
    std::ostringstream out;
    write_matrix(out, m);
    CHECK(read_matrix_from_string<Rational>(out.str()) == m);
}

TEST_CASE("matrix text format reads 'p/q' and integer tokens") {
    auto m = read_matrix_from_string<Rational>("2 2\n1/2 3\n-4/6 0\n");
    CHECK(m(0, 0) == Rational(1, 2));
    CHECK(m(1, 0) == Rational(-2, 3));
}

TEST_CASE("matrix text format round trip, doubles") {
    Matrix<double> m(1, 3, {0.5, -1.25e-7, 3.0});
    std::ostringstream out;
    write_matrix(out, m);
    CHECK(read_matrix_from_string<double>(out.str()) == m);
}

TEST_CASE("matrix text format rejects malformed input") {
    CHECK_THROWS(read_matrix_from_string<Rational>("2 2\n1 2 3"));
    CHECK_THROWS(read_matrix_from_string<Rational>("0 2\n"));
    CHECK_THROWS(read_matrix_from_string<Rational>("1 1\nx"));
}

TEST_CASE("scale_columns matches dense diagonal product") {
    std::mt19937_64 gen(17);
    auto m = random_int_matrix(3, 3, gen);
    DiagonalMatrix<Rational> d({Rational(2), Rational(0), Rational(-1, 2)});
    CHECK(scale_columns(m, d) == m * d.to_dense());
}
