#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "genrank/combinatorics.hpp"

using namespace genrank;

TEST_CASE("enumerate_lambda matches hand enumerations") {
    CHECK(enumerate_lambda(1, 5) == std::vector<WeakComposition>{{5}});
    CHECK(enumerate_lambda(2, 2) == std::vector<WeakComposition>{{0, 2}, {1, 1}, {2, 0}});
    CHECK(enumerate_lambda(3, 0) == std::vector<WeakComposition>{{0, 0, 0}});
}

TEST_CASE("enumerate_lambda has multiset_count(d, k) elements, lexicographic, no duplicates") {
    for (std::size_t d = 1; d <= 6; ++d)
        for (int k = 0; k <= 8; ++k) {
            auto all = enumerate_lambda(d, k);
            CHECK(BigInt(all.size()) == multiset_count(d, static_cast<std::size_t>(k)));
            for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i] < all[i + 1]);
            for (const auto& comp : all) CHECK(comp.sum() == k);
        }
}

TEST_CASE("enumerate_Lambda hand example and filter behavior") {
    CHECK(enumerate_Lambda(2, 1) == std::vector<WeakComposition>{{0, 0}, {0, 1}, {1, 0}});

    SupportFilter zero(std::vector<Rational>{0, 0, 0});
    CHECK(enumerate_Lambda(3, 2, &zero).empty());

    SupportFilter odd_only(std::vector<Rational>{0, 1, 0, 1});
    for (const auto& comp : enumerate_Lambda(2, 3, &odd_only)) CHECK(comp.sum() % 2 == 1);
}

TEST_CASE("Zhu identity: |Lambda(K)| = C(K+d, d)") {
    for (std::size_t d = 1; d <= 6; ++d)
        for (int K = 0; K <= 10; ++K)
            CHECK(BigInt(enumerate_Lambda(d, K).size()) ==
                  binomial(static_cast<std::size_t>(K) + d, d));
}

TEST_CASE("multiset_count values") {
    CHECK(multiset_count(100, 3) == BigInt(171700));
    CHECK(multiset_count(100, 3) >= BigInt(100000));
    for (int k = 0; k <= 12; ++k) CHECK(multiset_count(1, static_cast<std::size_t>(k)) == BigInt(1));
    CHECK(multiset_count(2, 3) == BigInt(enumerate_lambda(2, 3).size()));
}

TEST_CASE("multinomial coefficients") {
    CHECK(multinomial(WeakComposition{4, 0, 0}) == BigInt(1));
    CHECK(multinomial(WeakComposition{1, 1}) == BigInt(2));
    CHECK(multinomial(WeakComposition{2, 1, 1}) == BigInt(12));
}

TEST_CASE("multinomial satisfies the Pascal recurrence") {
    std::mt19937_64 gen(23);
    std::uniform_int_distribution<int> part(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
        WeakComposition comp{part(gen), part(gen), part(gen), part(gen)};
        if (comp.sum() == 0) continue;
        BigInt sum = 0;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (comp[i] == 0) continue;
            WeakComposition down = comp;
            --down.parts[i];
            sum += multinomial(down);
        }
        CHECK(multinomial(comp) == sum);
    }
}

TEST_CASE("fiber_map adds a basis vector") {
    CHECK(fiber_map(0, WeakComposition{0, 0}) == WeakComposition{1, 0});
    CHECK(fiber_map(1, WeakComposition{1, 0}) == WeakComposition{1, 1});
    CHECK_THROWS_AS(fiber_map(2, WeakComposition{1, 0}), ConstraintError);
}

TEST_CASE("fiber_map surjects [d] x lambda(k) onto lambda(k+1)") {
    for (std::size_t d = 1; d <= 4; ++d)
        for (int k = 0; k <= 4; ++k) {
            std::set<WeakComposition> images;
            for (const auto& comp : enumerate_lambda(d, k))
                for (std::size_t i = 0; i < d; ++i) images.insert(fiber_map(i, comp));
            CHECK(BigInt(images.size()) == multiset_count(d, static_cast<std::size_t>(k) + 1));
        }
}

TEST_CASE("fiber of r in lambda(k+1) has exactly support_size(r) preimages") {
    for (std::size_t d = 1; d <= 3; ++d)
        for (int k = 0; k <= 3; ++k) {
            auto sources = enumerate_lambda(d, k);
            for (const auto& image : enumerate_lambda(d, k + 1)) {
                std::size_t preimages = 0;
                for (const auto& comp : sources)
                    for (std::size_t i = 0; i < d; ++i)
                        if (fiber_map(i, comp) == image) ++preimages;
                CHECK(preimages == image.support_size());
            }
        }
}

TEST_CASE("counting identity: sum_i C(d,i) C(k,i-1) = C(k+d, k+1)") {
    for (std::size_t d = 1; d <= 6; ++d)
        for (int k = 0; k <= 10; ++k) {
            BigInt sum = 0;
            for (std::size_t i = 1; i <= d; ++i)
                sum += binomial(d, i) * binomial(static_cast<std::size_t>(k), i - 1);
            CHECK(sum == binomial(static_cast<std::size_t>(k) + d, static_cast<std::size_t>(k) + 1));
            CHECK(sum == multiset_count(d, static_cast<std::size_t>(k) + 1));
        }
}

TEST_CASE("balanced_fiber_transversal with d = 1") {
    auto pairs = balanced_fiber_transversal(1, 3, 1, 1);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == 0);
    CHECK(pairs[0].second == WeakComposition{3});
    CHECK(balanced_fiber_transversal(1, 3, 0, 1).empty());
    CHECK_THROWS_AS(balanced_fiber_transversal(1, 3, 2, 5), ConstraintError);
}

TEST_CASE("balanced_fiber_transversal spec cell: d=2, k=1, s=3, cap=2") {
    auto pairs = balanced_fiber_transversal(2, 1, 3, 2);
    REQUIRE(pairs.size() == 3);
    std::set<WeakComposition> images;
    std::size_t per_coord[2] = {0, 0};
    for (const auto& [i, comp] : pairs) {
        images.insert(fiber_map(i, comp));
        ++per_coord[i];
    }
    CHECK(images.size() == 3);  // covers lambda(2) entirely
    CHECK(per_coord[0] <= 2);
    CHECK(per_coord[1] <= 2);
}

TEST_CASE("balanced_fiber_transversal properties on a small grid") {
    for (std::size_t d = 1; d <= 3; ++d)
        for (int k = 0; k <= 3; ++k) {
            const std::size_t total =
                multiset_count(d, static_cast<std::size_t>(k) + 1).convert_to<std::size_t>();
            for (std::size_t cap = 1; cap <= 3; ++cap) {
                const std::size_t s_max = std::min(total, cap * d);
                for (std::size_t s = 0; s <= s_max; ++s) {
                    auto pairs = balanced_fiber_transversal(d, k, s, cap);
                    REQUIRE(pairs.size() == s);
                    std::set<WeakComposition> images;
                    std::vector<std::size_t> load(d, 0);
                    for (const auto& [i, comp] : pairs) {
                        CHECK(comp.sum() == k);
                        images.insert(fiber_map(i, comp));
                        ++load[i];
                    }
                    CHECK(images.size() == s);  // pairwise distinct images
                    for (std::size_t l : load) CHECK(l <= cap);
                }
            }
        }
}

TEST_CASE("for_each_combination visits C(n, r) subsets in lexicographic order") {
    std::vector<std::vector<std::size_t>> seen;
    for_each_combination(5, 2, [&](const std::vector<std::size_t>& idx) { seen.push_back(idx); });
    REQUIRE(seen.size() == 10);
    CHECK(seen.front() == std::vector<std::size_t>{0, 1});
    CHECK(seen.back() == std::vector<std::size_t>{3, 4});
    for (std::size_t i = 0; i + 1 < seen.size(); ++i) CHECK(seen[i] < seen[i + 1]);

    std::size_t count = 0;
    for_each_combination(4, 0, [&](const auto&) { ++count; });
    CHECK(count == 1);  // the empty subset
}
