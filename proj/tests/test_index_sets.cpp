#include <doctest.h>

#include "cvplan/index_sets.hpp"

using namespace cvplan;

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(SplitGeometry(10, 6));
    CHECK_NOTHROW(SplitGeometry(2, 1));
    CHECK_THROWS_AS(SplitGeometry(10, 10), InvalidGeometry);
    CHECK_THROWS_AS(SplitGeometry(10, 4), InvalidGeometry);  // n2 > n1
    CHECK_THROWS_AS(SplitGeometry(1, 1), InvalidGeometry);
}

TEST_CASE("closed forms on known values") {
    CHECK(lemma_moment(MomentTag::a, SplitGeometry(10, 6)) == Rational(4, 10));
    CHECK(lemma_moment(MomentTag::a, SplitGeometry(2, 1)) == Rational(1, 2));
    // e = n2(n2-1)/(n(n-1))
    CHECK(lemma_moment(MomentTag::e, SplitGeometry(6, 3)) == Rational(6, 30));
    // h = n1^2 n2^2 / (n^2 (n-1)^2)
    CHECK(lemma_moment(MomentTag::h, SplitGeometry(6, 3)) == Rational(81, 900));
    // i1 example: 9*9/(36*5) = 9/20
    CHECK(lemma_moment(MomentTag::i1, SplitGeometry(6, 3)) == Rational(9, 20));
    // f by independence: (2/5)^2
    CHECK(lemma_moment(MomentTag::f, SplitGeometry(5, 3)) == Rational(4, 25));
}

TEST_CASE("small-n guard for three-index formulas") {
    SplitGeometry g(2, 1);
    CHECK_THROWS_AS(lemma_moment(MomentTag::c, g), InvalidGeometry);
    CHECK_THROWS_AS(lemma_moment(MomentTag::i2, g), InvalidGeometry);
    CHECK_THROWS_AS(lemma_moment(MomentTag::j, g), InvalidGeometry);
    CHECK_THROWS_AS(enumerate_moment(MomentTag::c, g), InvalidGeometry);
    CHECK_NOTHROW(lemma_moment(MomentTag::a, g));
}

TEST_CASE("enumeration on trivial cases") {
    CHECK(enumerate_moment(MomentTag::a, SplitGeometry(4, 2)) == Rational(1, 2));
    CHECK(enumerate_moment(MomentTag::f, SplitGeometry(5, 3)) == Rational(4, 25));
    CHECK(enumerate_moment(MomentTag::i1, SplitGeometry(6, 3)) == Rational(9, 20));
}

TEST_CASE("enumeration budget") {
    // C(30,15)^2 is far beyond 1e7 pairs.
    CHECK_THROWS_AS(enumerate_moment(MomentTag::f, SplitGeometry(30, 15)),
                    BudgetExceeded);
}

TEST_CASE("closed form equals enumeration for every tag, n in 4..8") {
    for (int n = 4; n <= 8; ++n) {
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1) {
            SplitGeometry g(n, n1);
            for (MomentTag tag : all_moment_tags()) {
                CAPTURE(n);
                CAPTURE(n1);
                CAPTURE(tag_name(tag));
                CHECK(lemma_moment(tag, g) == enumerate_moment(tag, g));
            }
        }
    }
}

TEST_CASE("complement probability sums to one") {
    for (int n = 4; n <= 12; ++n)
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1) {
            const Rational in_s = Rational(n1, n);  // P(i in S)
            CHECK(lemma_moment(MomentTag::a, SplitGeometry(n, n1)) + in_s ==
                  Rational(1));
        }
}

TEST_CASE("moments lie in [0, n]") {
    for (int n = 4; n <= 8; ++n)
        for (int n1 = (n + 1) / 2; n1 <= n - 1; ++n1)
            for (MomentTag tag : all_moment_tags()) {
                const Rational v = lemma_moment(tag, SplitGeometry(n, n1));
                CHECK(v >= 0);
                CHECK(v <= Rational(n) * n);  // card^2 tags bounded by n1^2 <= n^2
            }
}

TEST_CASE("unranking is lexicographic and consistent with iteration order") {
    // rank 0 must be {0,1,...,k-1}; last rank must be the top-k block.
    auto first = unrank_combination(6, 3, 0);
    CHECK(first == std::vector<int>{0, 1, 2});
    auto last = unrank_combination(6, 3, binomial(6, 3) - 1);
    CHECK(last == std::vector<int>{3, 4, 5});
    // Ranks increase lexicographically.
    auto mid = unrank_combination(6, 3, 1);
    CHECK(mid == std::vector<int>{0, 1, 3});
}

TEST_CASE("k-fold overlap constants") {
    auto [y0, ys0] = kfold_overlap(10, 2);
    CHECK(y0 == 0);
    CHECK(ys0 == 0);
    auto [y1, ys1] = kfold_overlap(12, 3);
    CHECK(y1 == 4);
    CHECK(ys1 == 0);
    auto [y2, ys2] = kfold_overlap(100, 10);
    CHECK(y2 == 80);
    CHECK(ys2 == 0);
    CHECK_THROWS_AS(kfold_overlap(10, 3), NotDivisible);
    CHECK_THROWS_AS(kfold_overlap(10, 1), InvalidGeometry);
}

TEST_CASE("tag names round-trip") {
    for (MomentTag tag : all_moment_tags())
        CHECK(tag_from_name(tag_name(tag)) == tag);
    CHECK_THROWS_AS(tag_from_name("zz"), DomainError);
}
