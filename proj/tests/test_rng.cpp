#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "tlab/rng.hpp"

using namespace tlab;

TEST_CASE("derive_seed is pure and collision-free over a long index scan") {
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(42, 8));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1u << 20);
    for (std::uint64_t i = 0; i < 1000000; ++i)
        CHECK(seen.insert(derive_seed(0x9e3779b9, i)).second);
}

TEST_CASE("same seed gives the same stream across mixed calls") {
    Rng a(123), b(123);
    for (int i = 0; i < 200; ++i) {
        CHECK(a.next() == b.next());
        CHECK(a.below(97) == b.below(97));
        CHECK(a.uniform01() == b.uniform01());
        CHECK(a.poisson(3.0) == b.poisson(3.0));
        CHECK(a.binomial(50, 0.3) == b.binomial(50, 0.3));
    }
}

TEST_CASE("below is uniform") {
    Rng rng(7);
    CHECK(rng.below(1) == 0);

    const std::uint64_t bound = 7;
    const int draws = 70000;
    std::vector<int> hits(bound, 0);
    for (int i = 0; i < draws; ++i) {
        std::uint64_t v = rng.below(bound);
        REQUIRE(v < bound);
        ++hits[v];
    }
    double expected = double(draws) / double(bound);
    double chi2 = 0;
    for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
    CHECK(chi2 < 30.0); // 6 dof, far beyond the 0.999 quantile (22.5)
}

TEST_CASE("uniform01 stays in [0, 1) with a sane mean") {
    Rng rng(11);
    double sum = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / draws == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("streams from different derive_seed indices look independent") {
    // First below(16) output of 4096 sibling streams should be uniform.
    std::vector<int> hits(16, 0);
    for (std::uint64_t i = 0; i < 4096; ++i) {
        Rng rng(derive_seed(555, i));
        ++hits[rng.below(16)];
    }
    double expected = 4096.0 / 16.0;
    double chi2 = 0;
    for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
    CHECK(chi2 < 45.0); // 15 dof
}

static void check_poisson_moments(double lambda, std::uint64_t seed) {
    Rng rng(seed);
    const int draws = 200000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < draws; ++i) {
        auto v = double(rng.poisson(lambda));
        REQUIRE(v >= 0);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / draws;
    double var = sumsq / draws - mean * mean;
    double se = std::sqrt(lambda / draws);
    CHECK(std::abs(mean - lambda) < 5 * se);
    CHECK(var == doctest::Approx(lambda).epsilon(0.05));
}

TEST_CASE("poisson moments, both regimes") {
    CHECK(Rng(1).poisson(0.0) == 0);
    check_poisson_moments(0.5, 2);
    check_poisson_moments(3.5, 3);  // inversion
    check_poisson_moments(12.0, 4); // ptrd
    check_poisson_moments(40.0, 5);

    // Point mass at 0 for the subcritical rate used all over the tests.
    Rng rng(6);
    int zeros = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i)
        if (rng.poisson(0.5) == 0) ++zeros;
    CHECK(double(zeros) / draws == doctest::Approx(std::exp(-0.5)).epsilon(0.01));
}

TEST_CASE("binomial matches its pmf") {
    Rng rng(8);
    CHECK(rng.binomial(100, 0.0) == 0);
    CHECK(rng.binomial(100, 1.0) == 100);
    CHECK(rng.binomial(0, 0.3) == 0);

    const int draws = 100000;
    std::vector<int> hits(11, 0);
    for (int i = 0; i < draws; ++i) {
        auto v = rng.binomial(10, 0.5);
        REQUIRE(v >= 0);
        REQUIRE(v <= 10);
        ++hits[v];
    }
    double chi2 = 0;
    for (int k = 0; k <= 10; ++k) {
        double pmf = 1.0;
        for (int j = 0; j < k; ++j) pmf = pmf * double(10 - j) / double(j + 1);
        pmf /= 1024.0;
        double expected = pmf * draws;
        chi2 += (hits[k] - expected) * (hits[k] - expected) / expected;
    }
    CHECK(chi2 < 40.0); // 10 dof

    // Large n goes through the recursive split; check the mean.
    double sum = 0;
    for (int i = 0; i < 20000; ++i) sum += double(rng.binomial(100000, 0.3));
    CHECK(sum / 20000 == doctest::Approx(30000.0).epsilon(0.002));
}

TEST_CASE("distinct returns sorted unique values in range") {
    Rng rng(9);
    for (int round = 0; round < 500; ++round) {
        std::int32_t n = 1 + std::int32_t(rng.below(50));
        std::int32_t k = std::int32_t(rng.below(std::uint64_t(n) + 1));
        auto v = rng.distinct(n, k);
        REQUIRE(v.size() == std::size_t(k));
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] >= 0);
            CHECK(v[i] < n);
            if (i) CHECK(v[i - 1] < v[i]);
        }
    }

    // Every size-2 subset of [0, 5) should appear with equal frequency.
    std::vector<int> pair_hits(25, 0);
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
        auto v = rng.distinct(5, 2);
        ++pair_hits[v[0] * 5 + v[1]];
    }
    double expected = draws / 10.0;
    double chi2 = 0;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
            int h = pair_hits[a * 5 + b];
            chi2 += (h - expected) * (h - expected) / expected;
        }
    CHECK(chi2 < 35.0); // 9 dof
}
