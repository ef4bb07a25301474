#include <cmath>
#include <set>

#include "doctest.h"
#include "wislab/rng.hpp"

using namespace wislab;

TEST_CASE("same seed reproduces the same stream") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
        CHECK(a.complex_normal(2.0) == b.complex_normal(2.0));
    }
}

TEST_CASE("different seeds diverge") {
    Rng a(1);
    Rng b(2);
    int equal = 0;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() == b.next_u64()) ++equal;
    }
    CHECK(equal == 0);
}

TEST_CASE("derive_seed is stable, order-sensitive and path-sensitive") {
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(1, {3}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(derive_seed(1, {}) != derive_seed(1, {0}));

    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 200; ++i) seen.insert(derive_seed(7, {i}));
    CHECK(seen.size() == 200);
}

TEST_CASE("uniform() stays in [0, 1) with the right mean") {
    Rng rng(3);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform(-2.5, 7.5);
        REQUIRE(u >= -2.5);
        REQUIRE(u < 7.5);
    }
}

TEST_CASE("uniform_int covers the whole closed range") {
    Rng rng(5);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 500; ++i) {
        const auto v = rng.uniform_int(2, 5);
        REQUIRE(v >= 2);
        REQUIRE(v <= 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("normal() has standard moments") {
    Rng rng(6);
    const int n = 50000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("complex_normal carries the requested power") {
    Rng rng(7);
    const int n = 50000;
    double power = 0.0;
    for (int i = 0; i < n; ++i) power += std::norm(rng.complex_normal(3.0));
    CHECK(std::abs(power / n - 3.0) < 0.1);
}
