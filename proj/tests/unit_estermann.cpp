#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cotsum/estermann.hpp"
#include "cotsum/rng.hpp"

using namespace cotsum;

namespace {
constexpr double kPi = std::numbers::pi;
const double kGolden = 0.6180339887498949;
}

TEST_CASE("divisor sieve anchors") {
    const DivisorTable t(10000);
    CHECK(t.limit() == 10000);
    CHECK(t.d(1) == 1);
    CHECK(t.d(2) == 2);
    CHECK(t.d(6) == 4);
    CHECK(t.d(12) == 6);
    CHECK(t.d(28) == 6);
    CHECK(t.d(7560) == 64); // highly composite
    CHECK(t.d(9973) == 2);  // prime
    CHECK(t.d(10000) == 25);
    int64_t mass = 0;
    for (int64_t n = 1; n <= 10000; ++n)
        mass += t.d(n);
    CHECK(mass == 93668);
}

TEST_CASE("divisor counts are multiplicative on coprime pairs") {
    const DivisorTable t(1000000);
    CounterRng rng(17);
    int done = 0;
    for (uint64_t i = 0; done < 200; i += 2) {
        const int64_t a = 2 + static_cast<int64_t>(rng.below(i, 998));
        const int64_t b = 2 + static_cast<int64_t>(rng.below(i + 1, 998));
        if (std::gcd(a, b) != 1)
            continue;
        CHECK(t.d(a * b) == t.d(a) * t.d(b));
        ++done;
    }
}

TEST_CASE("divisor sieve domain and resource guards") {
    CHECK_THROWS_AS(DivisorTable(0), domain_error);
    CHECK_THROWS_AS(DivisorTable(100, 50), resource_error);
}

TEST_CASE("divisor weights are d(n)/n exactly") {
    const DivisorTable t(100);
    const std::vector<double> w = divisor_weights(t, 100);
    REQUIRE(w.size() == 101);
    for (int64_t n = 1; n <= 100; ++n)
        CHECK(w[static_cast<size_t>(n)] ==
              static_cast<double>(t.d(n)) / static_cast<double>(n));
}

TEST_CASE("rational closed form: anchor at 1/3, zero at halves and integers") {
    // D(1, 1/3) = pi^2 sqrt(3) / 54
    const EstermannValue v = d1_rational(ReducedFraction(1, 3));
    CHECK(v.value == doctest::Approx(kPi * kPi * std::sqrt(3.0) / 54.0).epsilon(1e-14));
    CHECK(v.method == D1Method::rational_bridge);
    CHECK(d1_rational(ReducedFraction(1, 2)).value == 0.0);
    CHECK(d1_rational(ReducedFraction(4, 1)).value == 0.0);
}

TEST_CASE("rational closed form is odd, bit-exactly") {
    CounterRng rng(23);
    int done = 0;
    for (uint64_t i = 0; done < 100; i += 2) {
        const int64_t q = 3 + static_cast<int64_t>(rng.below(i, 5000));
        const int64_t a = 1 + static_cast<int64_t>(rng.below(i + 1, q - 1));
        if (std::gcd(a, q) != 1)
            continue;
        CHECK(d1_rational(ReducedFraction(q - a, q)).value ==
              -d1_rational(ReducedFraction(a, q)).value);
        ++done;
    }
}

TEST_CASE("ladder formula agrees with the closed form at rationals") {
    CounterRng rng(3);
    int done = 0;
    for (uint64_t i = 0; done < 120; i += 2) {
        const int64_t q = 2 + static_cast<int64_t>(rng.below(i, 2000));
        const int64_t a = 1 + static_cast<int64_t>(rng.below(i + 1, q - 1));
        if (std::gcd(a, q) != 1)
            continue;
        const EstermannValue bridge = d1_rational(ReducedFraction(a, q));
        const EstermannValue ladder = d1_cf(ReducedFraction(a, q));
        CHECK(ladder.method == D1Method::cf_formula);
        CHECK(std::fabs(ladder.value - bridge.value) <=
              1e-8 * (1.0 + std::fabs(bridge.value)));
        ++done;
    }
}

TEST_CASE("truncated series converges to the closed form within its error model") {
    const DivisorTable t(100000);
    CounterRng rng(29);
    int done = 0;
    for (uint64_t i = 0; done < 50; i += 2) {
        const int64_t q = 2 + static_cast<int64_t>(rng.below(i, 29));
        const int64_t a = 1 + static_cast<int64_t>(rng.below(i + 1, q - 1));
        if (std::gcd(a, q) != 1)
            continue;
        const EstermannValue tr = d1_truncated(ReducedFraction(a, q), 100000, t);
        const EstermannValue ref = d1_rational(ReducedFraction(a, q));
        CHECK(std::fabs(tr.value - ref.value) <= tr.err_estimate + ref.err_estimate);
        CHECK(tr.truncation == 100000);
        CHECK(tr.x_rational.has_value());
        ++done;
    }
}

TEST_CASE("truncated series guards its domain") {
    const DivisorTable t(1000);
    CHECK_THROWS_AS(d1_truncated(ReducedFraction(1, 3), 0, t), domain_error);
    CHECK_THROWS_AS(d1_truncated(ReducedFraction(1, 3), 2000, t), domain_error);
    const double nan = std::nan("");
    CHECK_THROWS_AS(d1_truncated(nan, 1000, t), domain_error);
    CHECK(d1_truncated(ReducedFraction(5, 1), 1000, t).value == 0.0);
}

TEST_CASE("real-argument truncation tracks the ladder at quadratic irrationals") {
    const DivisorTable t(200000);
    const double targets[][2] = {{kGolden, 25}, {0.4142135623730951, 18}};
    for (auto [u, depth] : targets) {
        const double cf = d1_cf(u, static_cast<int>(depth)).value;
        CHECK(std::fabs(d1_truncated(u, 200000, t).value - cf) <= 1e-2);
        CHECK(std::fabs(d1_fractional_series(u, 200000).value - cf) <= 2e-2);
    }
}

TEST_CASE("ladder at a fixed real argument is frozen") {
    const EstermannValue v = d1_cf(kGolden, 20);
    CHECK(v.value == doctest::Approx(-0.1848296013162160).epsilon(1e-12));
    CHECK(v.err_estimate > 0.0);
    // the depth-28 value sits inside the depth-20 error bar
    CHECK(std::fabs(v.value - -0.1848883630432922) <= v.err_estimate);
}

TEST_CASE("dyadic sampler matches the real-path series") {
    const DivisorTable t(50000);
    const std::vector<double> w = divisor_weights(t, 50000);
    CounterRng rng(1);
    for (uint64_t i = 0; i < 20; ++i) {
        const uint64_t m = rng.bits(i) | 1;
        const double x = static_cast<double>(std::ldexp(static_cast<long double>(m), -64));
        const double a = d1_truncated_dyadic(m, w);
        const double b = d1_truncated(x, 50000, t).value;
        CHECK(std::fabs(a - b) <= 1e-8);
    }
}

TEST_CASE("dyadic sampler is antisymmetric under negation mod 1") {
    const DivisorTable t(20000);
    const std::vector<double> w = divisor_weights(t, 20000);
    CounterRng rng(9);
    for (uint64_t i = 0; i < 40; ++i) {
        const uint64_t m = rng.bits(i) | 1;
        CHECK(std::fabs(d1_truncated_dyadic(m, w) + d1_truncated_dyadic(~m + 1, w)) <=
              1e-10);
    }
    CHECK(d1_truncated_dyadic(12345, {}) == 0.0);
}

TEST_CASE("majorant: golden-ratio constant, positivity, domination") {
    CHECK(s_majorant(kGolden, 25) == doctest::Approx(3.2857).epsilon(0.004));
    CHECK(s_majorant(kGolden, 10) < s_majorant(kGolden, 25));
    const DivisorTable t(20000);
    CounterRng rng(47);
    for (uint64_t i = 0; i < 60; ++i) {
        const double u = rng.uniform(i);
        const double S = s_majorant(u, 30);
        CHECK(S >= 0.0);
        CHECK(std::fabs(d1_truncated(u, 20000, t).value) <= 3.0 * (1.0 + S));
    }
}

TEST_CASE("ladder rejects an empty expansion") {
    ContinuedFraction cf;
    CHECK_THROWS_AS(d1_cf(cf), domain_error);
    CHECK_THROWS_AS(s_majorant(cf), domain_error);
}
