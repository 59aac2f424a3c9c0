#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cotsum/distribution.hpp"
#include "cotsum/rng.hpp"

using namespace cotsum;

TEST_CASE("sampling is sorted, deterministic, and thread-invariant") {
    const DivisorTable t(2000);
    const EmpiricalDistribution one = sample_distribution(2000, 2000, 1, t, 1);
    CHECK(one.count() == 2000);
    CHECK(one.truncation == 2000);
    CHECK(one.seed == 1);
    CHECK(std::is_sorted(one.samples.begin(), one.samples.end()));

    const EmpiricalDistribution again = sample_distribution(2000, 2000, 1, t, 1);
    CHECK(one.samples == again.samples);
    const EmpiricalDistribution threaded = sample_distribution(2000, 2000, 1, t, 3);
    CHECK(one.samples == threaded.samples);
    const EmpiricalDistribution other = sample_distribution(2000, 2000, 2, t, 1);
    CHECK(one.samples != other.samples);
}

TEST_CASE("cdf queries on a hand-built sample") {
    EmpiricalDistribution d;
    d.samples = {-1.0, 0.0, 0.0, 2.0};
    CHECK(cdf_query(d, -5.0) == 0.0);
    CHECK(cdf_query(d, -1.0) == 0.25);
    CHECK(cdf_query(d, 0.0) == 0.75);
    CHECK(cdf_query_strict(d, 0.0) == 0.25); // strict drops the atoms at 0
    CHECK(cdf_query(d, 5.0) == 1.0);
}

TEST_CASE("histogram bins, edges, and mass conservation") {
    EmpiricalDistribution d;
    d.samples = {-1.0, 0.5, 1.5, 3.9, 4.0, 7.0};
    const Histogram h = histogram(d, 4, 0.0, 4.0);
    REQUIRE(h.counts.size() == 4);
    CHECK(h.centers[0] == doctest::Approx(0.5));
    CHECK(h.centers[3] == doctest::Approx(3.5));
    CHECK(h.counts == std::vector<int64_t>{1, 1, 0, 1});
    CHECK(h.underflow == 1);
    CHECK(h.overflow == 2); // the right edge belongs to overflow
    int64_t mass = h.underflow + h.overflow;
    for (int64_t c : h.counts)
        mass += c;
    CHECK(mass == d.count());
}

TEST_CASE("sampled distribution is centered and roughly symmetric") {
    const DivisorTable t(5000);
    const EmpiricalDistribution d = sample_distribution(5000, 5000, 1, t, 1);
    const double f0 = cdf_query(d, 0.0);
    CHECK(std::fabs(f0 - 0.5) <= 0.05);
    for (double s : {0.5, 1.0}) {
        const double left = cdf_query(d, -s);
        const double right = 1.0 - cdf_query_strict(d, s);
        CHECK(std::fabs(left - right) <= 0.05);
    }
    // the bulk sits well inside [-2, 2]
    const Histogram h = histogram(d, 50, -2.0, 2.0);
    const double inside = static_cast<double>(d.count() - h.underflow - h.overflow);
    CHECK(inside / static_cast<double>(d.count()) >= 0.95);
}

TEST_CASE("tail probe fractions are ordered and reproduce frozen values") {
    const auto tails = s_tail_probe(1000, {2.0, 4.0, 6.0, 8.0}, 30, 1);
    REQUIRE(tails.size() == 4);
    CHECK(tails[0].first == 2.0);
    CHECK(tails[3].first == 8.0);
    for (size_t i = 0; i < tails.size(); ++i) {
        CHECK(tails[i].second >= 0.0);
        CHECK(tails[i].second <= 1.0);
        if (i > 0)
            CHECK(tails[i].second <= tails[i - 1].second);
    }
    // the majorant of a uniform draw essentially never falls below 2
    CHECK(tails[0].second >= 0.99);
    CHECK(tails[1].second == doctest::Approx(0.048).epsilon(0.5));
}

TEST_CASE("straddling window returns the trivial witness 1/2") {
    const DivisorTable t(1000); // 1/2 re-verifies exactly at any cutoff
    const DensityWitness w = find_density_witness(-0.01, 0.05, 1000, &t);
    CHECK(w.success);
    CHECK(w.x == ReducedFraction(1, 2));
    CHECK(w.value == 0.0);
    CHECK(w.evaluations == 0);
}

TEST_CASE("witness search lands in the window and re-verifies") {
    const DivisorTable t(1000000);
    const DensityWitness w = find_density_witness(0.3, 0.05, kDefaultWitnessBudget, &t);
    REQUIRE(w.success);
    CHECK(0.3 < w.value);
    CHECK(w.value <= 0.35);
    CHECK(std::fabs(w.reverified - w.value) <= w.combined_err);
    CHECK(w.evaluations <= kDefaultWitnessBudget);

    // the reported quotients reconstruct the reported fraction
    ContinuedFraction cf;
    for (int64_t a : w.quotients)
        cf.a.emplace_back(a);
    cf.exact = true;
    cf.rebuild_convergents();
    CHECK(cf.value() == w.x);
    const double replay = 2.0 / (std::numbers::pi * std::numbers::pi) * d1_cf(cf).value;
    CHECK(replay == doctest::Approx(w.value).epsilon(1e-12));
}

TEST_CASE("witness search domain guards") {
    CHECK_THROWS_AS(find_density_witness(0.3, 0.0, 1000), domain_error);
    CHECK_THROWS_AS(find_density_witness(0.3, -0.1, 1000), domain_error);
    CHECK_THROWS_AS(find_density_witness(0.3, 0.05, 4), domain_error);
}
