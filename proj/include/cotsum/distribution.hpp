#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cotsum/estermann.hpp"

namespace cotsum {

// Sorted sample of 2 pi^-2 D(1, u)_X at uniform dyadic u in (0,1).
struct EmpiricalDistribution {
    std::vector<double> samples; // ascending
    int64_t truncation = 0;
    uint64_t seed = 0;

    int64_t count() const { return static_cast<int64_t>(samples.size()); }
};

EmpiricalDistribution sample_distribution(int64_t count, int64_t X, uint64_t seed,
                                          const DivisorTable& table, int threads = 1);

// Fraction of samples <= t, and < t; the two differ by the mass sitting
// exactly on t.
double cdf_query(const EmpiricalDistribution& dist, double t);
double cdf_query_strict(const EmpiricalDistribution& dist, double t);

struct Histogram {
    double lo = 0;
    double hi = 0;
    std::vector<double> centers;
    std::vector<int64_t> counts;
    int64_t underflow = 0;
    int64_t overflow = 0; // includes samples exactly at hi
};

Histogram histogram(const EmpiricalDistribution& dist, int bins, double lo, double hi);

// Tail fractions P[S(u) > K] for the quotient-growth majorant S over `count`
// seeded uniforms, expanded to `depth` quotients. Returned in the order of Ks.
std::vector<std::pair<double, double>> s_tail_probe(int64_t count, const std::vector<double>& Ks,
                                                    int depth, uint64_t seed);

struct DensityWitness {
    double target_z = 0;
    double epsilon = 0;
    bool success = false;
    ReducedFraction x;
    std::vector<int64_t> quotients; // continued-fraction digits of x
    double value = 0;      // ladder evaluation of 2 pi^-2 D(1, x)
    double reverified = 0; // independent truncated-series evaluation
    double combined_err = 0;
    int64_t evaluations = 0;
    std::string note;
};

inline constexpr int64_t kDefaultWitnessBudget = 20'000;

// Hunts for x with z < 2 pi^-2 D(1,x) <= z + eps among fractions
// [0; 1,...,1, x1, x2, 1, 1]: the all-ones head pins the value near the
// center of the bulk, x1 sets a coarse offset through log(x1)/v_head, and
// x2 is the fine knob with resolution ~1/(x1 x2). Every hit is re-verified
// against the truncated series before it is accepted.
DensityWitness find_density_witness(double z, double eps,
                                    int64_t budget = kDefaultWitnessBudget,
                                    const DivisorTable* reverify_table = nullptr);

} // namespace cotsum
