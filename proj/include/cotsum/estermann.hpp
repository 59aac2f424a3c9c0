#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cotsum/rational_cf.hpp"

namespace cotsum {

inline constexpr int64_t kDefaultSieveCap = 100'000'000;

// Divisor-count table d(1..limit), filled by the classical O(X log X) sieve.
// uint16_t is ample: d(n) < 800 for n <= 1e8.
class DivisorTable {
public:
    explicit DivisorTable(int64_t limit, int64_t cap = kDefaultSieveCap);

    int64_t limit() const { return limit_; }
    int d(int64_t n) const { return d_[static_cast<size_t>(n)]; }

private:
    int64_t limit_;
    std::vector<uint16_t> d_;
};

DivisorTable sieve_divisors(int64_t X, int64_t cap = kDefaultSieveCap);

// d(n)/n for n = 0..X (index 0 unused), the shared weight vector of the
// sampling hot loop.
std::vector<double> divisor_weights(const DivisorTable& table, int64_t X);

enum class D1Method {
    truncated_series,
    rational_bridge,
    cf_formula,
    fractional_part_series,
};

struct EstermannValue {
    std::optional<ReducedFraction> x_rational;
    double x = 0; // double image of the argument
    double value = 0;
    D1Method method = D1Method::truncated_series;
    int64_t truncation = 0; // series cutoff, or continued-fraction depth used
    double err_estimate = 0;
    bool precision_exhausted = false;
};

// Sharp truncation sum_{n<=X} d(n) sin(2 pi n x)/n. Rational arguments get
// exact residue bookkeeping (n x mod 1 never drifts); reals accumulate the
// fractional part in long double, trustworthy while n|x| <= 1e15.
EstermannValue d1_truncated(const ReducedFraction& x, int64_t X, const DivisorTable& table);
EstermannValue d1_truncated(double x, int64_t X, const DivisorTable& table);

// Same series at the exact dyadic x = m / 2^64, driven by the three-term
// sine recurrence with periodic reseeding on exactly reduced arguments.
// weights must come from divisor_weights.
double d1_truncated_dyadic(uint64_t m, const std::vector<double>& weights);

// Closed form at rationals: D(1, a/q) = (pi^2 / 2q) c0(inv(a) mod q / q).
EstermannValue d1_rational(const ReducedFraction& x);

// Alternating ladder over the convergent denominators,
//   D(1, x) = -(pi^2/2) sum_{l=1}^{r} ((-1)^l / v_l)(1/(pi v_l) + psi(v_{l-1}/v_l)),
// exact for terminating expansions, truncated otherwise.
EstermannValue d1_cf(const ContinuedFraction& cf);
EstermannValue d1_cf(const ReducedFraction& x);
EstermannValue d1_cf(double x, int depth);

// pi sum_{n<=X} (1/2 - frac(n x))/n: same limit at irrationals, but only
// conditionally and slowly; kept as a diagnostic cross-check. At rationals
// the limit differs (frac has jumps there), so do not compare it against the
// other evaluators on exact fractions.
EstermannValue d1_fractional_series(double x, int64_t X);

// S(x) = sum_n log(v_{n+1}) / v_n over the available convergents; dominates
// sup_X |D(1,x)|_X up to an absolute factor, and is finite iff the expansion
// carries no wildly growing quotients.
double s_majorant(const ContinuedFraction& cf);
double s_majorant(double x, int depth);

} // namespace cotsum
