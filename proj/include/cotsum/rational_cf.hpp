#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "cotsum/errors.hpp"

namespace cotsum {

// Integers here are arbitrary precision: convergent denominators grow at
// least as fast as Fibonacci numbers, and the cross-checks downstream rely
// on these values being exact.
using bigint = mpz_class;

bigint gcd(const bigint& a, const bigint& b);

// Top-64-bit conversion; keeps ~19 significant digits even when the value
// does not fit in a double's 53-bit mantissa.
long double to_long_double(const bigint& z);

// Exact reduced fraction num/den with den >= 1, gcd(|num|, den) = 1.
// Zero is canonically 0/1.
class ReducedFraction {
public:
    ReducedFraction() : num_(0), den_(1) {}

    // Reduces to lowest terms, normalising den > 0. den == 0 is a domain error.
    ReducedFraction(bigint num, bigint den);

    // Rejects input that is not already in lowest terms (den < 1, gcd != 1).
    // Used where silently reducing would mask a caller bug.
    static ReducedFraction require_reduced(const bigint& num, const bigint& den);

    const bigint& num() const { return num_; }
    const bigint& den() const { return den_; }

    // Representative in [0, 1): subtracts floor(num/den).
    ReducedFraction mod1() const;

    bool is_integer() const { return den_ == 1; }

    double to_double() const;
    long double to_ld() const;

    // Checked narrowing for evaluators that sweep residues with machine ints.
    int64_t num_i64() const;
    int64_t den_i64() const;

    bool operator==(const ReducedFraction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

private:
    bigint num_, den_;
};

// Modular inverse of a mod q, returned in [1, q]. q >= 1 required;
// gcd(a, q) != 1 is a domain error. mod_inverse(x, 1) == 1 for any x.
bigint mod_inverse(const bigint& a, const bigint& q);

// Continued fraction <a0; a1, ..., ar> with convergents u_l / v_l.
// Recurrence: w_l = a_l * w_{l-1} + w_{l-2}, seeded with u_{-1} = 1,
// v_{-1} = 0, u_0 = a0, v_0 = 1. The index -1 entries are implicit.
struct ContinuedFraction {
    std::vector<bigint> a; // quotients, a[i] >= 1 for i >= 1
    std::vector<bigint> u; // convergent numerators,   u[l] for l = 0..r
    std::vector<bigint> v; // convergent denominators, v[l] for l = 0..r

    // True for a terminating expansion that equals the represented value
    // exactly; false for the truncated expansion of a real.
    bool exact = true;

    // False when a real input ran out of resolvable quotients before the
    // requested depth (the depth-overflow signal downstream code checks).
    bool precision_exhausted = false;

    int order() const { return static_cast<int>(a.size()) - 1; } // r
    ReducedFraction value() const; // u_r / v_r

    // Rebuilds u, v from the quotients.
    void rebuild_convergents();
};

// Canonical expansion of a rational: Euclid with floor division. For r >= 1
// the final quotient is >= 2.
ContinuedFraction cf_expand(const ReducedFraction& x);

// The other admissible expansion of the same value:
// <..., ar> <-> <..., ar - 1, 1> (and <a0> <-> <a0 - 1; 1> for integers).
// Applying it twice returns the original expansion. Rejects truncated
// (non-terminating) inputs.
ContinuedFraction cf_alternate(const ContinuedFraction& cf);

// Expansion of a real at working precision (~19 significant digits). Runs
// interval Euclid on [x - delta, x + delta]; stops once the next quotient is
// not resolvable, setting precision_exhausted. Produces at most `depth`
// quotients after a0.
ContinuedFraction cf_of_real(long double x, int depth);

} // namespace cotsum
