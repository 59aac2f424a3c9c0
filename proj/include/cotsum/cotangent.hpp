#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "cotsum/rational_cf.hpp"

namespace cotsum {

inline constexpr double euler_gamma = std::numbers::egamma;

enum class C0Method { direct, cf_telescoped };

// Working precision of the direct summation. Extended buys ~3 digits for
// very large moduli at roughly 2x cost.
enum class Precision { dbl, extended };

struct CotangentValue {
    ReducedFraction x;
    double value = 0;
    C0Method method = C0Method::direct;
    double err_estimate = 0; // summation error model, >= 0
};

struct PsiValue {
    ReducedFraction x;
    double value = 0;
};

// cot(pi r / q) for r = 1..q-1, built once per modulus and shared across a
// residue sweep. Read-only after construction.
class CotTable {
public:
    explicit CotTable(int64_t q);

    int64_t modulus() const { return q_; }
    double at(int64_t r) const { return cot_[static_cast<size_t>(r)]; }

private:
    int64_t q_;
    std::vector<double> cot_;
};

// cot(pi r / q) with the argument folded into (0, pi/2]; exact zero at the
// midpoint 2r = q. Requires 0 < r < q.
double cot_pi_frac(int64_t r, int64_t q);

// -sum_{m=1}^{q-1} (m/q) cot(pi m a / q), evaluated mod 1.
// Residues are reduced in exact integer arithmetic; the m <-> q-m pairing
// halves the work and removes the worst cancellation.
CotangentValue c0_direct(const ReducedFraction& x, Precision prec = Precision::dbl);

// Sweep variant: cotangents come from a shared table with modulus == den(x).
CotangentValue c0_direct(const ReducedFraction& x, const CotTable& table);

// V(a,q) = -c0(inv(a)/q) with a*inv(a) = 1 mod q.
double vasyunin(const bigint& a, const bigint& q);

// psi(a/q) = c0(a/q) + (q/a) c0((q mod a)/a) - 1/(pi q) for a/q in (0,1].
// Arguments above 1 are reduced first through the three-term relation
// psi(x) = psi(x-1) - (1/x) psi((x-1)/x); the reciprocity form alone is not
// valid there (the periodic extension of c0 breaks the relation by exactly
// q/(pi (a+q)^2)). Requires num >= 1.
PsiValue psi_via_reciprocity(const ReducedFraction& x);

// Second evaluator of c0: the continued-fraction ladder for D_sin(1, inv(a)/q)
// converted back through c0(a/q) = 2 q pi^-2 D_sin(1, inv(a)/q). Same O(q)
// cost as c0_direct; exists for independent validation, not speed.
// `alternate_expansion` evaluates the ladder over the second admissible
// expansion of inv(a)/q instead of the canonical one.
CotangentValue c0_cf_telescoped(const ReducedFraction& x, bool alternate_expansion = false);

// |psi via one reciprocity step - psi via the full Euclid descent| for
// x in (0,1). Algebraically zero; measures accumulated rounding across the
// chain. Requires 0 < num < den.
double reciprocity_residual(const ReducedFraction& x);

} // namespace cotsum
