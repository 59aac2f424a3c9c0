#include "cotsum/cotangent.hpp"

#include <cmath>

#include "cotsum/errors.hpp"
#include "cotsum/estermann.hpp"
#include "cotsum/kahan.hpp"

namespace cotsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr double kEpsDbl = 0x1p-52;
constexpr double kEpsExt = 0x1p-63;

long double cot_pi_frac_ext(int64_t r, int64_t q) {
    if (2 * r > q)
        return -cot_pi_frac_ext(q - r, q);
    if (2 * r == q)
        return 0.0L;
    return 1.0L / std::tan(kPiL * static_cast<long double>(r) / static_cast<long double>(q));
}

// Shared summation core. The m <-> q-m pairing turns the weighted sum over
// all residues into sum_{m <= (q-1)/2} ((q-2m)/q) cot(pi r_m / q); for even q
// the middle residue lands on cot(pi/2) = 0 and is skipped outright.
template <typename T, typename CotFn>
T c0_pair_sum(int64_t a, int64_t q, CotFn cot_at, T& abs_sum) {
    Kahan<T> acc;
    abs_sum = 0;
    const int64_t half = (q - 1) / 2;
    int64_t r = 0;
    for (int64_t m = 1; m <= half; ++m) {
        r += a;
        if (r >= q)
            r -= q;
        const T w = static_cast<T>(q - 2 * m) / static_cast<T>(q);
        const T term = w * cot_at(r);
        acc.add(term);
        abs_sum += std::fabs(term);
    }
    return acc.value();
}

} // namespace

double cot_pi_frac(int64_t r, int64_t q) {
    if (2 * r > q)
        return -cot_pi_frac(q - r, q);
    if (2 * r == q)
        return 0.0;
    return 1.0 / std::tan(kPi * static_cast<double>(r) / static_cast<double>(q));
}

CotTable::CotTable(int64_t q) : q_(q) {
    if (q < 1)
        throw domain_error("modulus must be >= 1");
    if (q > (int64_t{1} << 28))
        throw resource_error("cotangent table exceeds the memory cap");
    cot_.assign(static_cast<size_t>(q), 0.0);
    for (int64_t r = 1; r < q; ++r)
        cot_[static_cast<size_t>(r)] = cot_pi_frac(r, q);
}

CotangentValue c0_direct(const ReducedFraction& x, Precision prec) {
    const ReducedFraction xm = x.mod1();
    CotangentValue out;
    out.x = x;
    out.method = C0Method::direct;
    const int64_t q = xm.den_i64();
    if (q == 1)
        return out; // empty sum
    const int64_t a = xm.num_i64();

    if (prec == Precision::extended) {
        long double abs_sum = 0;
        const long double v = c0_pair_sum<long double>(
            a, q, [q](int64_t r) { return cot_pi_frac_ext(r, q); }, abs_sum);
        out.value = static_cast<double>(v);
        out.err_estimate = kEpsExt * static_cast<double>(abs_sum + std::fabs(v));
        return out;
    }

    double abs_sum = 0;
    out.value = c0_pair_sum<double>(
        a, q, [q](int64_t r) { return cot_pi_frac(r, q); }, abs_sum);
    out.err_estimate = kEpsDbl * (abs_sum + std::fabs(out.value));
    return out;
}

CotangentValue c0_direct(const ReducedFraction& x, const CotTable& table) {
    const ReducedFraction xm = x.mod1();
    CotangentValue out;
    out.x = x;
    out.method = C0Method::direct;
    const int64_t q = xm.den_i64();
    if (q == 1)
        return out;
    if (q != table.modulus())
        throw domain_error("cotangent table modulus does not match denominator");
    const int64_t a = xm.num_i64();
    double abs_sum = 0;
    out.value = c0_pair_sum<double>(
        a, q, [&table](int64_t r) { return table.at(r); }, abs_sum);
    out.err_estimate = kEpsDbl * (abs_sum + std::fabs(out.value));
    return out;
}

double vasyunin(const bigint& a, const bigint& q) {
    const bigint abar = mod_inverse(a, q); // rejects gcd != 1
    return -c0_direct(ReducedFraction(abar, q)).value;
}

namespace {

// One reciprocity step at a/q with 1 <= a <= q.
double psi_base(const bigint& a, const bigint& q) {
    const double c1 = c0_direct(ReducedFraction(a, q)).value;
    const bigint r = q % a;
    const double c2 = c0_direct(ReducedFraction(r, a)).value;
    const double qd = static_cast<double>(to_long_double(q));
    const double ad = static_cast<double>(to_long_double(a));
    return c1 + (qd / ad) * c2 - 1.0 / (kPi * qd);
}

} // namespace

PsiValue psi_via_reciprocity(const ReducedFraction& x) {
    if (x.num() < 1)
        throw domain_error("psi requires a positive argument");
    PsiValue out;
    out.x = x;

    bigint A = x.num();
    const bigint& Q = x.den();
    if (A > Q) {
        // Descending through psi(x) = psi(x-1) - (1/x) psi((x-1)/x) costs one
        // direct summation per unit step; refuse absurd arguments.
        const double cost = static_cast<double>(to_long_double(A));
        if (cost * cost / static_cast<double>(to_long_double(Q)) > 4e9)
            throw resource_error("psi argument too large to evaluate");
    }

    double adjust = 0;
    while (A > Q) {
        const bigint Am = A - Q;
        const double inv_x = static_cast<double>(to_long_double(Q)) /
                             static_cast<double>(to_long_double(A));
        adjust -= inv_x * psi_base(Am, A); // gcd(A-Q, A) = gcd(Q, A) = 1
        A = Am;
    }
    out.value = psi_base(A, Q) + adjust;
    return out;
}

CotangentValue c0_cf_telescoped(const ReducedFraction& x, bool alternate_expansion) {
    const ReducedFraction xm = x.mod1();
    CotangentValue out;
    out.x = x;
    out.method = C0Method::cf_telescoped;
    const bigint& q = xm.den();
    if (q == 1)
        return out;

    const bigint b = mod_inverse(xm.num(), q);
    ContinuedFraction cf = cf_expand(ReducedFraction(b, q));
    if (alternate_expansion)
        cf = cf_alternate(cf);
    const EstermannValue d = d1_cf(cf);

    const double scale = 2.0 * static_cast<double>(to_long_double(q)) / (kPi * kPi);
    out.value = scale * d.value;
    out.err_estimate = scale * d.err_estimate + kEpsDbl * std::fabs(out.value);
    return out;
}

namespace {

// c0 rebuilt from one reciprocity step per level of the Euclid chain; equals
// the direct sum identically in exact arithmetic, so the difference below is
// pure accumulated rounding.
double c0_chain(int64_t a, int64_t q) {
    if (a == 0)
        return 0.0; // c0 at integers
    const double psi1 = psi_base(bigint(a), bigint(q));
    return psi1 + 1.0 / (kPi * static_cast<double>(q)) -
           (static_cast<double>(q) / static_cast<double>(a)) * c0_chain(q % a, a);
}

} // namespace

double reciprocity_residual(const ReducedFraction& x) {
    if (x.num() < 1 || x.num() >= x.den())
        throw domain_error("reciprocity residual requires 0 < a < q");
    const int64_t q = x.den_i64();
    if (q > 100'000'000)
        throw resource_error("denominator too large for the Euclid descent");
    const int64_t a = x.num_i64();

    const double one_step = psi_via_reciprocity(x).value;
    const double ref = c0_chain(a, q) +
                       (static_cast<double>(q) / static_cast<double>(a)) * c0_chain(q % a, a) -
                       1.0 / (kPi * static_cast<double>(q));
    return std::fabs(one_step - ref);
}

} // namespace cotsum
