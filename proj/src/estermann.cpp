#include "cotsum/estermann.hpp"

#include <cmath>
#include <numbers>

#include "cotsum/cotangent.hpp"
#include "cotsum/errors.hpp"
#include "cotsum/kahan.hpp"

namespace cotsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr double kEpsDbl = 0x1p-52;

// sin(2 pi r / q) with exact zeros at r = 0 and 2r = q, and exact sign
// symmetry sin_2pi(q - r) = -sin_2pi(r). Everything is folded into a tan/sin
// argument <= pi/2 before touching libm.
double sin_2pi_frac(int64_t r, int64_t q) {
    int64_t m = 2 * r; // sin(pi m / q)
    double sign = 1.0;
    if (m == 0)
        return 0.0;
    if (m > q) {
        sign = -1.0;
        m -= q;
    }
    if (m == q)
        return 0.0;
    if (2 * m > q)
        m = q - m;
    return sign * std::sin(kPi * static_cast<double>(m) / static_cast<double>(q));
}

} // namespace

DivisorTable::DivisorTable(int64_t limit, int64_t cap) : limit_(limit) {
    if (limit < 1)
        throw domain_error("sieve limit must be >= 1");
    if (limit > cap)
        throw resource_error("divisor sieve exceeds the configured cap");
    d_.assign(static_cast<size_t>(limit) + 1, 0);
    for (int64_t i = 1; i <= limit; ++i)
        for (int64_t j = i; j <= limit; j += i)
            ++d_[static_cast<size_t>(j)];
}

DivisorTable sieve_divisors(int64_t X, int64_t cap) {
    return DivisorTable(X, cap);
}

std::vector<double> divisor_weights(const DivisorTable& table, int64_t X) {
    if (X < 1 || X > table.limit())
        throw domain_error("weight cutoff outside the sieved range");
    std::vector<double> w(static_cast<size_t>(X) + 1, 0.0);
    for (int64_t n = 1; n <= X; ++n)
        w[static_cast<size_t>(n)] =
            static_cast<double>(table.d(n)) / static_cast<double>(n);
    return w;
}

namespace {

EstermannValue d1_truncated_real_core(double x_image, long double frac_x, int64_t X,
                                      const DivisorTable& table) {
    EstermannValue out;
    out.x = x_image;
    out.method = D1Method::truncated_series;
    out.truncation = X;

    Kahan<double> acc;
    double abs_sum = 0;
    long double ph = 0.0L;
    for (int64_t n = 1; n <= X; ++n) {
        ph += frac_x;
        if (ph >= 1.0L)
            ph -= 1.0L;
        const double s = std::sin(2.0 * kPi * static_cast<double>(ph));
        const double term = static_cast<double>(table.d(n)) * s / static_cast<double>(n);
        acc.add(term);
        abs_sum += std::fabs(term);
    }
    out.value = acc.value();
    // Tail heuristic for generic reals; the rounding term covers summation.
    // Fluctuates by small multiples when x sits near a low-denominator rational.
    const double lg = std::log(static_cast<double>(X) + 2.0);
    out.err_estimate = 40.0 * lg * lg / static_cast<double>(X) + kEpsDbl * abs_sum;
    return out;
}

} // namespace

EstermannValue d1_truncated(const ReducedFraction& x, int64_t X, const DivisorTable& table) {
    if (X < 1)
        throw domain_error("truncation must be >= 1");
    if (X > table.limit())
        throw domain_error("truncation beyond the sieved range");

    const ReducedFraction xm = x.mod1();
    EstermannValue out;
    out.x_rational = x;
    out.x = x.to_double();
    out.method = D1Method::truncated_series;
    out.truncation = X;

    if (xm.den() == 1)
        return out; // every term vanishes exactly

    // Huge denominators gain nothing from residue bookkeeping; treat as real.
    const int64_t table_cap = std::min<int64_t>(4 * X, int64_t{1} << 22);
    if (xm.den() > table_cap) {
        EstermannValue r = d1_truncated_real_core(out.x, xm.to_ld(), X, table);
        r.x_rational = x;
        r.x = out.x;
        return r;
    }

    const int64_t q = xm.den_i64();
    const int64_t a = xm.num_i64();
    std::vector<double> st(static_cast<size_t>(q));
    for (int64_t r = 0; r < q; ++r)
        st[static_cast<size_t>(r)] = sin_2pi_frac(r, q);

    Kahan<double> acc;
    double abs_sum = 0;
    int64_t r = 0;
    for (int64_t n = 1; n <= X; ++n) {
        r += a;
        if (r >= q)
            r -= q;
        const double term =
            static_cast<double>(table.d(n)) * st[static_cast<size_t>(r)] / static_cast<double>(n);
        acc.add(term);
        abs_sum += std::fabs(term);
    }
    out.value = acc.value();
    // Tail of the sine series over a full residue class: observed worst case
    // is ~1.3 q log(X) / X across q <= 80 and X in [1e4, 1e6].
    out.err_estimate = 4.0 * static_cast<double>(q) *
                           std::log(static_cast<double>(X) + 2.0) / static_cast<double>(X) +
                       kEpsDbl * abs_sum;
    return out;
}

EstermannValue d1_truncated(double x, int64_t X, const DivisorTable& table) {
    if (X < 1)
        throw domain_error("truncation must be >= 1");
    if (X > table.limit())
        throw domain_error("truncation beyond the sieved range");
    if (!std::isfinite(x))
        throw domain_error("argument must be finite");
    long double fx = static_cast<long double>(x);
    fx -= std::floor(fx);
    return d1_truncated_real_core(x, fx, X, table);
}

double d1_truncated_dyadic(uint64_t m, const std::vector<double>& weights) {
    if (weights.size() < 2)
        return 0.0;
    const int64_t X = static_cast<int64_t>(weights.size()) - 1;
    const long double u = std::ldexp(static_cast<long double>(m), -64);
    const double c2 = 2.0 * static_cast<double>(std::cos(2.0L * kPiL * u));

    // sin(2 pi n u) by the three-term recurrence, reseeded every block from
    // the exact wraparound product n*m (mod 2^64), which IS frac(n u).
    constexpr int64_t kBlock = 512;
    Kahan<double> acc;
    for (int64_t n0 = 1; n0 <= X; n0 += kBlock) {
        const uint64_t p_prev = static_cast<uint64_t>(n0 - 1) * m;
        const uint64_t p_cur = static_cast<uint64_t>(n0) * m;
        double s_prev = static_cast<double>(
            std::sin(2.0L * kPiL * std::ldexp(static_cast<long double>(p_prev), -64)));
        double s_cur = static_cast<double>(
            std::sin(2.0L * kPiL * std::ldexp(static_cast<long double>(p_cur), -64)));
        const int64_t hi = std::min(n0 + kBlock - 1, X);
        for (int64_t n = n0; n <= hi; ++n) {
            acc.add(weights[static_cast<size_t>(n)] * s_cur);
            const double s_next = c2 * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
    }
    return acc.value();
}

EstermannValue d1_rational(const ReducedFraction& x) {
    const ReducedFraction xm = x.mod1();
    EstermannValue out;
    out.x_rational = x;
    out.x = x.to_double();
    out.method = D1Method::rational_bridge;
    if (xm.den() == 1)
        return out;

    const bigint b = mod_inverse(xm.num(), xm.den());
    const CotangentValue c = c0_direct(ReducedFraction(b, xm.den()));
    const double scale =
        kPi * kPi / (2.0 * static_cast<double>(to_long_double(xm.den())));
    out.value = scale * c.value;
    out.err_estimate = scale * c.err_estimate + kEpsDbl * std::fabs(out.value);
    return out;
}

namespace {

EstermannValue d1_ladder(const ContinuedFraction& cf) {
    EstermannValue out;
    out.method = D1Method::cf_formula;
    out.precision_exhausted = cf.precision_exhausted;
    if (cf.a.empty())
        throw domain_error("empty continued fraction");
    const size_t r = cf.a.size() - 1;
    out.truncation = static_cast<int64_t>(r);
    if (r == 0)
        return out; // integer: D vanishes

    bigint vsum = 0;
    for (size_t l = 1; l <= r; ++l)
        vsum += cf.v[l] + cf.v[l - 1];
    if (vsum > 200'000'000)
        throw resource_error("continued-fraction ladder exceeds the summation budget");

    Kahan<double> acc;
    double log_sum = 0;
    for (size_t l = 1; l <= r; ++l) {
        const double vl = static_cast<double>(to_long_double(cf.v[l]));
        const PsiValue psi = psi_via_reciprocity(ReducedFraction(cf.v[l - 1], cf.v[l]));
        const double sign = (l % 2 == 1) ? -1.0 : 1.0;
        acc.add(sign / vl * (1.0 / (kPi * vl) + psi.value));
        log_sum += std::log(vl + 2.0);
    }
    out.value = -(kPi * kPi / 2.0) * acc.value();
    out.err_estimate = kPi * kEpsDbl * log_sum;
    if (!cf.exact)
        out.err_estimate += 4.0 / static_cast<double>(to_long_double(cf.v[r]));
    return out;
}

} // namespace

EstermannValue d1_cf(const ContinuedFraction& cf) {
    EstermannValue out = d1_ladder(cf);
    const ReducedFraction v = cf.value();
    out.x = v.to_double();
    if (cf.exact)
        out.x_rational = v;
    return out;
}

EstermannValue d1_cf(const ReducedFraction& x) {
    EstermannValue out = d1_ladder(cf_expand(x));
    out.x_rational = x;
    out.x = x.to_double();
    return out;
}

EstermannValue d1_cf(double x, int depth) {
    if (!std::isfinite(x))
        throw domain_error("argument must be finite");
    EstermannValue out = d1_ladder(cf_of_real(static_cast<long double>(x), depth));
    out.x = x;
    return out;
}

EstermannValue d1_fractional_series(double x, int64_t X) {
    if (X < 1)
        throw domain_error("truncation must be >= 1");
    if (!std::isfinite(x))
        throw domain_error("argument must be finite");
    EstermannValue out;
    out.x = x;
    out.method = D1Method::fractional_part_series;
    out.truncation = X;

    long double fx = static_cast<long double>(x);
    fx -= std::floor(fx);
    Kahan<double> acc;
    long double ph = 0.0L;
    for (int64_t n = 1; n <= X; ++n) {
        ph += fx;
        if (ph >= 1.0L)
            ph -= 1.0L;
        acc.add((0.5 - static_cast<double>(ph)) / static_cast<double>(n));
    }
    out.value = kPi * acc.value();
    out.err_estimate = 12.0 * std::log(static_cast<double>(X) + 2.0) / static_cast<double>(X);
    return out;
}

double s_majorant(const ContinuedFraction& cf) {
    if (cf.a.empty())
        throw domain_error("empty continued fraction");
    double s = 0;
    for (size_t n = 0; n + 1 < cf.v.size(); ++n) {
        const double vn = static_cast<double>(to_long_double(cf.v[n]));
        const double vn1 = static_cast<double>(to_long_double(cf.v[n + 1]));
        s += std::log(vn1) / vn;
    }
    return s;
}

double s_majorant(double x, int depth) {
    if (!std::isfinite(x))
        throw domain_error("argument must be finite");
    return s_majorant(cf_of_real(static_cast<long double>(x), depth));
}

} // namespace cotsum
