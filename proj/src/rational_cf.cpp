#include "cotsum/rational_cf.hpp"

#include <cmath>
#include <limits>

namespace cotsum {

bigint gcd(const bigint& a, const bigint& b) {
    bigint g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

long double to_long_double(const bigint& z) {
    if (mpz_fits_slong_p(z.get_mpz_t()))
        return static_cast<long double>(mpz_get_si(z.get_mpz_t()));
    bigint az = z < 0 ? bigint(-z) : z;
    const size_t bits = mpz_sizeinbase(az.get_mpz_t(), 2);
    // Take the top 64 bits, then scale back. Error <= 2^-63 relative.
    bigint top = az >> static_cast<unsigned long>(bits - 64);
    long double m = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
    m = std::ldexp(m, static_cast<int>(bits - 64));
    return z < 0 ? -m : m;
}

ReducedFraction::ReducedFraction(bigint num, bigint den) : num_(num), den_(den) {
    if (den_ == 0)
        throw domain_error("fraction with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    bigint g = cotsum::gcd(num_ < 0 ? bigint(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

ReducedFraction ReducedFraction::require_reduced(const bigint& num, const bigint& den) {
    if (den < 1)
        throw domain_error("denominator must be >= 1");
    bigint g = cotsum::gcd(num < 0 ? bigint(-num) : num, den);
    if (g != 1)
        throw domain_error("fraction not in lowest terms");
    ReducedFraction f;
    f.num_ = num;
    f.den_ = den;
    return f;
}

ReducedFraction ReducedFraction::mod1() const {
    bigint q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    ReducedFraction f;
    f.num_ = r; // 0 <= r < den, gcd unchanged
    f.den_ = den_;
    return f;
}

double ReducedFraction::to_double() const {
    return static_cast<double>(to_ld());
}

long double ReducedFraction::to_ld() const {
    return to_long_double(num_) / to_long_double(den_);
}

int64_t ReducedFraction::num_i64() const {
    if (!mpz_fits_slong_p(num_.get_mpz_t()))
        throw resource_error("numerator exceeds 64-bit range");
    return mpz_get_si(num_.get_mpz_t());
}

int64_t ReducedFraction::den_i64() const {
    if (!mpz_fits_slong_p(den_.get_mpz_t()))
        throw resource_error("denominator exceeds 64-bit range");
    return mpz_get_si(den_.get_mpz_t());
}

bigint mod_inverse(const bigint& a, const bigint& q) {
    if (q < 1)
        throw domain_error("modulus must be >= 1");
    bigint r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t()) == 0)
        throw domain_error("argument not invertible mod q");
    if (r == 0) // q == 1; report the unit representative in [1, q]
        r = q;
    return r;
}

ReducedFraction ContinuedFraction::value() const {
    return ReducedFraction::require_reduced(u.back(), v.back());
}

void ContinuedFraction::rebuild_convergents() {
    u.assign(a.size(), 0);
    v.assign(a.size(), 0);
    bigint up = 1, vp = 0; // index -1
    for (size_t l = 0; l < a.size(); ++l) {
        u[l] = (l == 0) ? a[0] : bigint(a[l] * u[l - 1] + up);
        v[l] = (l == 0) ? bigint(1) : bigint(a[l] * v[l - 1] + vp);
        if (l > 0) {
            up = u[l - 1];
            vp = v[l - 1];
        }
    }
}

ContinuedFraction cf_expand(const ReducedFraction& x) {
    ContinuedFraction cf;
    bigint a0, r;
    mpz_fdiv_qr(a0.get_mpz_t(), r.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    cf.a.push_back(a0);
    // Euclid on (den, r): x = a0 + r/den, so the next quotient is den / r.
    bigint p = x.den(), q = r;
    while (q != 0) {
        bigint quot, rem;
        mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        cf.a.push_back(quot);
        p = q;
        q = rem;
    }
    cf.rebuild_convergents();
    return cf;
}

ContinuedFraction cf_alternate(const ContinuedFraction& cf) {
    if (cf.a.empty())
        throw domain_error("empty continued fraction");
    if (!cf.exact)
        throw domain_error("alternate form requires a terminating expansion");
    ContinuedFraction out;
    out.a = cf.a;
    const size_t r = out.a.size() - 1;
    if (r >= 1 && out.a[r] == 1) {
        // <..., a_{r-1}, 1> -> <..., a_{r-1} + 1>
        out.a.pop_back();
        out.a.back() += 1;
    } else {
        // <..., a_r> -> <..., a_r - 1, 1>  (also <a0> -> <a0 - 1; 1>)
        out.a[r] -= 1;
        out.a.push_back(1);
    }
    out.rebuild_convergents();
    return out;
}

namespace {

// Exact rational value of a long double (64-bit mantissa assumed <= 64).
ReducedFraction exact_rational_of(long double x) {
    int e = 0;
    long double f = std::frexp(x, &e); // |f| in [0.5, 1)
    bool neg = f < 0.0L;
    if (neg)
        f = -f;
    // Extract the mantissa in two 32-bit chunks; both steps are exact.
    const long double two32 = 4294967296.0L;
    uint64_t hi = static_cast<uint64_t>(std::floor(f * two32));
    long double rem = f * two32 - static_cast<long double>(hi);
    uint64_t lo = static_cast<uint64_t>(std::floor(rem * two32));
    bigint m = (bigint(hi) << 32) + bigint(lo);
    if (neg)
        m = -m;
    const int shift = 64 - e; // x = m * 2^{e-64}
    if (shift >= 0)
        return ReducedFraction(m, bigint(1) << shift);
    return ReducedFraction(m << (-shift), 1);
}

} // namespace

ContinuedFraction cf_of_real(long double x, int depth) {
    if (depth < 1)
        throw domain_error("depth must be >= 1");
    if (!std::isfinite(static_cast<double>(x)))
        throw domain_error("input is not finite");
    if (x == 0.0L) {
        ContinuedFraction cf;
        cf.a.push_back(0);
        cf.rebuild_convergents();
        return cf;
    }
    // Expand the exact rational value of x, then cut where a quotient stops
    // being attributable to the underlying real: with input uncertainty
    // delta, convergents are trustworthy while 2 * delta * v_l * v_{l+1} < 1.
    const ContinuedFraction full = cf_expand(exact_rational_of(x));
    const long double ax = std::fabs(x);
    const long double delta = std::ldexp(ax < 0.5L ? 0.5L : ax, -63);

    size_t keep = full.a.size();
    for (size_t l = 0; l + 1 < full.a.size(); ++l) {
        const long double prod =
            to_long_double(full.v[l]) * to_long_double(full.v[l + 1]);
        if (2.0L * delta * prod >= 1.0L) {
            keep = l + 1; // drop a_{l+1} and everything after
            break;
        }
    }

    ContinuedFraction cf;
    const size_t requested = static_cast<size_t>(depth) + 1; // a0 plus depth
    cf.precision_exhausted = keep < full.a.size() && keep < requested;
    if (keep > requested)
        keep = requested;
    cf.exact = keep == full.a.size();
    cf.a.assign(full.a.begin(), full.a.begin() + keep);
    // A truncation can leave a trailing 1 behind; merging it keeps exact
    // terminations canonical and is harmless for truncated reals.
    if (!cf.precision_exhausted && keep == full.a.size() && cf.a.size() >= 2 &&
        cf.a.back() == 1) {
        cf.a.pop_back();
        cf.a.back() += 1;
    }
    cf.rebuild_convergents();
    return cf;
}

} // namespace cotsum
