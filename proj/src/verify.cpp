#include "cotsum/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cotsum/cotangent.hpp"
#include "cotsum/distribution.hpp"
#include "cotsum/errors.hpp"
#include "cotsum/estermann.hpp"
#include "cotsum/kahan.hpp"
#include "cotsum/moments.hpp"
#include "cotsum/rng.hpp"

namespace cotsum {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ctx {
    VerifyLevel level;
    CounterRng rng;
    uint64_t ctr = 0; // monotone draw counter, private to each check

    bool full() const { return level == VerifyLevel::full; }
    int64_t pick(int64_t lo, int64_t hi) { // inclusive
        return lo + static_cast<int64_t>(
                        rng.below(ctr++, static_cast<uint64_t>(hi - lo + 1)));
    }
    ReducedFraction fraction(int64_t qmax) {
        const int64_t q = pick(2, qmax);
        const int64_t a = pick(1, q - 1);
        return ReducedFraction(a, q); // reduced, so the modulus may shrink
    }
    long double real01() { return rng.uniform_ld(ctr++); }
};

using CheckFn = std::function<bool(Ctx&, std::ostringstream&)>;

struct Check {
    const char* name;
    CheckFn fn;
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// ---- continued fractions ------------------------------------------------

bool check_cf_rational(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 1000 : 200;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(1'000'000);
        const ContinuedFraction cf = cf_expand(x);
        if (!(cf.value() == x)) {
            out << "reconstruction failed at " << x.num() << "/" << x.den();
            return false;
        }
        if (!cf.exact) {
            out << "rational expansion not flagged exact";
            return false;
        }
        for (size_t l = 1; l < cf.a.size(); ++l) {
            const bigint det = cf.u[l] * cf.v[l - 1] - cf.u[l - 1] * cf.v[l];
            const bigint want = (l % 2 == 1) ? 1 : -1;
            if (det != want) {
                out << "determinant at level " << l;
                return false;
            }
            if (cf.v[l] < cf.v[l - 1]) {
                out << "denominators not monotone";
                return false;
            }
            // |x - u/v| <= 1 / (v_l v_{l+1}), cross-multiplied in integers
            if (l + 1 < cf.a.size()) {
                const bigint lhs = abs(x.num() * cf.v[l] - x.den() * cf.u[l]) * cf.v[l + 1];
                if (lhs > x.den()) {
                    out << "approximation bound at level " << l;
                    return false;
                }
            }
        }
        const ContinuedFraction alt = cf_alternate(cf);
        const size_t dlen = cf.a.size() > alt.a.size() ? cf.a.size() - alt.a.size()
                                                       : alt.a.size() - cf.a.size();
        if (!(alt.value() == x) || dlen != 1) {
            out << "alternate expansion broken at " << x.num() << "/" << x.den();
            return false;
        }
    }
    out << n << " expansions";
    return true;
}

bool check_cf_real(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 3000 : 300;
    const int depth = 30;
    for (int i = 0; i < n; ++i) {
        const long double u = c.real01();
        const ContinuedFraction cf = cf_of_real(u, depth);
        for (size_t l = 0; l < cf.v.size(); ++l) {
            // v_l >= 2^((l-3)/2), exactly: 8 v_l^2 >= 2^l
            if (cf.v[l] * cf.v[l] * 8 < (bigint(1) << l)) {
                out << "denominator growth too slow at level " << l;
                return false;
            }
        }
        const long double rec = to_long_double(cf.u.back()) / to_long_double(cf.v.back());
        const long double verr = 1.0L / (to_long_double(cf.v.back()) * to_long_double(cf.v.back()));
        if (fabsl(u - rec) > verr + 1e-18L) {
            out << "convergent strayed from its target";
            return false;
        }
    }
    out << n << " reals, depth " << depth;
    return true;
}

bool check_mod_inverse(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 1000 : 200;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(1'000'000);
        const bigint inv = mod_inverse(x.num(), x.den());
        if (inv < 1 || inv > x.den() || (inv * x.num()) % x.den() != 1 % x.den()) {
            out << "inverse failed at " << x.num() << " mod " << x.den();
            return false;
        }
    }
    out << n << " inverses";
    return true;
}

// ---- cotangent sums -------------------------------------------------------

struct Anchor {
    int64_t a, q;
    double value;
};

bool check_c0_anchors(Ctx&, std::ostringstream& out) {
    const Anchor anchors[] = {
        {1, 3, 0.1924500897298753},  // sqrt(3)/9
        {1, 5, 0.8908130915292854},  {2, 5, -0.0803245663544909},
        {3, 7, -0.6129819184119794}, {17, 101, 53.49719976788020},
        {123, 1009, -212.1652882844926},
    };
    for (const Anchor& an : anchors) {
        const CotangentValue v = c0_direct(ReducedFraction(an.a, an.q));
        if (std::fabs(v.value - an.value) > 1e-10 * (1 + std::fabs(an.value))) {
            out << "anchor " << an.a << "/" << an.q << " off by "
                << fmt(v.value - an.value);
            return false;
        }
    }
    if (c0_direct(ReducedFraction(1, 2)).value != 0.0 ||
        c0_direct(ReducedFraction(7, 1)).value != 0.0) {
        out << "exact zeros missed";
        return false;
    }
    // periodicity is exact: 4/3 reduces to the same residue as 1/3
    if (c0_direct(ReducedFraction(4, 3)).value != c0_direct(ReducedFraction(1, 3)).value) {
        out << "periodicity violated";
        return false;
    }
    out << "6 anchors";
    return true;
}

bool check_c0_oddness(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 400 : 100;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(3000);
        const int64_t q = x.den_i64();
        const ReducedFraction y(q - x.num_i64(), q);
        // the fold in cot_pi_frac makes the sign flip exact term by term
        if (c0_direct(x).value != -c0_direct(y).value) {
            out << "sign flip inexact at " << x.num() << "/" << q;
            return false;
        }
        const CotTable table(q);
        if (c0_direct(x, table).value != c0_direct(x).value) {
            out << "table path diverges at " << x.num() << "/" << q;
            return false;
        }
    }
    out << n << " pairs, bit-exact";
    return true;
}

bool check_c0_dual(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 300 : 60;
    const int64_t qmax = c.full() ? 5000 : 2000;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(qmax);
        const double direct = c0_direct(x).value;
        for (bool alt : {false, true}) {
            const double tele = c0_cf_telescoped(x, alt).value;
            const double rel = std::fabs(direct - tele) / (1 + std::fabs(direct));
            worst = std::max(worst, rel);
            if (rel > 1e-8) {
                out << "evaluators disagree at " << x.num() << "/" << x.den()
                    << " rel " << fmt(rel);
                return false;
            }
        }
    }
    out << n << " fractions, worst rel " << fmt(worst);
    return true;
}

bool check_c0_extended(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 100 : 30;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(2000);
        const CotangentValue d = c0_direct(x, Precision::dbl);
        const CotangentValue e = c0_direct(x, Precision::extended);
        const double diff = std::fabs(d.value - e.value);
        worst = std::max(worst, diff / (d.err_estimate + 1e-300));
        if (diff > 2 * (d.err_estimate + e.err_estimate) + 1e-15) {
            out << "precisions disagree at " << x.num() << "/" << x.den();
            return false;
        }
    }
    out << n << " fractions, worst diff/err " << fmt(worst);
    return true;
}

bool check_psi(Ctx& c, std::ostringstream& out) {
    if (std::fabs(psi_via_reciprocity(ReducedFraction(1, 2)).value + 1 / (2 * kPi)) > 1e-15 ||
        std::fabs(psi_via_reciprocity(ReducedFraction(1, 1)).value + 1 / kPi) > 1e-15 ||
        std::fabs(psi_via_reciprocity(ReducedFraction(2, 1)).value + 3 / (4 * kPi)) > 1e-14 ||
        std::fabs(psi_via_reciprocity(ReducedFraction(1, 3)).value - 0.0863467943352784) > 1e-13 ||
        std::fabs(psi_via_reciprocity(ReducedFraction(2, 5)).value + 0.1439865435912490) > 1e-13) {
        out << "anchor value off";
        return false;
    }
    // psi(x+1) = psi(x) - (1/(x+1)) psi(x/(x+1))
    const int n = c.full() ? 200 : 50;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(2000);
        const int64_t a = x.num_i64(), q = x.den_i64();
        const double lhs = psi_via_reciprocity(ReducedFraction(a + q, q)).value;
        const double rhs = psi_via_reciprocity(x).value -
                           (static_cast<double>(q) / static_cast<double>(a + q)) *
                               psi_via_reciprocity(ReducedFraction(a, a + q)).value;
        worst = std::max(worst, std::fabs(lhs - rhs));
        if (std::fabs(lhs - rhs) > 1e-8) {
            out << "shift identity off by " << fmt(lhs - rhs) << " at " << a << "/" << q;
            return false;
        }
    }
    out << n << " shifts, worst " << fmt(worst);
    return true;
}

bool check_psi_asymptotic(Ctx& c, std::ostringstream& out) {
    std::vector<int64_t> qs = {10, 100, 1000, 10000};
    if (c.full())
        qs.push_back(100000);
    double worst = 0;
    for (int64_t q : qs) {
        const double psi = psi_via_reciprocity(ReducedFraction(1, q)).value;
        const double lead = -(std::log(2 * kPi / static_cast<double>(q)) - euler_gamma) *
                            static_cast<double>(q) / kPi;
        const double ratio = std::fabs(psi - lead) / std::log(static_cast<double>(q));
        worst = std::max(worst, ratio);
        if (ratio > 10) {
            out << "remainder/log q = " << fmt(ratio) << " at q = " << q;
            return false;
        }
    }
    out << "worst remainder/log q " << fmt(worst);
    return true;
}

bool check_reciprocity_residual(Ctx& c, std::ostringstream& out) {
    const int n = c.full() ? 1000 : 150;
    const int64_t qmax = c.full() ? 10000 : 2000;
    double worst = 0;
    for (int i = 0; i < n; ++i)
        worst = std::max(worst, reciprocity_residual(c.fraction(qmax)));
    if (worst > 1e-8) {
        out << "worst residual " << fmt(worst);
        return false;
    }
    out << n << " fractions, worst " << fmt(worst);
    return true;
}

// ---- divisor series ---------------------------------------------------------

bool check_sieve(Ctx& c, std::ostringstream& out) {
    const DivisorTable t(10000);
    const std::pair<int64_t, int> anchors[] = {{1, 1},  {2, 2},    {6, 4},
                                               {12, 6}, {9973, 2}, {7560, 64}};
    for (auto [n, dn] : anchors) {
        if (t.d(n) != dn) {
            out << "d(" << n << ") = " << t.d(n);
            return false;
        }
    }
    int64_t sum = 0;
    for (int64_t n = 1; n <= 10000; ++n)
        sum += t.d(n);
    if (sum != 93668) {
        out << "sum d(n) over n <= 1e4 is " << sum;
        return false;
    }
    for (int i = 0; i < 50; ++i) {
        const int64_t m = c.pick(2, 90);
        const int64_t n = c.pick(2, 90);
        if (std::gcd(m, n) != 1)
            continue;
        if (t.d(m * n) != t.d(m) * t.d(n)) {
            out << "multiplicativity at " << m << "*" << n;
            return false;
        }
    }
    out << "anchors, mass, multiplicativity";
    return true;
}

bool check_estermann_antisym(Ctx& c, std::ostringstream& out) {
    const DivisorTable table(200'000);
    const int n = c.full() ? 100 : 30;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(2000);
        const ReducedFraction y(x.den() - x.num(), x.den());
        const EstermannValue a = d1_rational(x);
        const EstermannValue b = d1_rational(y);
        if (std::fabs(a.value + b.value) > a.err_estimate + b.err_estimate + 1e-12) {
            out << "bridge not antisymmetric at " << x.num() << "/" << x.den();
            return false;
        }
        const int64_t X = 50'000;
        if (d1_truncated(x, X, table).value != -d1_truncated(y, X, table).value) {
            out << "truncated sign flip inexact at " << x.num() << "/" << x.den();
            return false;
        }
    }
    // dyadic kernel: u and 1-u
    const std::vector<double> w = divisor_weights(table, 20'000);
    for (int i = 0; i < 20; ++i) {
        const uint64_t m = c.rng.bits(c.ctr++) | 1;
        const double s1 = d1_truncated_dyadic(m, w);
        const double s2 = d1_truncated_dyadic(~m + 1, w); // 2^64 - m
        if (std::fabs(s1 + s2) > 1e-10) {
            out << "dyadic kernel asymmetric: " << fmt(s1 + s2);
            return false;
        }
    }
    out << n << " fractions + 20 dyadics";
    return true;
}

bool check_estermann_bridge_vs_cf(Ctx& c, std::ostringstream& out) {
    // closed form at 1/3: pi^2 sqrt(3) / 54
    const double d13 = d1_rational(ReducedFraction(1, 3)).value;
    if (std::fabs(d13 - 0.3165677087646698) > 1e-13) {
        out << "D(1,1/3) = " << fmt(d13);
        return false;
    }
    if (d1_rational(ReducedFraction(1, 2)).value != 0.0) {
        out << "D(1,1/2) != 0";
        return false;
    }
    const int n = c.full() ? 200 : 40;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const ReducedFraction x = c.fraction(2000);
        const double a = d1_rational(x).value;
        const double b = d1_cf(x).value;
        const double rel = std::fabs(a - b) / (1 + std::fabs(a));
        worst = std::max(worst, rel);
        if (rel > 1e-8) {
            out << "bridge vs ladder at " << x.num() << "/" << x.den() << ": " << fmt(rel);
            return false;
        }
    }
    out << n << " fractions, worst rel " << fmt(worst);
    return true;
}

bool check_estermann_truncated(Ctx& c, std::ostringstream& out) {
    const int64_t X = c.full() ? 1'000'000 : 200'000;
    const int64_t qmax = c.full() ? 50 : 20;
    const DivisorTable table(X);
    double worst = 0;
    for (int64_t q = 2; q <= qmax; ++q) {
        for (int64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1)
                continue;
            const ReducedFraction x(a, q);
            const EstermannValue t = d1_truncated(x, X, table);
            const EstermannValue r = d1_rational(x);
            const double diff = std::fabs(t.value - r.value);
            worst = std::max(worst, diff);
            if (diff > 1e-2) {
                out << "cutoff error " << fmt(diff) << " at " << a << "/" << q;
                return false;
            }
            if (diff > t.err_estimate + r.err_estimate) {
                out << "cutoff error above its estimate at " << a << "/" << q << ": "
                    << fmt(diff) << " vs " << fmt(t.err_estimate);
                return false;
            }
        }
    }
    out << "q <= " << qmax << ", X = " << X << ", worst " << fmt(worst);
    return true;
}

bool check_estermann_real(Ctx& c, std::ostringstream& out) {
    const int64_t X = c.full() ? 1'000'000 : 200'000;
    const DivisorTable table(X);
    // depth capped per target: the second expansion grows like Pell numbers
    const std::pair<double, int> targets[] = {{0.6180339887498949, 25},
                                              {0.4142135623730951, 18}};
    double worst = 0;
    for (auto [u, depth] : targets) {
        const double tr = d1_truncated(u, X, table).value;
        const double cf = d1_cf(u, depth).value;
        const double fr = d1_fractional_series(u, X).value;
        worst = std::max({worst, std::fabs(tr - cf), std::fabs(fr - cf)});
        if (std::fabs(tr - cf) > 1e-2 || std::fabs(fr - cf) > 2e-2) {
            out << "evaluators disagree at " << fmt(u) << ": " << fmt(tr) << " / "
                << fmt(cf) << " / " << fmt(fr);
            return false;
        }
    }
    out << "worst spread " << fmt(worst);
    return true;
}

bool check_majorant(Ctx& c, std::ostringstream& out) {
    // golden ratio: S = sum log(F_{n+2}) / F_{n+1} is a known constant
    const double sg = s_majorant(0.6180339887498949, 25);
    if (std::fabs(sg - 3.2857) > 0.01) {
        out << "golden-ratio majorant " << fmt(sg);
        return false;
    }
    const int n = c.full() ? 500 : 150;
    const int64_t X = c.full() ? 20'000 : 3000;
    const DivisorTable table(X);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(c.real01());
        const double S = s_majorant(u, 30);
        if (S < 0) {
            out << "negative majorant";
            return false;
        }
        const double D = std::fabs(d1_truncated(u, X, table).value);
        worst = std::max(worst, D / (1 + S));
        if (D > 3.0 * (1 + S)) {
            out << "|D_X| = " << fmt(D) << " above 3(1+S), S = " << fmt(S);
            return false;
        }
    }
    out << n << " points, worst |D|/(1+S) " << fmt(worst);
    return true;
}

// ---- moment constants ------------------------------------------------------

bool check_hk_brute(Ctx&, std::ostringstream& out) {
    const HkEstimate h2 = hk_brute(2, 50);
    const HkEstimate h3 = hk_brute(3, 40);
    const HkEstimate h4 = hk_brute(4, 20);
    if (std::fabs(h2.value - 0.1175077204341450) > 1e-12 ||
        std::fabs(h4.value - 0.0540820283684090) > 1e-12) {
        out << "even anchors off: " << fmt(h2.value) << ", " << fmt(h4.value);
        return false;
    }
    if (std::fabs(h3.value) > 1e-10 || h3.im_residue > 1e-10) {
        out << "odd moment not vanishing: " << fmt(h3.value);
        return false;
    }
    out << "H2(50), H3(40), H4(20)";
    return true;
}

bool check_hk_dft_vs_brute(Ctx&, std::ostringstream& out) {
    const int specs[][2] = {{2, 50}, {3, 40}, {4, 20}};
    double worst = 0;
    for (auto [k, N] : specs) {
        const double b = hk_brute(k, N).value;
        const double d = hk_dft(k, N).value;
        worst = std::max(worst, std::fabs(b - d));
        if (std::fabs(b - d) > 1e-10) {
            out << "k=" << k << " N=" << N << " differ by " << fmt(b - d);
            return false;
        }
    }
    out << "worst " << fmt(worst);
    return true;
}

bool check_hk_h2(Ctx& c, std::ostringstream& out) {
    const double closed = h2_zeta_closed_form().value;
    if (std::fabs(closed - 5.0 / 36.0) > 1e-15) {
        out << "closed form is " << fmt(closed);
        return false;
    }
    const int64_t N = c.full() ? 100'000 : 20'000;
    const HkEstimate h = hk_dft(2, N);
    const double gap = std::fabs(h.value - closed);
    if (gap > (c.full() ? 1e-3 : 3e-3) || gap > 1.5 * h.tail_estimate + 1e-9 ||
        h.im_residue > 1e-10 * std::fabs(h.value)) {
        out << "H2(" << N << ") gap " << fmt(gap) << ", tail " << fmt(h.tail_estimate);
        return false;
    }
    out << "gap " << fmt(gap) << " at N = " << N;
    return true;
}

bool check_hk_growth(Ctx& c, std::ostringstream& out) {
    const int64_t N = c.full() ? 20'000 : 2000;
    const std::vector<HkGrowthEntry> g = hk_growth_probe(8, N);
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i].value <= 0) {
            out << "even moment not positive at k=" << g[i].k;
            return false;
        }
        // bounded factorial-normalized roots <=> positive radius
        if (g[i].root_abs_factorial < 0.1 || g[i].root_abs_factorial > 0.5) {
            out << "factorial-normalized root " << fmt(g[i].root_abs_factorial)
                << " at k=" << g[i].k;
            return false;
        }
        if (i > 0 && g[i].root_abs <= g[i - 1].root_abs) {
            out << "raw roots not climbing at k=" << g[i].k;
            return false;
        }
        if (i > 0 && g[i].root_abs_factorial > g[i - 1].root_abs_factorial * 1.15) {
            out << "normalized roots drifting at k=" << g[i].k;
            return false;
        }
    }
    out << "k <= 8, r(2) " << fmt(g[0].root_abs_factorial) << " .. r(8) "
        << fmt(g.back().root_abs_factorial);
    return true;
}

bool check_moment_anchor(Ctx&, std::ostringstream& out) {
    // q = 5: c0(1/5)^2 + c0(2/5)^2 = 4/5 exactly, so the mean is 2/5
    const MomentReport r = empirical_moment(5, 2);
    if (std::fabs(r.empirical - 0.4) > 1e-12 || r.phi_q != 4) {
        out << "mean " << fmt(r.empirical) << ", phi " << r.phi_q;
        return false;
    }
    const MomentReport odd = empirical_moment(101, 3);
    if (odd.empirical != 0.0) {
        out << "odd moment not exactly zero: " << fmt(odd.empirical);
        return false;
    }
    out << "q=5 exact mean, q=101 odd zero";
    return true;
}

bool check_moment_threads(Ctx&, std::ostringstream& out) {
    const MomentReport a = empirical_moment(1009, 2, MomentEvaluator::direct, 1);
    const MomentReport b = empirical_moment(1009, 2, MomentEvaluator::direct, 3);
    if (a.empirical != b.empirical) {
        out << "thread count changed the sum";
        return false;
    }
    if (a.phi_q != totient(1009) || totient(12) != 4 || totient(1) != 1) {
        out << "totient mismatch";
        return false;
    }
    out << "1 vs 3 threads bit-identical";
    return true;
}

bool check_moment_evaluators(Ctx& c, std::ostringstream& out) {
    const int64_t q = c.full() ? 1009 : 101;
    const MomentReport a = empirical_moment(q, 2, MomentEvaluator::direct);
    const MomentReport b = empirical_moment(q, 2, MomentEvaluator::cf_telescoped);
    const double rel = std::fabs(a.empirical - b.empirical) / std::fabs(a.empirical);
    if (rel > 1e-6) {
        out << "evaluators differ by rel " << fmt(rel);
        return false;
    }
    out << "q = " << q << ", rel " << fmt(rel);
    return true;
}

bool check_moment_trend(Ctx& c, std::ostringstream& out) {
    const MomentReport r1 = empirical_moment(101, 2);
    const MomentReport r2 = empirical_moment(1009, 2);
    if (r2.rel_dev > 3 * r1.rel_dev || r2.rel_dev > 0.12) {
        out << "rel_dev " << fmt(r1.rel_dev) << " -> " << fmt(r2.rel_dev);
        return false;
    }
    std::ostringstream trend;
    trend << fmt(r1.rel_dev) << " -> " << fmt(r2.rel_dev);
    if (c.full()) {
        const MomentReport r3 = empirical_moment(10007, 2);
        trend << " -> " << fmt(r3.rel_dev);
        if (r3.rel_dev > 3 * r2.rel_dev || r3.rel_dev > 0.05) {
            out << "rel_dev at 10007: " << fmt(r3.rel_dev);
            return false;
        }
    }
    out << "rel_dev " << trend.str();
    return true;
}

// ---- distribution ------------------------------------------------------------

bool check_distribution(Ctx& c, std::ostringstream& out) {
    const int64_t n = c.full() ? 10'000 : 2000;
    const int64_t X = c.full() ? 100'000 : 20'000;
    const DivisorTable table(X);
    const EmpiricalDistribution d = sample_distribution(n, X, c.rng.seed, table, 1);
    const EmpiricalDistribution d3 = sample_distribution(n, X, c.rng.seed, table, 3);
    if (d.samples != d3.samples) {
        out << "thread count changed the sample";
        return false;
    }
    if (!std::is_sorted(d.samples.begin(), d.samples.end())) {
        out << "samples not sorted";
        return false;
    }
    if (cdf_query(d, -100) != 0.0 || cdf_query(d, 100) != 1.0) {
        out << "sample escapes every plausible range";
        return false;
    }
    const double f0 = cdf_query(d, 0.0);
    const double band = 4.5 / std::sqrt(static_cast<double>(n));
    if (std::fabs(f0 - 0.5) > band) {
        out << "F(0) = " << fmt(f0) << " outside 0.5 +- " << fmt(band);
        return false;
    }
    double prev = -1;
    for (double t = -2; t <= 2.0001; t += 0.125) {
        const double f = cdf_query(d, t);
        if (f < prev || f < 0 || f > 1) {
            out << "cdf not monotone at t = " << fmt(t);
            return false;
        }
        prev = f;
    }
    const double sym_tol = c.full() ? 0.035 : 0.1;
    for (double t : {0.3, 1.0}) {
        const double lhs = cdf_query(d, -t);
        const double rhs = 1.0 - cdf_query_strict(d, t);
        if (std::fabs(lhs - rhs) > sym_tol) {
            out << "symmetry off at t = " << fmt(t) << ": " << fmt(lhs - rhs);
            return false;
        }
    }
    const Histogram h = histogram(d, 100, -2, 2);
    int64_t mass = h.underflow + h.overflow;
    int64_t mode = 0;
    for (size_t b = 0; b < h.counts.size(); ++b) {
        mass += h.counts[b];
        if (h.counts[b] > h.counts[static_cast<size_t>(mode)])
            mode = static_cast<int64_t>(b);
    }
    if (mass != n) {
        out << "histogram loses mass";
        return false;
    }
    if (c.full() && std::fabs(h.centers[static_cast<size_t>(mode)]) > 0.3) {
        out << "mode center at " << fmt(h.centers[static_cast<size_t>(mode)]);
        return false;
    }
    out << "n = " << n << ", F(0) = " << fmt(f0);
    return true;
}

bool check_s_tail(Ctx& c, std::ostringstream& out) {
    const int64_t n = c.full() ? 10'000 : 1000;
    const auto tails = s_tail_probe(n, {2, 4, 6, 8}, 30, c.rng.seed);
    for (size_t i = 1; i < tails.size(); ++i) {
        if (tails[i].second > tails[i - 1].second) {
            out << "tail fractions increase at K = " << tails[i].first;
            return false;
        }
    }
    // The majorant never drops below ~3.28 (the all-ones expansion), so every
    // sample clears K = 2 while K = 4 already cuts deep into the tail.
    if (tails[0].second < 0.99) {
        out << "P[S>2] = " << fmt(tails[0].second) << " implausible";
        return false;
    }
    if (tails[1].second >= 0.2 || tails[1].second <= 0.01) {
        out << "P[S>4] = " << fmt(tails[1].second) << " implausible";
        return false;
    }
    if (c.full()) {
        const double f4 = tails[1].second, f8 = tails[3].second;
        if (!(f8 < tails[2].second && tails[2].second < f4) || f8 > 10 * f4 * f4) {
            out << "tail not square-summable-fast: f4 " << fmt(f4) << ", f8 " << fmt(f8);
            return false;
        }
    }
    out << "P[S>K] = ";
    for (auto& [K, f] : tails)
        out << fmt(f) << " ";
    return true;
}

bool check_witness(Ctx& c, std::ostringstream& out) {
    const DivisorTable table(c.full() ? 10'000'000 : 1'000'000);
    const DensityWitness triv = find_density_witness(-0.01, 0.05, 1000, &table);
    if (!triv.success || triv.value != 0.0 || triv.x.den() != 2) {
        out << "straddling window did not yield 1/2";
        return false;
    }
    const DensityWitness w = find_density_witness(0.3, 0.05, kDefaultWitnessBudget, &table);
    if (!w.success) {
        out << "no witness found: " << w.note;
        return false;
    }
    if (!(0.3 < w.value && w.value <= 0.35)) {
        out << "witness value " << fmt(w.value) << " outside its window";
        return false;
    }
    if (std::fabs(w.reverified - w.value) > w.combined_err) {
        out << "independent evaluation drifted: " << fmt(w.reverified - w.value);
        return false;
    }
    if (c.full()) {
        const DensityWitness deep = find_density_witness(-1.0, 0.05, kDefaultWitnessBudget, &table);
        if (!deep.success || !(-1.0 < deep.value && deep.value <= -0.95)) {
            out << "far-window witness failed: " << deep.note;
            return false;
        }
    }
    out << "x = " << w.x.num() << "/" << w.x.den() << ", value " << fmt(w.value)
        << " (" << w.evaluations << " evals)";
    return true;
}

} // namespace

std::vector<VerifyResult> run_verify(VerifyLevel level, uint64_t seed) {
    const Check checks[] = {
        {"cf-rational-roundtrip", check_cf_rational},
        {"cf-real-denominator-growth", check_cf_real},
        {"mod-inverse", check_mod_inverse},
        {"c0-anchors", check_c0_anchors},
        {"c0-oddness-bit-exact", check_c0_oddness},
        {"c0-dual-evaluator", check_c0_dual},
        {"c0-extended-precision", check_c0_extended},
        {"psi-anchors-and-shift", check_psi},
        {"psi-asymptotic-remainder", check_psi_asymptotic},
        {"reciprocity-residual", check_reciprocity_residual},
        {"divisor-sieve", check_sieve},
        {"estermann-antisymmetry", check_estermann_antisym},
        {"estermann-bridge-vs-ladder", check_estermann_bridge_vs_cf},
        {"estermann-truncated-vs-exact", check_estermann_truncated},
        {"estermann-real-evaluators", check_estermann_real},
        {"estermann-majorant", check_majorant},
        {"hk-brute-anchors", check_hk_brute},
        {"hk-dft-vs-brute", check_hk_dft_vs_brute},
        {"hk-h2-zeta", check_hk_h2},
        {"hk-growth-probe", check_hk_growth},
        {"moment-anchors", check_moment_anchor},
        {"moment-thread-invariance", check_moment_threads},
        {"moment-dual-evaluator", check_moment_evaluators},
        {"moment-rel-dev-trend", check_moment_trend},
        {"distribution-sample", check_distribution},
        {"s-tail-probe", check_s_tail},
        {"density-witness", check_witness},
    };

    std::vector<VerifyResult> results;
    for (const Check& ch : checks) {
        Ctx ctx{level, CounterRng(seed), 0};
        VerifyResult r;
        r.name = ch.name;
        std::ostringstream detail;
        try {
            r.passed = ch.fn(ctx, detail);
        } catch (const std::exception& e) {
            r.passed = false;
            detail << "exception: " << e.what();
        }
        r.detail = detail.str();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace cotsum
