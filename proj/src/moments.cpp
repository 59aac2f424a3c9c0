#include "cotsum/moments.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <thread>

#include "cotsum/cotangent.hpp"
#include "cotsum/errors.hpp"
#include "cotsum/kahan.hpp"

namespace cotsum {

namespace {

constexpr double kPi = std::numbers::pi;

// (i)^(-k) as a unit complex number.
std::complex<double> i_pow_neg(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

std::complex<double> hk_scale(int k) {
    return i_pow_neg(k) * std::pow(kPi, -2.0 * k);
}

} // namespace

int64_t totient(int64_t q) {
    if (q < 1)
        throw domain_error("totient argument must be >= 1");
    int64_t result = q;
    int64_t m = q;
    for (int64_t p = 2; p * p <= m; ++p) {
        if (m % p != 0)
            continue;
        result -= result / p;
        while (m % p == 0)
            m /= p;
    }
    if (m > 1)
        result -= result / m;
    return result;
}

namespace {

// Plain constrained-sum enumeration: k-1 free indices, the last forced.
double brute_sum(int k, int64_t N) {
    std::vector<int> d(static_cast<size_t>(N) + 1, 0);
    for (int64_t i = 1; i <= N; ++i)
        for (int64_t j = i; j <= N; j += i)
            ++d[static_cast<size_t>(j)];

    Kahan<double> acc;
    std::vector<int64_t> n(static_cast<size_t>(k - 1), -N);
    while (true) {
        int64_t sum = 0;
        double prod = 1;
        for (int64_t ni : n) {
            sum += ni;
            prod *= static_cast<double>(d[static_cast<size_t>(std::llabs(ni))]) /
                    static_cast<double>(ni);
        }
        const int64_t last = -sum;
        if (last != 0 && std::llabs(last) <= N)
            acc.add(prod * static_cast<double>(d[static_cast<size_t>(std::llabs(last))]) /
                    static_cast<double>(last));
        // odometer step, skipping zero
        size_t pos = 0;
        for (; pos < n.size(); ++pos) {
            ++n[pos];
            if (n[pos] == 0)
                ++n[pos];
            if (n[pos] <= N)
                break;
            n[pos] = -N;
        }
        if (pos == n.size())
            break;
    }
    return acc.value();
}

} // namespace

HkEstimate hk_brute(int k, int64_t N) {
    if (k < 0)
        throw domain_error("moment order must be >= 0");
    if (N < 1)
        throw domain_error("truncation must be >= 1");
    HkEstimate out;
    out.k = k;
    out.truncation = N;
    out.method = HkMethod::brute_force;
    if (k == 0) {
        out.value = 1.0; // empty product
        return out;
    }
    if (k == 1)
        return out; // only n_1 = 0 would satisfy the constraint
    if (k > 4 || N > 60)
        throw resource_error("brute-force enumeration budget exceeded");

    const std::complex<double> h = hk_scale(k) * brute_sum(k, N);
    out.value = h.real();
    out.im_residue = std::fabs(h.imag());
    if (N >= 2) {
        const std::complex<double> half = hk_scale(k) * brute_sum(k, N / 2);
        out.tail_estimate = std::fabs(out.value - half.real());
    }
    return out;
}

HkEstimate h2_zeta_closed_form() {
    HkEstimate out;
    out.k = 2;
    out.method = HkMethod::zeta_closed_form;
    const double z2 = kPi * kPi / 6.0;
    const double z4 = std::pow(kPi, 4) / 90.0;
    // sum d(n)^2 / n^2 = zeta(2)^4 / zeta(4); H_2 = 2 pi^-4 times that sum.
    out.value = 2.0 * std::pow(kPi, -4) * (std::pow(z2, 4) / z4);
    return out;
}

namespace {

struct MeanPower {
    double re = 0;
    double im = 0;
};

// Mean over j of f(j/M)^k for the requested even/odd k list, one FFT.
// transform size M >= max(k,2) N + 1 keeps slots disjoint and the constant
// term exact.
std::vector<MeanPower> dft_means(const std::vector<int>& ks, int64_t N,
                                 const DivisorTable& table) {
    int kmax = 2;
    for (int k : ks)
        kmax = std::max(kmax, k);
    int64_t M = 1;
    while (M < kmax * N + 1) {
        M <<= 1;
        if (M > (int64_t{1} << 26))
            throw resource_error("transform size exceeds the budget");
    }

    std::vector<std::complex<double>> buf(static_cast<size_t>(M), {0.0, 0.0});
    for (int64_t n = 1; n <= N; ++n) {
        const double w = static_cast<double>(table.d(n)) / static_cast<double>(n);
        buf[static_cast<size_t>(n)] += w;
        buf[static_cast<size_t>(M - n)] -= w;
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(M),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<Kahan<double>> re(ks.size()), im(ks.size());
    for (const std::complex<double>& f : buf) {
        for (size_t t = 0; t < ks.size(); ++t) {
            std::complex<double> p = {1.0, 0.0};
            for (int e = 0; e < ks[t]; ++e)
                p *= f;
            re[t].add(p.real());
            im[t].add(p.imag());
        }
    }
    std::vector<MeanPower> out(ks.size());
    for (size_t t = 0; t < ks.size(); ++t) {
        out[t].re = re[t].value() / static_cast<double>(M);
        out[t].im = im[t].value() / static_cast<double>(M);
    }
    return out;
}

std::complex<double> hk_dft_value(int k, int64_t N, const DivisorTable& table) {
    const MeanPower m = dft_means({k}, N, table)[0];
    return hk_scale(k) * std::complex<double>(m.re, m.im);
}

} // namespace

HkEstimate hk_dft(int k, int64_t N, const DivisorTable& table) {
    if (k < 0)
        throw domain_error("moment order must be >= 0");
    if (N < 1 || N > table.limit())
        throw domain_error("truncation outside the sieved range");
    HkEstimate out;
    out.k = k;
    out.truncation = N;
    out.method = HkMethod::dft_constant_term;
    if (k == 0) {
        out.value = 1.0;
        return out;
    }

    const std::complex<double> h = hk_dft_value(k, N, table);
    out.value = h.real();
    out.im_residue = std::fabs(h.imag());
    if (k == 2) {
        out.tail_estimate = std::fabs(h2_zeta_closed_form().value - out.value);
    } else if (N >= 2) {
        out.tail_estimate = std::fabs(out.value - hk_dft_value(k, N / 2, table).real());
    }
    return out;
}

HkEstimate hk_dft(int k, int64_t N) {
    return hk_dft(k, N, DivisorTable(N));
}

std::vector<HkGrowthEntry> hk_growth_probe(int k_max, int64_t N, const DivisorTable& table) {
    if (k_max < 2 || k_max > 12)
        throw domain_error("growth probe supports 2 <= k_max <= 12");
    if (N < 1 || N > table.limit())
        throw domain_error("truncation outside the sieved range");
    std::vector<int> ks;
    for (int k = 2; k <= k_max; k += 2)
        ks.push_back(k);
    const std::vector<MeanPower> means = dft_means(ks, N, table);

    std::vector<HkGrowthEntry> out;
    for (size_t t = 0; t < ks.size(); ++t) {
        const int k = ks[t];
        const std::complex<double> h =
            hk_scale(k) * std::complex<double>(means[t].re, means[t].im);
        HkGrowthEntry e;
        e.k = k;
        e.value = h.real();
        const double mag = std::fabs(h.real());
        e.root_abs = mag > 0 ? std::exp(std::log(mag) / k) : 0.0;
        e.root_abs_factorial =
            mag > 0 ? std::exp((std::log(mag) - std::lgamma(k + 1.0)) / k) : 0.0;
        out.push_back(e);
    }
    return out;
}

std::vector<HkGrowthEntry> hk_growth_probe(int k_max, int64_t N) {
    return hk_growth_probe(k_max, N, DivisorTable(N));
}

namespace {

double ipow(double x, int k) {
    double p = 1;
    for (int e = 0; e < k; ++e)
        p *= x;
    return p;
}

} // namespace

MomentReport empirical_moment(int64_t q, int k, MomentEvaluator evaluator, int threads,
                              const DivisorTable* hk_table) {
    if (q < 2)
        throw domain_error("moment modulus must be >= 2");
    if (k < 1)
        throw domain_error("moment order must be >= 1");
    if (threads < 1)
        threads = 1;

    MomentReport rep;
    rep.q = q;
    rep.k = k;

    std::optional<CotTable> table;
    if (evaluator == MomentEvaluator::direct)
        table.emplace(q);

    // a <-> q-a contribute c^k + (-c)^k; the direct evaluator satisfies the
    // sign flip bit-exactly, so the pair reduces to 2 c^k or exactly zero.
    const int64_t half = (q - 1) / 2;
    constexpr int64_t kChunk = 4096;
    const int64_t nchunks = (half + kChunk - 1) / kChunk;

    std::vector<double> partial(static_cast<size_t>(nchunks), 0.0);
    std::vector<int64_t> counts(static_cast<size_t>(nchunks), 0);

    auto run_chunk = [&](int64_t c) {
        const int64_t lo = 1 + c * kChunk;
        const int64_t hi = std::min(half, lo + kChunk - 1);
        Kahan<double> acc;
        int64_t cnt = 0;
        for (int64_t a = lo; a <= hi; ++a) {
            if (std::gcd(a, q) != 1)
                continue;
            ++cnt;
            if (k % 2 != 0)
                continue; // pair cancels exactly
            const ReducedFraction x(a, q);
            const double c0 = evaluator == MomentEvaluator::direct
                                  ? c0_direct(x, *table).value
                                  : c0_cf_telescoped(x).value;
            acc.add(2.0 * ipow(c0, k));
        }
        partial[static_cast<size_t>(c)] = acc.value();
        counts[static_cast<size_t>(c)] = cnt;
    };

    const int nworkers = static_cast<int>(std::min<int64_t>(threads, std::max<int64_t>(nchunks, 1)));
    if (nworkers <= 1) {
        for (int64_t c = 0; c < nchunks; ++c)
            run_chunk(c);
    } else {
        std::atomic<int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (int64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (std::thread& t : pool)
            t.join();
    }

    Kahan<double> total;
    int64_t coprime_half = 0;
    for (int64_t c = 0; c < nchunks; ++c) {
        total.add(partial[static_cast<size_t>(c)]);
        coprime_half += counts[static_cast<size_t>(c)];
    }
    // q = 2 is the one modulus whose single residue is self-paired; c0(1/2) = 0.
    rep.phi_q = q == 2 ? 1 : 2 * coprime_half;
    rep.empirical = total.value() / static_cast<double>(rep.phi_q);

    if (k % 2 != 0) {
        rep.predicted = 0.0;
    } else {
        double hk;
        if (k == 2) {
            hk = h2_zeta_closed_form().value;
        } else {
            const int64_t N_pred = 20'000;
            if (hk_table != nullptr && hk_table->limit() >= N_pred)
                hk = hk_dft(k, N_pred, *hk_table).value;
            else
                hk = hk_dft(k, N_pred).value;
        }
        rep.predicted = hk * std::pow(static_cast<double>(q), k);
    }

    if (rep.predicted != 0.0)
        rep.rel_dev = std::fabs(rep.empirical - rep.predicted) / std::fabs(rep.predicted);
    else
        rep.rel_dev = std::fabs(rep.empirical) / std::pow(static_cast<double>(q), k);
    return rep;
}

} // namespace cotsum
