#include "cotsum/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "cotsum/errors.hpp"
#include "cotsum/rng.hpp"

namespace cotsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kD1ToValue = 2.0 / (kPi * kPi);

} // namespace

EmpiricalDistribution sample_distribution(int64_t count, int64_t X, uint64_t seed,
                                          const DivisorTable& table, int threads) {
    if (count < 1)
        throw domain_error("sample count must be >= 1");
    if (threads < 1)
        threads = 1;
    const std::vector<double> weights = divisor_weights(table, X);

    EmpiricalDistribution dist;
    dist.truncation = X;
    dist.seed = seed;
    dist.samples.assign(static_cast<size_t>(count), 0.0);

    const CounterRng rng(seed);
    auto fill = [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            // u_i = rng.uniform_ld(i) exactly: the low bit is forced so u > 0.
            const uint64_t m = rng.bits(static_cast<uint64_t>(i)) | 1;
            dist.samples[static_cast<size_t>(i)] = kD1ToValue * d1_truncated_dyadic(m, weights);
        }
    };

    const int nworkers = static_cast<int>(std::min<int64_t>(threads, count));
    if (nworkers <= 1) {
        fill(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nworkers));
        for (int w = 0; w < nworkers; ++w) {
            const int64_t lo = count * w / nworkers;
            const int64_t hi = count * (w + 1) / nworkers;
            pool.emplace_back(fill, lo, hi);
        }
        for (std::thread& t : pool)
            t.join();
    }

    std::sort(dist.samples.begin(), dist.samples.end());
    return dist;
}

double cdf_query(const EmpiricalDistribution& dist, double t) {
    if (dist.samples.empty())
        throw domain_error("empty sample");
    const auto it = std::upper_bound(dist.samples.begin(), dist.samples.end(), t);
    return static_cast<double>(it - dist.samples.begin()) /
           static_cast<double>(dist.samples.size());
}

double cdf_query_strict(const EmpiricalDistribution& dist, double t) {
    if (dist.samples.empty())
        throw domain_error("empty sample");
    const auto it = std::lower_bound(dist.samples.begin(), dist.samples.end(), t);
    return static_cast<double>(it - dist.samples.begin()) /
           static_cast<double>(dist.samples.size());
}

Histogram histogram(const EmpiricalDistribution& dist, int bins, double lo, double hi) {
    if (bins < 1)
        throw domain_error("bin count must be >= 1");
    if (!(lo < hi))
        throw domain_error("histogram range must be nonempty");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<size_t>(bins), 0);
    h.centers.resize(static_cast<size_t>(bins));
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b)
        h.centers[static_cast<size_t>(b)] = lo + (b + 0.5) * width;
    for (double s : dist.samples) {
        if (s < lo) {
            ++h.underflow;
            continue;
        }
        const auto idx = static_cast<int64_t>((s - lo) / width);
        if (idx >= bins)
            ++h.overflow;
        else
            ++h.counts[static_cast<size_t>(idx)];
    }
    return h;
}

std::vector<std::pair<double, double>> s_tail_probe(int64_t count, const std::vector<double>& Ks,
                                                    int depth, uint64_t seed) {
    if (count < 1)
        throw domain_error("sample count must be >= 1");
    if (depth < 1)
        throw domain_error("depth must be >= 1");
    if (Ks.empty())
        throw domain_error("no thresholds given");

    std::vector<int64_t> hits(Ks.size(), 0);
    const CounterRng rng(seed);
    for (int64_t i = 0; i < count; ++i) {
        const long double u = rng.uniform_ld(static_cast<uint64_t>(i));
        const double S = s_majorant(cf_of_real(u, depth));
        for (size_t t = 0; t < Ks.size(); ++t)
            if (S > Ks[t])
                ++hits[t];
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(Ks.size());
    for (size_t t = 0; t < Ks.size(); ++t)
        out.emplace_back(Ks[t], static_cast<double>(hits[t]) / static_cast<double>(count));
    return out;
}

namespace {

struct LadderPoint {
    double value = 0; // normalized: 2 pi^-2 D
    double err = 0;
    ReducedFraction x;
    std::vector<int64_t> quotients;
};

LadderPoint eval_family(int kappa, int64_t x1, int64_t x2) {
    LadderPoint p;
    p.quotients.reserve(static_cast<size_t>(kappa) + 5);
    p.quotients.push_back(0);
    for (int i = 0; i < kappa; ++i)
        p.quotients.push_back(1);
    p.quotients.push_back(x1);
    p.quotients.push_back(x2);
    p.quotients.push_back(1);
    p.quotients.push_back(1);

    ContinuedFraction cf;
    cf.a.reserve(p.quotients.size());
    for (int64_t d : p.quotients)
        cf.a.emplace_back(d);
    cf.exact = true;
    cf.rebuild_convergents();

    const EstermannValue e = d1_cf(cf);
    p.value = kD1ToValue * e.value;
    p.err = kD1ToValue * e.err_estimate;
    p.x = cf.value();
    return p;
}

// Head denominator of [0; 1 x kappa]: Fibonacci.
int64_t head_denominator(int kappa) {
    int64_t a = 1, b = 1;
    for (int i = 0; i < kappa; ++i) {
        const int64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

} // namespace

DensityWitness find_density_witness(double z, double eps, int64_t budget,
                                    const DivisorTable* reverify_table) {
    if (!(eps > 0))
        throw domain_error("window width must be positive");
    if (budget < 16)
        throw domain_error("budget too small to search");

    DensityWitness w;
    w.target_z = z;
    w.epsilon = eps;

    std::optional<DivisorTable> own_table;
    const DivisorTable* tab = reverify_table;
    const auto reverify = [&](const LadderPoint& p) -> bool {
        if (tab == nullptr) {
            own_table.emplace(10'000'000);
            tab = &*own_table;
        }
        const int64_t X = std::min<int64_t>(tab->limit(), 10'000'000);
        const EstermannValue tv = d1_truncated(p.x, X, *tab);
        const double rv = kD1ToValue * tv.value;
        const double combined = p.err + kD1ToValue * tv.err_estimate + 1e-9;
        if (std::fabs(rv - p.value) > combined)
            return false;
        w.success = true;
        w.x = p.x;
        w.quotients = p.quotients;
        w.value = p.value;
        w.reverified = rv;
        w.combined_err = combined;
        w.note = "ok";
        return true;
    };

    // 0 sits in every window that straddles it: x = 1/2 gives exactly 0.
    if (z < 0.0 && 0.0 <= z + eps) {
        LadderPoint p;
        p.quotients = {0, 2};
        p.x = ReducedFraction(1, 2);
        p.value = 0.0;
        p.err = 0.0;
        w.evaluations = 0;
        if (reverify(p))
            return w;
    }

    const double t = z + 0.5 * eps;
    const double lo_gate = z + 0.02 * eps;
    const double hi_gate = z + 0.98 * eps;
    constexpr int64_t kDenCap = 30'000;
    constexpr int64_t kX2Cap = 300'000;

    double best_gap = std::numeric_limits<double>::infinity();
    LadderPoint best;

    const auto probe = [&](int kappa, int64_t x1, int64_t x2) {
        ++w.evaluations;
        LadderPoint p = eval_family(kappa, x1, x2);
        const double gap = std::fabs(p.value - t);
        if (gap < best_gap) {
            best_gap = gap;
            best = p;
        }
        return p;
    };

    // Small head counts last: their coarse x1 granularity only matters once the
    // gentler families have run out of reach.
    for (int kappa : {4, 5, 3, 6, 2, 7, 1, 0}) {
        if (w.evaluations + 8 > budget)
            break;
        // Fit value ~ A + alpha log x1 + beta log(x2)/x1 from three probes.
        const double d11 = probe(kappa, 12, 16).value;
        const double d12 = probe(kappa, 12, 64).value;
        const double d21 = probe(kappa, 20, 16).value;
        const double beta = (d12 - d11) * 12.0 / (std::log(64.0) - std::log(16.0));
        if (!std::isfinite(beta) || std::fabs(beta) < 1e-6)
            continue;
        const double alpha = (d21 - d11 - beta * std::log(16.0) * (1.0 / 20 - 1.0 / 12)) /
                             (std::log(20.0) - std::log(12.0));
        const double A = d11 - alpha * std::log(12.0) - beta * std::log(16.0) / 12.0;
        if (!std::isfinite(alpha) || !std::isfinite(A))
            continue;

        const int64_t vhead = head_denominator(kappa);
        // Trailing v growth: x2 level then two 1-quotients roughly triple it.
        const int64_t x1_max = std::min<int64_t>(3000, kDenCap / (3 * vhead * 2));

        for (int64_t x1 = 2; x1 <= x1_max && w.evaluations < budget; ++x1) {
            const double lx2_target = (t - A - alpha * std::log(static_cast<double>(x1))) *
                                      static_cast<double>(x1) / beta;
            const int64_t x2_cap =
                std::min(kX2Cap, kDenCap / std::max<int64_t>(3 * vhead * x1, 1));
            if (x2_cap < 2)
                break;
            if (!std::isfinite(lx2_target))
                continue;
            double lx2 = lx2_target;
            const double lx2_lo = std::log(2.0);
            const double lx2_hi = std::log(static_cast<double>(x2_cap));
            if (lx2 < lx2_lo || lx2 > lx2_hi) {
                // x2 headroom can pin at a cap while the clamped value still
                // lands near the window; the x1 sweep is fine enough then.
                lx2 = std::clamp(lx2, lx2_lo, lx2_hi);
                const double mv = A + alpha * std::log(static_cast<double>(x1)) +
                                  beta * lx2 / static_cast<double>(x1);
                const double slack = 0.5 * (hi_gate - lo_gate);
                if (!(mv > lo_gate - slack && mv < hi_gate + slack))
                    continue;
            }

            int64_t x2 = std::llround(std::exp(lx2));
            x2 = std::clamp<int64_t>(x2, 2, x2_cap);
            int64_t prev = -1;
            for (int step = 0; step < 16 && w.evaluations < budget; ++step) {
                const LadderPoint p = probe(kappa, x1, x2);
                if (lo_gate < p.value && p.value <= hi_gate) {
                    if (reverify(p))
                        return w;
                    break; // candidate failed independent check; move on
                }
                double dl = (t - p.value) * static_cast<double>(x1) / beta;
                dl = std::clamp(dl, -1.0, 1.0);
                int64_t nx2 = std::llround(static_cast<double>(x2) * std::exp(dl));
                if (nx2 == x2)
                    nx2 += dl > 0 ? 1 : -1;
                nx2 = std::clamp<int64_t>(nx2, 2, x2_cap);
                if (nx2 == x2 || nx2 == prev)
                    break; // pinned at a cap or cycling: this x1 cannot land
                prev = x2;
                x2 = nx2;
            }
        }
    }

    w.success = false;
    w.x = best.x;
    w.quotients = best.quotients;
    w.value = best.value;
    w.combined_err = best.err;
    w.note = (w.evaluations >= budget ? "budget exhausted" : "search space exhausted");
    w.note += "; closest value " + std::to_string(best.value) +
              " misses the window center by " + std::to_string(best_gap);
    return w;
}

} // namespace cotsum
