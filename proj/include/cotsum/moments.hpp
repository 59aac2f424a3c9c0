#pragma once

#include <cstdint>
#include <vector>

#include "cotsum/estermann.hpp"

namespace cotsum {

int64_t totient(int64_t q); // q >= 1

enum class HkMethod { dft_constant_term, brute_force, zeta_closed_form };

struct HkEstimate {
    int k = 0;
    int64_t truncation = 0;
    double value = 0;
    HkMethod method = HkMethod::dft_constant_term;
    double tail_estimate = 0; // cutoff sensitivity, see each evaluator
    double im_residue = 0;    // |imag| discarded when taking the real part
};

// Normalized constrained sum over n_1 + ... + n_k = 0, 0 < |n_i| <= N,
// of prod d(|n_i|)/n_i, scaled by (i pi^2)^{-k}.

// Direct enumeration of the (2N+1)^(k-1) lattice; reference oracle only.
HkEstimate hk_brute(int k, int64_t N);

// Constant-term extraction: the same sum is the mean over M-th roots of
// unity of f(j/M)^k with f = sum d(n)/n (e(nx) - e(-nx)), exact once
// M >= kN+1. M is rounded up to a power of two and the mean is taken with
// one FFT.
HkEstimate hk_dft(int k, int64_t N, const DivisorTable& table);
HkEstimate hk_dft(int k, int64_t N);

// k = 2 in closed form: sum d(n)^2/n^2 = zeta(2)^4/zeta(4).
HkEstimate h2_zeta_closed_form();

struct HkGrowthEntry {
    int k = 0;
    double value = 0;             // H_k
    double root_abs = 0;          // |H_k|^(1/k)
    double root_abs_factorial = 0; // |H_k / k!|^(1/k)
};

// One FFT sweep reporting every even k <= k_max; the factorial-normalized
// roots should stay bounded if the moment generating function has positive
// radius.
std::vector<HkGrowthEntry> hk_growth_probe(int k_max, int64_t N, const DivisorTable& table);
std::vector<HkGrowthEntry> hk_growth_probe(int k_max, int64_t N);

enum class MomentEvaluator { direct, cf_telescoped };

struct MomentReport {
    int64_t q = 0;
    int k = 0;
    int64_t phi_q = 0;
    double empirical = 0; // (1/phi) sum over reduced a/q of c0(a/q)^k
    double predicted = 0; // H_k q^k
    double rel_dev = 0;
};

// Full sweep over the reduced residues a/q. Deterministic for any thread
// count: fixed 4096-wide chunks are each summed in index order and combined
// in chunk order.
MomentReport empirical_moment(int64_t q, int k,
                              MomentEvaluator evaluator = MomentEvaluator::direct,
                              int threads = 1, const DivisorTable* hk_table = nullptr);

} // namespace cotsum
