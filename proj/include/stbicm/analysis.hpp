#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "stbicm/codec.hpp"
#include "stbicm/common.hpp"
#include "stbicm/precode.hpp"
#include "stbicm/rng.hpp"

namespace stbicm {

// Achievable post-decoding diversity of a rate-r_c coded scheme with
// spreading factor s over n_c blocks of an n_t x n_r fading channel:
// min(Singleton bound, channel diversity, distance-limited term). Pass
// d_hmin <= 0 to leave the code's minimum distance unconstrained. s must
// divide n_t * n_c.
int singleton_diversity(double r_c, int n_t, int n_c, int n_r, int s, int d_hmin = 0);

// Smallest divisor s of n_t * n_c with s >= r_c * n_t * n_c (1 when
// r_c <= 1/(n_t*n_c)): the cheapest spreading that makes the Singleton bound
// reach full diversity.
int optimal_spreading(double r_c, int n_t, int n_c);

// Eigenvalues of the per-time-slot Hermitian forms of one fading block:
// for each slot t, the n_t x n_t matrix sum_l gamma2[l] * sum_i s_li^H s_li
// with s_li the 1 x n_t sub-row of precoder row l at channel use t*(s/n_s)+i.
// gamma2 has one entry per precoder row; returns all n_s * n_t eigenvalues
// (real, >= 0; total sum equals sum(gamma2) for unit-norm rows).
std::vector<double> eigen_spectrum(const Precoder& p, const std::vector<double>& gamma2);

// One fading eigenmode of a pairwise error event: squared distance delta2
// with multiplicity mult (including the n_r receive factor).
struct PepMode {
    double delta2 = 0.0;
    int mult = 0;
};

// Partial-fraction expansion of the decision-variable characteristic
// function phi(z) = prod_v (1 - delta2_v/(2 n0) * z * (1+z))^(-mult_v):
// phi(z) = sum over poles p of sum_i coef[i-1] / (z - p)^i.
struct PepExpansion {
    struct Pole {
        double root = 0.0;
        int mult = 0;
        std::vector<double> coef; // coef[i] multiplies (z - root)^-(i+1)
    };
    std::vector<Pole> poles;
    double prob = 0.0; // P(sum of per-mode LLRs < 0)
};

// Exact pairwise error probability over independent unit-variance Rayleigh
// eigenmodes in Gaussian noise of per-component variance n0, via residues of
// phi(z)/z at the negative poles. Near-equal delta2 (rel. 1e-9) are merged
// into one pole before expansion.
PepExpansion pep_expand(const std::vector<PepMode>& modes, double n0);
double pep_exact(const std::vector<PepMode>& modes, double n0);

// Same entry point from an eigenvalue spectrum (one value per eigenmode,
// zeros skipped); multiplicities all n_r.
double pep_exact_from_spectrum(const std::vector<double>& delta2, int n_r, double n0);

// High-SNR behaviour pep ~ binom(2L-1, L) * (2 n0 / gain)^L with L the
// diversity order and gain the geometric mean of the active squared
// distances.
struct PepAsymptote {
    int order = 0;
    double gain = 0.0;
};
PepAsymptote pep_asymptotic(const std::vector<PepMode>& modes);

// Coding-gain figures (geometric means of squared distances) for the
// operating regimes of a weight-w error event:
//  - ergodic: every bit on its own fading state, gain over the w distances;
//  - block: per-(antenna, block) summed squared distances gamma2 (length
//    n_t*n_c, zeros drop out and cost diversity), gain normalized to the
//    full n_t*n_c exponent;
//  - precoded: distinct eigenvalues with multiplicities;
//  - ideal: all-state spreading, single value sum(d2)/(n_t*n_c).
double gain_ergodic(const std::vector<double>& d2);
double gain_block(const std::vector<double>& gamma2, int n_t, int n_c);
double gain_precoded(const std::vector<PepMode>& modes);
double gain_ideal(const std::vector<double>& d2, int n_t, int n_c);

// Unequal-norm correction for the 2x2 Golden-code-style precoder with row
// energy split alpha1/alpha2 (defaults 0.277/0.723): geometric mean of the
// two mixed eigenvalue sums of the per-block gamma2 (length 4).
double gain_golden(const std::array<double, 4>& gamma2, double alpha1 = 0.277,
                   double alpha2 = 0.723);

// Best precoding gain (dB) for a weight-w event over n_t antennas with
// equal per-bit distances: 10*log10((w/n_t) / geomean of the most even
// partition of w into n_t parts). Requires w >= n_t.
double spreading_gain_db(int n_t, int w);

// Exact diversity-L Rayleigh error probability with effective squared
// distance sum_d2 / (n_t * n_c) per state (classic closed form).
double ideal_pep(double sum_d2, int diversity_order, double n0, int n_t, int n_c);

// Truncated union bound: sum_w A_w * pep_of_w(w).
double union_bound_fer(const WeightSpectrum& spectrum,
                       const std::function<double(int)>& pep_of_w);

// Monte Carlo expectation of the ergodic-regime exact PEP for a weight-w
// event whose per-bit squared distances are drawn uniformly from d2_set.
double expected_pep_ergodic(int w, const std::vector<double>& d2_set, int n_r,
                            double n0, int n_samples, Rng& rng);

} // namespace stbicm
