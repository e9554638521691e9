#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stbicm/common.hpp"
#include "stbicm/rng.hpp"

namespace stbicm {

// Rate-1/N_C binary convolutional code, non-recursive (NRNSC) or recursive
// systematic (RSC). Generators are octal, MSB aligned with the current input;
// for an RSC, generators[0] is the feedback polynomial and the first output
// is the systematic bit.
struct ConvCode {
    std::vector<unsigned> gens; // binary tap masks
    int memory = 0;
    int n_out = 0;              // N_C
    bool recursive = false;     // also implies systematic first output
    int n_states = 1;

    // trellis tables, indexed [state][input]
    std::vector<std::array<int, 2>> next_state;
    std::vector<std::array<unsigned, 2>> out_bits; // bit o of value = output o
    std::vector<int> term_input;                   // input driving register toward zero

    static ConvCode nrnsc(const std::string& octal_csv);
    static ConvCode rsc(const std::string& octal_csv);
};

// Terminated encoding. info holds the free information bits; `memory` tail
// branches are appended internally so the trellis ends in the zero state.
// Output length: n_out * (info.size() + memory), branch-multiplexed.
BitVec conv_encode(const ConvCode& code, const BitVec& info);

// Number of trellis branches (L_C) for a coded frame of n bits.
inline int conv_branches(const ConvCode& code, size_t coded_bits) {
    if (coded_bits % code.n_out != 0)
        throw config_error("coded length not a multiple of N_C");
    return static_cast<int>(coded_bits) / code.n_out;
}

struct BcjrResult {
    std::vector<double> coded_app; // APP LLR per coded bit
    std::vector<double> coded_ext; // coded_app - channel llr
    std::vector<double> info_app;  // APP LLR per info bit (one per branch)
    std::vector<double> info_ext;  // info_app - prior
};

// Exact log-domain forward-backward over the (optionally) terminated trellis.
// coded_llr: one LLR per coded bit; info_prior: one LLR per branch (may be
// empty = all zero). LLR convention: log P(0)/P(1).
BcjrResult bcjr_decode(const ConvCode& code, std::span<const double> coded_llr,
                       std::span<const double> info_prior, bool terminated = true);

struct WeightSpectrum {
    std::map<int, uint64_t> entries; // w -> A_w, for 1 <= w <= w_max
    int w_max = 0;
    int d_hmin = 0;
};

// Exact codeword-weight multiplicities of the terminated code with
// frame_branches trellis branches (tail included), truncated at w_max.
WeightSpectrum weight_spectrum(const ConvCode& code, int w_max, int frame_branches);

// Parallel turbo code built from one RSC constituent, with the parity of the
// second encoder de-interleaved before multiplexing so that error events stay
// localized in codeword position. Multiplexed frame layout per branch j:
// systematic, parity1, parity2-deinterleaved; puncturing (odd/even parity
// alternation) brings the rate from 1/3 to 1/2.
struct TurboCode {
    ConvCode rsc;            // constituent (terminates encoder 1 only)
    std::vector<int> pi;     // turbo interleaver: sys2[u] = sys[pi[u]]
    std::vector<int> pi_inv;
    bool punctured = true;

    int branches() const { return static_cast<int>(pi.size()); }
    int coded_bits() const { return branches() * (punctured ? 2 : 3); }

    static TurboCode make(const ConvCode& rsc, int branches, uint64_t seed, bool punctured);
    static TurboCode make(const ConvCode& rsc, std::vector<int> pi, bool punctured);
};

// info holds branches() - memory free bits; encoder 1 tail fills the rest.
BitVec turbo_encode(const TurboCode& code, const BitVec& info);

struct TurboResult {
    std::vector<double> coded_ext; // extrinsic per transmitted coded bit
    std::vector<double> info_app;  // APP LLR per branch (incl. tail branches)
};

TurboResult turbo_decode(const TurboCode& code, std::span<const double> coded_llr,
                         std::span<const double> info_prior, int n_inner);

// max*(a,b) = log(e^a + e^b)
inline double max_star(double a, double b) {
    if (a < b) std::swap(a, b);
    const double d = a - b;
    if (d > 37.0) return a; // exp(-d) below double epsilon of the sum
    return a + std::log1p(std::exp(-d));
}

} // namespace stbicm
