#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stbicm/common.hpp"
#include "stbicm/rng.hpp"

namespace stbicm {

// A permutation stored as out[i] = position of input element i in the output.
struct Interleaver {
    std::vector<int> perm;
    int size() const { return static_cast<int>(perm.size()); }

    // y[perm[i]] = x[i]
    template <class T>
    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[perm[i]] = x[i];
        return y;
    }
    template <class T>
    std::vector<T> invert(const std::vector<T>& y) const {
        std::vector<T> x(y.size());
        for (size_t i = 0; i < y.size(); ++i) x[i] = y[perm[i]];
        return x;
    }
};

// Three-stage structured interleaver of length S_I = N_I^2 * L over a frame
// viewed as L sub-frames of N_I columns of N_I bits:
//   1. diagonal de-multiplex of each sub-frame into N_I streams,
//   2. one shared spread-constrained permutation of the N_I^2 positions of a
//      sub-frame, applied to every stream: positions less than min_gap apart
//      must land in distinct column groups,
//   3. circulant column rotation recombining the streams.
// The composition guarantees that any (min_gap - 1) * N_I + 1 consecutive
// input bits occupy pairwise distinct columns of the output frame.
Interleaver build_basic_interleaver(int n_i, int length, int min_gap, uint64_t seed);

// Upper bound on the usable spread constraint for a frame of `length` bits:
// floor((length / N_I^2 + 1) / 2).
int max_min_gap(int n_i, int length);

// Channel interleaver for the full transmit frame: the codeword is first
// de-multiplexed round-robin into n_groups equal groups (one per independent
// fading group), then each group gets its own basic interleaver (seeds derived
// from `seed`). Output index layout inside a group: column-major over N_I-bit
// time columns, i.e. flat = group * group_len + column * N_I + offset.
Interleaver build_channel_interleaver(int n_i, int length, int n_groups,
                                      int min_gap, uint64_t seed);

// Pseudo-random permutation of the same length, for baseline comparisons.
Interleaver build_random_interleaver(int length, uint64_t seed);

// Largest number W such that every window of W consecutive input positions
// maps to pairwise distinct time columns (output runs of N_I bits within a
// group). Brute-force scan.
int min_conflict_window(const Interleaver& il, int n_i, int n_groups);

// Checks permutation validity and, for structured interleavers, that the
// guaranteed conflict-free window (min_gap - 1) * N_I + 1 holds.
bool verify_interleaver(const Interleaver& il, int n_i, int n_groups, int min_gap);

// One decimal index per line.
void save_interleaver(const Interleaver& il, const std::string& path);
Interleaver load_interleaver(const std::string& path);

} // namespace stbicm
