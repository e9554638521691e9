#pragma once

#include <complex>
#include <span>
#include <vector>

#include "stbicm/common.hpp"

namespace stbicm {

using cplx = std::complex<double>;

// Unit-energy square QAM (or BPSK) with binary-reflected Gray labeling per
// I/Q axis. Label bit k of a point is bit k of its index; the first m/2 bits
// select the I level, the last m/2 bits the Q level.
struct Constellation {
    int m = 1;             // bits per symbol
    int order = 2;         // M = 2^m
    std::vector<cplx> points; // indexed by label

    static Constellation make(int m_bits);

    cplx map_bits(std::span<const uint8_t> bits) const;
    int label_of(std::span<const uint8_t> bits) const;
};

// All Euclidean distances |z - z_bar| obtained by flipping exactly one
// labeling bit, grouped by bit position.
struct BskDistanceSet {
    std::vector<double> all;                  // multiset over (point, bit)
    std::vector<std::vector<double>> per_bit; // [bit position][point]
};

BskDistanceSet bsk_distances(const Constellation& c);

} // namespace stbicm
