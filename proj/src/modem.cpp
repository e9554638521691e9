#include "stbicm/modem.hpp"

#include <cmath>

namespace stbicm {

namespace {

// binary-reflected Gray decode: gray value -> integer rank
unsigned gray_decode(unsigned g) {
    unsigned b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

} // namespace

Constellation Constellation::make(int m_bits) {
    if (m_bits < 1) throw config_error("constellation: m must be >= 1");
    if (m_bits > 1 && m_bits % 2 != 0)
        throw config_error("constellation: only BPSK or square QAM (even m) supported");
    Constellation c;
    c.m = m_bits;
    c.order = 1 << m_bits;
    c.points.resize(c.order);
    if (m_bits == 1) {
        c.points[0] = cplx(1.0, 0.0);
        c.points[1] = cplx(-1.0, 0.0);
        return c;
    }
    const int ma = m_bits / 2;       // bits per axis
    const int levels = 1 << ma;      // levels per axis
    // mean symbol energy 1: E = 2 A^2 (L^2-1)/3
    const double amp = std::sqrt(3.0 / (2.0 * (c.order - 1)));
    for (int label = 0; label < c.order; ++label) {
        unsigned gi = 0, gq = 0;
        for (int k = 0; k < ma; ++k) {
            gi |= ((label >> k) & 1u) << (ma - 1 - k);
            gq |= ((label >> (ma + k)) & 1u) << (ma - 1 - k);
        }
        const int ri = static_cast<int>(gray_decode(gi));
        const int rq = static_cast<int>(gray_decode(gq));
        c.points[label] = cplx(amp * (2 * ri - (levels - 1)), amp * (2 * rq - (levels - 1)));
    }
    return c;
}

int Constellation::label_of(std::span<const uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != m)
        throw config_error("map_bits: expected " + std::to_string(m) + " bits");
    int label = 0;
    for (int k = 0; k < m; ++k)
        if (bits[k]) label |= 1 << k;
    return label;
}

cplx Constellation::map_bits(std::span<const uint8_t> bits) const {
    return points[label_of(bits)];
}

BskDistanceSet bsk_distances(const Constellation& c) {
    BskDistanceSet d;
    d.per_bit.resize(c.m);
    for (int bit = 0; bit < c.m; ++bit) {
        d.per_bit[bit].reserve(c.order);
        for (int label = 0; label < c.order; ++label) {
            const double dist = std::abs(c.points[label] - c.points[label ^ (1 << bit)]);
            d.per_bit[bit].push_back(dist);
            d.all.push_back(dist);
        }
    }
    return d;
}

} // namespace stbicm
