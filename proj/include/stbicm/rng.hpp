#pragma once

#include <cstdint>
#include <random>

namespace stbicm {

// splitmix64, used to derive independent per-frame seeds from a master seed.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

// Counter-based stream derivation: (master, a, b, c) -> independent stream.
// Two distinct counter tuples never share a stream, so Monte Carlo results
// do not depend on how frames are scheduled across workers.
inline uint64_t derive_seed(uint64_t master, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = splitmix64(master);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline Rng make_stream(uint64_t master, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    return Rng(derive_seed(master, a, b, c));
}

} // namespace stbicm
