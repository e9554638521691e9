#include "stbicm/interleave.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace stbicm {
namespace {

// Spread-constrained permutation of n_blocks * block_size values: any two
// output positions less than min_gap apart must hold values from distinct
// blocks of block_size consecutive values. Greedy sequential fill with random
// tie-breaking and restarts; preferring the fullest blocks keeps admissible
// blocks available near the tail.
std::vector<int> spread_permutation(int n_blocks, int block_size, int min_gap, Rng& rng) {
    const int n = n_blocks * block_size;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::vector<int>> pool(n_blocks);
        for (int b = 0; b < n_blocks; ++b) {
            pool[b].resize(block_size);
            std::iota(pool[b].begin(), pool[b].end(), b * block_size);
            std::shuffle(pool[b].begin(), pool[b].end(), rng);
        }
        std::vector<int> out;
        out.reserve(n);
        std::vector<int> recent; // blocks used in the last min_gap - 1 slots
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            std::vector<int> cand;
            int best_size = -1;
            for (int b = 0; b < n_blocks; ++b) {
                if (pool[b].empty()) continue;
                if (std::find(recent.begin(), recent.end(), b) != recent.end()) continue;
                const int sz = static_cast<int>(pool[b].size());
                if (sz > best_size) {
                    best_size = sz;
                    cand.clear();
                }
                if (sz == best_size) cand.push_back(b);
            }
            if (cand.empty()) { ok = false; break; }
            const int b = cand[std::uniform_int_distribution<size_t>(0, cand.size() - 1)(rng)];
            out.push_back(pool[b].back());
            pool[b].pop_back();
            recent.push_back(b);
            if (static_cast<int>(recent.size()) >= min_gap)
                recent.erase(recent.begin());
        }
        if (ok) return out;
    }
    throw resource_error("spread-constrained permutation search failed");
}

} // namespace

int max_min_gap(int n_i, int length) {
    return (length / (n_i * n_i) + 1) / 2;
}

Interleaver build_basic_interleaver(int n_i, int length, int min_gap, uint64_t seed) {
    if (n_i < 1 || length < 1 || length % (n_i * n_i) != 0)
        throw config_error("interleaver length must be a positive multiple of N_I^2");
    if (min_gap < 1 || min_gap > max_min_gap(n_i, length))
        throw config_error("interleaver spread constraint out of range");
    const int m = length / n_i; // per-stream length
    Rng rng(seed);
    const std::vector<int> pi = spread_permutation(m / n_i, n_i, min_gap, rng);

    // Composition of the three stages, per (stream i, stream slot j):
    //   stage 1 reads input position c = ((i + j) mod N_I) + j * N_I,
    //   stage 2 moves slot j to p = pi[j] = j1 * N_I + j2,
    //   stage 3 rotates to column (i + j2) mod N_I + j1 * N_I, offset i.
    Interleaver il;
    il.perm.resize(length);
    for (int i = 0; i < n_i; ++i) {
        for (int j = 0; j < m; ++j) {
            const int c = (i + j) % n_i + j * n_i;
            const int p = pi[j];
            const int j1 = p / n_i, j2 = p % n_i;
            il.perm[c] = ((i + j2) % n_i + j1 * n_i) * n_i + i;
        }
    }
    return il;
}

Interleaver build_channel_interleaver(int n_i, int length, int n_groups,
                                      int min_gap, uint64_t seed) {
    if (n_groups < 1 || length % n_groups != 0)
        throw config_error("codeword length must split evenly across fading groups");
    const int glen = length / n_groups;
    std::vector<Interleaver> sub(n_groups);
    for (int g = 0; g < n_groups; ++g)
        sub[g] = build_basic_interleaver(n_i, glen, min_gap,
                                         derive_seed(seed, 0x1e4f, g));
    Interleaver il;
    il.perm.resize(length);
    for (int c = 0; c < length; ++c) {
        const int g = c % n_groups;       // round-robin de-multiplex
        const int k = c / n_groups;       // position within the group
        il.perm[c] = g * glen + sub[g].perm[k];
    }
    return il;
}

Interleaver build_random_interleaver(int length, uint64_t seed) {
    Interleaver il;
    il.perm.resize(length);
    std::iota(il.perm.begin(), il.perm.end(), 0);
    Rng rng(seed);
    std::shuffle(il.perm.begin(), il.perm.end(), rng);
    return il;
}

int min_conflict_window(const Interleaver& il, int n_i, int n_groups) {
    const int n = il.size();
    const int glen = n / n_groups;
    // column_id[c] globally unique per (group, time column)
    std::vector<int> col(n);
    for (int c = 0; c < n; ++c)
        col[c] = il.perm[c] / n_i; // glen % n_i == 0, so columns never straddle groups
    // Largest W such that every window of W inputs has distinct columns =
    // min over c of (distance to the nearest later repeat of col within reach).
    int best = n;
    std::vector<int> last(static_cast<size_t>(n) / n_i + 1, -1);
    (void)glen;
    for (int c = 0; c < n; ++c) {
        if (last[col[c]] >= 0)
            best = std::min(best, c - last[col[c]]);
        last[col[c]] = c;
    }
    return best;
}

bool verify_interleaver(const Interleaver& il, int n_i, int n_groups, int min_gap) {
    const int n = il.size();
    if (n % (n_groups * n_i * n_i) != 0) return false;
    std::vector<uint8_t> seen(n, 0);
    for (int c = 0; c < n; ++c) {
        const int p = il.perm[c];
        if (p < 0 || p >= n || seen[p]) return false;
        seen[p] = 1;
    }
    return min_conflict_window(il, n_i, n_groups) >= (min_gap - 1) * n_i + 1;
}

void save_interleaver(const Interleaver& il, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw config_error("cannot write " + path);
    for (int p : il.perm) f << p << '\n';
}

Interleaver load_interleaver(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot read " + path);
    Interleaver il;
    int v;
    while (f >> v) il.perm.push_back(v);
    return il;
}

} // namespace stbicm
