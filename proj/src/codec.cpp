#include "stbicm/codec.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

namespace stbicm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<unsigned> parse_octal_csv(const std::string& csv) {
    std::vector<unsigned> gens;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        unsigned g = 0;
        auto first = tok.find_first_not_of(" \t");
        auto last = tok.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw config_error("empty generator token");
        auto res = std::from_chars(tok.data() + first, tok.data() + last + 1, g, 8);
        if (res.ec != std::errc{} || res.ptr != tok.data() + last + 1)
            throw config_error("bad octal generator: " + tok);
        gens.push_back(g);
    }
    if (gens.empty())
        throw config_error("no generators given");
    return gens;
}

int parity(unsigned x) { return std::popcount(x) & 1; }

void build_trellis(ConvCode& c) {
    const unsigned width = std::bit_width(*std::max_element(c.gens.begin(), c.gens.end()));
    c.memory = static_cast<int>(width) - 1;
    if (c.memory < 1)
        throw config_error("generator constraint length must exceed 1");
    c.n_states = 1 << c.memory;
    c.n_out = static_cast<int>(c.gens.size());
    c.next_state.resize(c.n_states);
    c.out_bits.resize(c.n_states);
    c.term_input.resize(c.n_states);
    for (int s = 0; s < c.n_states; ++s) {
        // Register bit memory-1 holds the newest shift-in; generator MSB
        // weights the branch input a.
        for (int in = 0; in < 2; ++in) {
            unsigned a;
            if (c.recursive)
                a = static_cast<unsigned>(in) ^ static_cast<unsigned>(parity(c.gens[0] & static_cast<unsigned>(s)));
            else
                a = static_cast<unsigned>(in);
            const unsigned r = (a << c.memory) | static_cast<unsigned>(s);
            unsigned out = 0;
            for (int o = 0; o < c.n_out; ++o) {
                int bit = (c.recursive && o == 0) ? in : parity(c.gens[o] & r);
                out |= static_cast<unsigned>(bit) << o;
            }
            c.next_state[s][in] = static_cast<int>((a << (c.memory - 1)) | (static_cast<unsigned>(s) >> 1));
            c.out_bits[s][in] = out;
        }
        if (!c.recursive) {
            c.term_input[s] = 0;
        } else {
            // The input that forces the feedback sum (the shift-in) to zero.
            c.term_input[s] = parity(c.gens[0] & static_cast<unsigned>(s));
        }
    }
}

} // namespace

ConvCode ConvCode::nrnsc(const std::string& octal_csv) {
    ConvCode c;
    c.gens = parse_octal_csv(octal_csv);
    c.recursive = false;
    build_trellis(c);
    return c;
}

ConvCode ConvCode::rsc(const std::string& octal_csv) {
    ConvCode c;
    c.gens = parse_octal_csv(octal_csv);
    if (c.gens.size() < 2)
        throw config_error("recursive code needs feedback + at least one parity generator");
    c.recursive = true;
    build_trellis(c);
    return c;
}

BitVec conv_encode(const ConvCode& code, const BitVec& info) {
    const int branches = static_cast<int>(info.size()) + code.memory;
    BitVec out;
    out.reserve(static_cast<size_t>(branches) * code.n_out);
    int s = 0;
    for (int j = 0; j < branches; ++j) {
        const int in = j < static_cast<int>(info.size()) ? info[j] : code.term_input[s];
        const unsigned o = code.out_bits[s][in];
        for (int k = 0; k < code.n_out; ++k)
            out.push_back(static_cast<uint8_t>((o >> k) & 1u));
        s = code.next_state[s][in];
    }
    if (s != 0)
        throw config_error("termination failed"); // unreachable for valid trellis
    return out;
}

BcjrResult bcjr_decode(const ConvCode& code, std::span<const double> coded_llr,
                       std::span<const double> info_prior, bool terminated) {
    const int L = conv_branches(code, coded_llr.size());
    if (!info_prior.empty() && static_cast<int>(info_prior.size()) != L)
        throw config_error("prior length mismatch");
    const int S = code.n_states;
    const int N = code.n_out;

    // Branch metric for output value o at branch j, from the coded-bit LLRs:
    // sum over output bits of +L/2 (bit 0) or -L/2 (bit 1), constant offset
    // dropped.
    std::vector<double> gamma(static_cast<size_t>(L) << N);
    for (int j = 0; j < L; ++j) {
        const double* llr = coded_llr.data() + static_cast<size_t>(j) * N;
        for (unsigned o = 0; o < (1u << N); ++o) {
            double g = 0.0;
            for (int k = 0; k < N; ++k)
                g += ((o >> k) & 1u) ? -0.5 * llr[k] : 0.5 * llr[k];
            gamma[(static_cast<size_t>(j) << N) | o] = g;
        }
    }
    auto prior_of = [&](int j, int in) {
        if (info_prior.empty()) return 0.0;
        return in == 0 ? 0.5 * info_prior[j] : -0.5 * info_prior[j];
    };

    std::vector<double> alpha(static_cast<size_t>(L + 1) * S, kNegInf);
    std::vector<double> beta(static_cast<size_t>(L + 1) * S, kNegInf);
    alpha[0] = 0.0;
    if (terminated)
        beta[static_cast<size_t>(L) * S] = 0.0;
    else
        std::fill_n(beta.begin() + static_cast<size_t>(L) * S, S, 0.0);

    for (int j = 0; j < L; ++j) {
        const double* a = alpha.data() + static_cast<size_t>(j) * S;
        double* an = alpha.data() + static_cast<size_t>(j + 1) * S;
        const size_t gj = static_cast<size_t>(j) << N;
        for (int s = 0; s < S; ++s) {
            if (a[s] == kNegInf) continue;
            for (int in = 0; in < 2; ++in) {
                const double v = a[s] + gamma[gj | code.out_bits[s][in]] + prior_of(j, in);
                double& dst = an[code.next_state[s][in]];
                dst = max_star(dst, v);
            }
        }
    }
    for (int j = L - 1; j >= 0; --j) {
        const double* bn = beta.data() + static_cast<size_t>(j + 1) * S;
        double* b = beta.data() + static_cast<size_t>(j) * S;
        const size_t gj = static_cast<size_t>(j) << N;
        for (int s = 0; s < S; ++s) {
            double acc = kNegInf;
            for (int in = 0; in < 2; ++in) {
                const double nb = bn[code.next_state[s][in]];
                if (nb == kNegInf) continue;
                acc = max_star(acc, nb + gamma[gj | code.out_bits[s][in]] + prior_of(j, in));
            }
            b[s] = acc;
        }
    }

    BcjrResult res;
    res.coded_app.resize(static_cast<size_t>(L) * N);
    res.coded_ext.resize(static_cast<size_t>(L) * N);
    res.info_app.resize(L);
    res.info_ext.resize(L);
    for (int j = 0; j < L; ++j) {
        const double* a = alpha.data() + static_cast<size_t>(j) * S;
        const double* bn = beta.data() + static_cast<size_t>(j + 1) * S;
        const size_t gj = static_cast<size_t>(j) << N;
        std::array<std::array<double, 2>, 16> bit_acc; // [output bit][value]
        for (int k = 0; k < N; ++k) bit_acc[k] = {kNegInf, kNegInf};
        std::array<double, 2> in_acc = {kNegInf, kNegInf};
        for (int s = 0; s < S; ++s) {
            if (a[s] == kNegInf) continue;
            for (int in = 0; in < 2; ++in) {
                const double nb = bn[code.next_state[s][in]];
                if (nb == kNegInf) continue;
                const unsigned o = code.out_bits[s][in];
                const double v = a[s] + gamma[gj | o] + prior_of(j, in) + nb;
                in_acc[in] = max_star(in_acc[in], v);
                for (int k = 0; k < N; ++k) {
                    double& dst = bit_acc[k][(o >> k) & 1u];
                    dst = max_star(dst, v);
                }
            }
        }
        res.info_app[j] = in_acc[0] - in_acc[1];
        res.info_ext[j] = res.info_app[j] - (info_prior.empty() ? 0.0 : info_prior[j]);
        for (int k = 0; k < N; ++k) {
            const size_t idx = static_cast<size_t>(j) * N + k;
            res.coded_app[idx] = bit_acc[k][0] - bit_acc[k][1];
            res.coded_ext[idx] = res.coded_app[idx] - coded_llr[idx];
        }
    }
    return res;
}

WeightSpectrum weight_spectrum(const ConvCode& code, int w_max, int frame_branches) {
    if (w_max < 1 || frame_branches <= code.memory)
        throw config_error("weight spectrum needs w_max >= 1 and at least one free branch");
    const int S = code.n_states;
    const int W = w_max + 1;
    const int free_branches = frame_branches - code.memory;
    std::vector<uint64_t> dp(static_cast<size_t>(S) * W, 0), nx(static_cast<size_t>(S) * W);
    dp[0] = 1;
    auto step = [&](bool forced_only) {
        std::fill(nx.begin(), nx.end(), 0);
        for (int st = 0; st < S; ++st) {
            const uint64_t* row = dp.data() + static_cast<size_t>(st) * W;
            bool any = false;
            for (int w = 0; w < W; ++w)
                if (row[w]) { any = true; break; }
            if (!any) continue;
            const int ins[2] = {forced_only ? code.term_input[st] : 0,
                                forced_only ? code.term_input[st] : 1};
            const int n_in = forced_only ? 1 : 2;
            for (int ii = 0; ii < n_in; ++ii) {
                const int in = ins[ii];
                const int wt = std::popcount(code.out_bits[st][in]);
                uint64_t* dst = nx.data() + static_cast<size_t>(code.next_state[st][in]) * W;
                for (int w = 0; w + wt < W; ++w) {
                    if (!row[w]) continue;
                    uint64_t& cell = dst[w + wt];
                    if (cell > std::numeric_limits<uint64_t>::max() - row[w])
                        throw resource_error("weight multiplicity overflow");
                    cell += row[w];
                }
            }
        }
        dp.swap(nx);
    };
    for (int j = 0; j < free_branches; ++j) step(false);
    for (int j = 0; j < code.memory; ++j) step(true);

    WeightSpectrum ws;
    ws.w_max = w_max;
    for (int w = 1; w < W; ++w)
        if (dp[w]) ws.entries[w] = dp[w];
    ws.d_hmin = ws.entries.empty() ? 0 : ws.entries.begin()->first;
    return ws;
}

TurboCode TurboCode::make(const ConvCode& rsc, std::vector<int> pi, bool punctured) {
    if (!rsc.recursive || rsc.n_out != 2)
        throw config_error("turbo constituent must be a rate-1/2 recursive code");
    TurboCode t;
    t.rsc = rsc;
    t.pi = std::move(pi);
    t.pi_inv.resize(t.pi.size());
    std::vector<uint8_t> seen(t.pi.size(), 0);
    for (size_t u = 0; u < t.pi.size(); ++u) {
        const int p = t.pi[u];
        if (p < 0 || p >= static_cast<int>(t.pi.size()) || seen[p])
            throw config_error("turbo interleaver is not a permutation");
        seen[p] = 1;
        t.pi_inv[p] = static_cast<int>(u);
    }
    t.punctured = punctured;
    return t;
}

TurboCode TurboCode::make(const ConvCode& rsc, int branches, uint64_t seed, bool punctured) {
    std::vector<int> pi(branches);
    std::iota(pi.begin(), pi.end(), 0);
    Rng rng(seed);
    std::shuffle(pi.begin(), pi.end(), rng);
    return make(rsc, std::move(pi), punctured);
}

BitVec turbo_encode(const TurboCode& code, const BitVec& info) {
    const int L = code.branches();
    const int mem = code.rsc.memory;
    if (static_cast<int>(info.size()) != L - mem)
        throw config_error("turbo info length must be branches - memory");

    // Encoder 1: terminated; its tail bits become part of the systematic frame.
    BitVec sys(L), p1(L);
    {
        int s = 0;
        for (int j = 0; j < L; ++j) {
            const int in = j < L - mem ? info[j] : code.rsc.term_input[s];
            const unsigned o = code.rsc.out_bits[s][in];
            sys[j] = static_cast<uint8_t>(o & 1u);
            p1[j] = static_cast<uint8_t>((o >> 1) & 1u);
            s = code.rsc.next_state[s][in];
        }
    }
    // Encoder 2: interleaved systematic frame, left unterminated.
    BitVec p2(L);
    {
        int s = 0;
        for (int u = 0; u < L; ++u) {
            const int in = sys[code.pi[u]];
            p2[u] = static_cast<uint8_t>((code.rsc.out_bits[s][in] >> 1) & 1u);
            s = code.rsc.next_state[s][in];
        }
    }
    BitVec out;
    out.reserve(static_cast<size_t>(code.coded_bits()));
    for (int j = 0; j < L; ++j) {
        out.push_back(sys[j]);
        if (!code.punctured) {
            out.push_back(p1[j]);
            out.push_back(p2[code.pi_inv[j]]);
        } else {
            // Alternate which parity survives so both encoders stay represented.
            out.push_back(j % 2 == 0 ? p1[j] : p2[code.pi_inv[j]]);
        }
    }
    return out;
}

TurboResult turbo_decode(const TurboCode& code, std::span<const double> coded_llr,
                         std::span<const double> info_prior, int n_inner) {
    const int L = code.branches();
    const int per_branch = code.punctured ? 2 : 3;
    if (static_cast<int>(coded_llr.size()) != L * per_branch)
        throw config_error("turbo llr length mismatch");
    if (!info_prior.empty() && static_cast<int>(info_prior.size()) != L)
        throw config_error("turbo prior length mismatch");
    if (n_inner < 1)
        throw config_error("turbo decoding needs at least one inner iteration");

    // De-multiplex; punctured parity positions carry zero LLR. Frame position
    // j holds p2[pi_inv[j]], so its LLR belongs to encoder-2 branch pi_inv[j].
    std::vector<double> Lsys(L), Lp1(L, 0.0), Lp2(L, 0.0);
    for (int j = 0; j < L; ++j) {
        Lsys[j] = coded_llr[static_cast<size_t>(j) * per_branch];
        if (!code.punctured) {
            Lp1[j] = coded_llr[static_cast<size_t>(j) * per_branch + 1];
            Lp2[code.pi_inv[j]] = coded_llr[static_cast<size_t>(j) * per_branch + 2];
        } else if (j % 2 == 0) {
            Lp1[j] = coded_llr[static_cast<size_t>(j) * per_branch + 1];
        } else {
            Lp2[code.pi_inv[j]] = coded_llr[static_cast<size_t>(j) * per_branch + 1];
        }
    }

    std::vector<double> ext1(L, 0.0), ext2_de(L, 0.0);
    std::vector<double> in1(static_cast<size_t>(L) * 2), in2(static_cast<size_t>(L) * 2);
    std::vector<double> prior1(L), prior2(L);
    BcjrResult r1, r2;
    for (int it = 0; it < n_inner; ++it) {
        for (int j = 0; j < L; ++j) {
            in1[static_cast<size_t>(j) * 2] = Lsys[j];
            in1[static_cast<size_t>(j) * 2 + 1] = Lp1[j];
            prior1[j] = ext2_de[j] + (info_prior.empty() ? 0.0 : info_prior[j]);
        }
        r1 = bcjr_decode(code.rsc, in1, prior1, true);
        for (int j = 0; j < L; ++j) {
            // Extrinsic toward decoder 2 excludes its own prior and the
            // systematic observation (already fed to decoder 2 directly).
            ext1[j] = r1.info_app[j] - prior1[j] - Lsys[j];
        }
        for (int u = 0; u < L; ++u) {
            const int j = code.pi[u];
            in2[static_cast<size_t>(u) * 2] = Lsys[j];
            in2[static_cast<size_t>(u) * 2 + 1] = Lp2[u];
            prior2[u] = ext1[j] + (info_prior.empty() ? 0.0 : info_prior[j]);
        }
        r2 = bcjr_decode(code.rsc, in2, prior2, false);
        for (int u = 0; u < L; ++u)
            ext2_de[code.pi[u]] = r2.info_app[u] - prior2[u] - Lsys[code.pi[u]];
    }

    TurboResult res;
    res.info_app.resize(L);
    for (int j = 0; j < L; ++j)
        res.info_app[j] = Lsys[j] + ext1[j] + ext2_de[j] +
                          (info_prior.empty() ? 0.0 : info_prior[j]);

    // Coded extrinsics back to the detector, one per transmitted bit.
    res.coded_ext.resize(static_cast<size_t>(L) * per_branch);
    for (int j = 0; j < L; ++j) {
        const size_t base = static_cast<size_t>(j) * per_branch;
        // Systematic: everything both decoders learned beyond the channel LLR.
        res.coded_ext[base] = ext1[j] + ext2_de[j] + (info_prior.empty() ? 0.0 : info_prior[j]);
        const double e1 = r1.coded_ext[static_cast<size_t>(j) * 2 + 1];
        const double e2 = r2.coded_ext[static_cast<size_t>(code.pi_inv[j]) * 2 + 1];
        if (!code.punctured) {
            res.coded_ext[base + 1] = e1;
            res.coded_ext[base + 2] = e2;
        } else {
            res.coded_ext[base + 1] = j % 2 == 0 ? e1 : e2;
        }
    }
    return res;
}

} // namespace stbicm
