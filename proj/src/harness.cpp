#include "stbicm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "stbicm/channel.hpp"
#include "stbicm/codec.hpp"
#include "stbicm/detect.hpp"
#include "stbicm/interleave.hpp"
#include "stbicm/modem.hpp"
#include "stbicm/precode.hpp"

namespace stbicm {
namespace {

struct Chain {
    SystemConfig cfg;
    Constellation cst{};
    ConvCode conv{};
    TurboCode turbo{};
    bool is_turbo = false;
    Interleaver il;
    Precoder pre;
    int n_info = 0;    // free information bits per frame
    int n_groups = 0;  // independent fading groups
    int group_bits = 0;
    int n_i = 0;       // bits per precoding period
    int periods_per_group = 0;

    explicit Chain(const SystemConfig& c) : cfg(c) {
        cfg.validate();
        cst = Constellation::make(cfg.m);
        n_i = cfg.period_bits();
        n_groups = cfg.n_groups();
        group_bits = cfg.coded_bits / n_groups;
        periods_per_group = group_bits / n_i;

        if (cfg.code_type == "turbo") {
            is_turbo = true;
            const auto rsc = ConvCode::rsc(cfg.generators);
            turbo = TurboCode::make(rsc, cfg.coded_bits / 2,
                                    derive_seed(cfg.seed, 0x7b0), true);
            n_info = turbo.branches() - rsc.memory;
        } else {
            conv = ConvCode::nrnsc(cfg.generators);
            n_info = conv_branches(conv, cfg.coded_bits) - conv.memory;
        }

        const int gap = cfg.min_gap > 0 ? cfg.min_gap : max_min_gap(n_i, group_bits);
        if (cfg.interleaver == "optimized")
            il = build_channel_interleaver(n_i, cfg.coded_bits, n_groups, gap,
                                           derive_seed(cfg.seed, 0x11));
        else
            il = build_random_interleaver(cfg.coded_bits, derive_seed(cfg.seed, 0x11));

        if (cfg.precoder == "dna") {
            pre = build_precoder(cfg.n_t, cfg.n_s_eff(), cfg.s);
        } else if (cfg.precoder == "identity") {
            pre.n_t = cfg.n_t;
            pre.n_s = cfg.n_s_eff();
            pre.s = cfg.s;
            pre.mat = CMat::Identity(pre.dim(), pre.dim());
        } else {
            pre = load_precoder(cfg.precoder);
            if (pre.n_t != cfg.n_t || pre.s != cfg.s || pre.n_s != cfg.n_s_eff())
                throw config_error("precoder file dimensions do not match config");
        }
    }

    BitVec encode(const BitVec& info) const {
        return is_turbo ? turbo_encode(turbo, info) : conv_encode(conv, info);
    }
};

// Runs one frame; appends per-iteration (frame_error, bit_errors) outcomes.
void run_frame(const Chain& ch, double n0, uint64_t master, size_t point, uint64_t frame,
               std::vector<uint8_t>& err_frame, std::vector<uint64_t>& err_bits) {
    const SystemConfig& cfg = ch.cfg;
    Rng rng_info = make_stream(master, point, frame, 0);
    Rng rng_chan = make_stream(master, point, frame, 1);
    Rng rng_noise = make_stream(master, point, frame, 2);

    BitVec info(ch.n_info);
    for (auto& b : info) b = static_cast<uint8_t>(rng_info() & 1u);
    const BitVec coded = ch.encode(info);

    // the pseudo-random baseline models the interleaver ensemble: fresh draw
    // per frame, so the measured curve is the ensemble average
    Interleaver frame_il;
    const Interleaver* ilp = &ch.il;
    if (cfg.interleaver == "random") {
        frame_il = build_random_interleaver(static_cast<int>(coded.size()),
                                            derive_seed(master, point, frame, 3));
        ilp = &frame_il;
    }
    const Interleaver& il = *ilp;

    // transmit-order bits: position g*group_bits + tau*n_i + (l*m + p)
    BitVec tx(coded.size());
    for (size_t c = 0; c < coded.size(); ++c) tx[il.perm[c]] = coded[c];

    const int dim = cfg.s * cfg.n_t;          // precoder input symbols
    const int out_dim = cfg.s * cfg.n_r;
    const auto blocks = draw_channel(cfg.n_t, cfg.n_r, cfg.n_c, rng_chan);

    std::vector<CandidateTable> tables(ch.n_groups);
    std::vector<std::vector<CVec>> rx(ch.n_groups);
    for (int g = 0; g < ch.n_groups; ++g) {
        const CMat h_ext = build_extended_matrix(blocks, g * cfg.n_s_eff(),
                                                 cfg.n_s_eff(), cfg.s);
        tables[g] = precompute_candidates(ch.cst, ch.pre.mat, h_ext);
        rx[g].resize(ch.periods_per_group);
        const CMat sh = ch.pre.mat * h_ext;
        CVec z(dim);
        std::vector<uint8_t> bits(cfg.m);
        for (int tau = 0; tau < ch.periods_per_group; ++tau) {
            const size_t base = static_cast<size_t>(g) * ch.group_bits +
                                static_cast<size_t>(tau) * ch.n_i;
            for (int l = 0; l < dim; ++l) {
                for (int p = 0; p < cfg.m; ++p) bits[p] = tx[base + l * cfg.m + p];
                z(l) = ch.cst.map_bits(bits);
            }
            rx[g][tau] = z * sh + draw_noise(out_dim, n0, rng_noise);
        }
    }

    std::vector<double> prior_tx(coded.size(), 0.0); // decoder->detector, transmit order
    std::vector<double> llr_code(coded.size());      // detector->decoder, codeword order
    std::vector<double> det_ext(ch.n_i);
    for (int it = 0; it < cfg.iterations; ++it) {
        for (int g = 0; g < ch.n_groups; ++g) {
            for (int tau = 0; tau < ch.periods_per_group; ++tau) {
                const size_t base = static_cast<size_t>(g) * ch.group_bits +
                                    static_cast<size_t>(tau) * ch.n_i;
                auto ext = app_detect(tables[g], rx[g][tau], n0,
                                      {prior_tx.data() + base, static_cast<size_t>(ch.n_i)});
                std::copy(ext.begin(), ext.end(), det_ext.begin());
                for (int k = 0; k < ch.n_i; ++k) prior_tx[base + k] = ext[k];
            }
        }
        // prior_tx currently holds detector extrinsics; de-interleave for the decoder
        for (size_t c = 0; c < coded.size(); ++c) llr_code[c] = prior_tx[il.perm[c]];

        std::vector<double> coded_ext;
        std::vector<double> info_app;
        if (ch.is_turbo) {
            auto r = turbo_decode(ch.turbo, llr_code, {}, cfg.turbo_inner);
            coded_ext = std::move(r.coded_ext);
            info_app = std::move(r.info_app);
        } else {
            auto r = bcjr_decode(ch.conv, llr_code, {}, true);
            coded_ext = std::move(r.coded_ext);
            info_app = std::move(r.info_app);
        }
        for (size_t c = 0; c < coded.size(); ++c)
            prior_tx[il.perm[c]] = coded_ext[c];

        uint64_t bad = 0;
        for (int k = 0; k < ch.n_info; ++k)
            bad += (info_app[k] < 0.0) != (info[k] != 0);
        err_frame.push_back(bad > 0);
        err_bits.push_back(bad);
    }
}

} // namespace

std::vector<FerRecord> run_fer(const SystemConfig& cfg, const std::vector<double>& ebn0_db,
                               const StopRule& stop, std::vector<uint8_t>* frame_flags) {
    Chain ch(cfg);
    std::vector<FerRecord> out;
    for (size_t pt = 0; pt < ebn0_db.size(); ++pt) {
        const double n0 = ebn0_to_n0(ebn0_db[pt], cfg.m, cfg.code_rate(), cfg.n_r);
        std::vector<FerRecord> recs(cfg.iterations);
        for (int it = 0; it < cfg.iterations; ++it) {
            recs[it].ebn0_db = ebn0_db[pt];
            recs[it].iteration = it + 1;
        }
        std::vector<uint8_t> ef;
        std::vector<uint64_t> eb;
        uint64_t frames = 0;
        while (frames < stop.max_frames &&
               recs.back().frame_errors < stop.target_frame_errors) {
            ef.clear();
            eb.clear();
            run_frame(ch, n0, cfg.seed, pt, frames, ef, eb);
            for (int it = 0; it < cfg.iterations; ++it) {
                recs[it].frames++;
                recs[it].frame_errors += ef[it];
                recs[it].bit_errors += eb[it];
                recs[it].info_bits += ch.n_info;
            }
            if (frame_flags) frame_flags->push_back(ef.back());
            ++frames;
        }
        out.insert(out.end(), recs.begin(), recs.end());
    }
    return out;
}

std::vector<double> outage_gaussian(int n_t, int n_r, int n_c, double rate,
                                    const std::vector<double>& snr_db, int n_draws,
                                    Rng& rng) {
    if (n_draws < 10'000) throw config_error("outage needs at least 1e4 draws");
    std::vector<double> out;
    out.reserve(snr_db.size());
    // Mutual information samples are SNR-independent only through the scale,
    // so draw channels once per grid point for simplicity/determinism.
    for (double db : snr_db) {
        const double f = std::pow(10.0, db / 10.0) / n_t; // per-antenna SNR factor
        uint64_t below = 0;
        for (int d = 0; d < n_draws; ++d) {
            const auto blocks = draw_channel(n_t, n_r, n_c, rng);
            double mi = 0.0;
            for (const auto& h : blocks) {
                const CMat g = CMat::Identity(n_r, n_r) + f * (h.adjoint() * h);
                mi += std::log2(std::abs(g.determinant().real()));
            }
            if (mi / n_c < rate) ++below;
        }
        out.push_back(static_cast<double>(below) / n_draws);
    }
    return out;
}

double ebn0_to_outage_snr_db(double ebn0_db, double rate, int n_t, int n_r) {
    (void)n_t;
    // total transmit SNR n_t/(2 N0) under the simulator's Eb normalization
    return 10.0 * std::log10(rate * std::pow(10.0, ebn0_db / 10.0) / n_r);
}

void emit_results(const std::vector<FerRecord>& records, const SystemConfig& cfg,
                  const std::string& path, const std::string& format) {
    std::ofstream f(path);
    if (!f) throw config_error("cannot write " + path);
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    if (format == "csv") {
        f << "ebn0_db,iteration,frames,frame_errors,bit_errors,fer,ber\n";
        for (const auto& r : records)
            f << fmt(r.ebn0_db) << ',' << r.iteration << ',' << r.frames << ','
              << r.frame_errors << ',' << r.bit_errors << ',' << fmt(r.fer()) << ','
              << fmt(r.ber()) << '\n';
    } else if (format == "json") {
        nlohmann::json j;
        j["config"] = nlohmann::json::parse(config_to_json(cfg));
        auto& arr = j["records"] = nlohmann::json::array();
        for (const auto& r : records)
            arr.push_back({{"ebn0_db", r.ebn0_db},
                           {"iteration", r.iteration},
                           {"frames", r.frames},
                           {"frame_errors", r.frame_errors},
                           {"bit_errors", r.bit_errors},
                           {"fer", r.fer()},
                           {"ber", r.ber()}});
        f << j.dump(2) << '\n';
    } else {
        throw config_error("unknown result format " + format);
    }
}

namespace {

// final-iteration (ebn0, fer) points with fer > 0, ascending in ebn0
std::vector<std::pair<double, double>> final_curve(const std::vector<FerRecord>& records,
                                                   int final_iteration) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records)
        if (r.iteration == final_iteration && r.fer() > 0.0)
            pts.emplace_back(r.ebn0_db, r.fer());
    std::sort(pts.begin(), pts.end());
    return pts;
}

} // namespace

double ebn0_at_fer(const std::vector<FerRecord>& records, double fer, int final_iteration) {
    const auto pts = final_curve(records, final_iteration);
    const double target = std::log10(fer);
    for (size_t i = 1; i < pts.size(); ++i) {
        const double a = std::log10(pts[i - 1].second), b = std::log10(pts[i].second);
        if ((a >= target && b <= target) || (a <= target && b >= target)) {
            const double t = (a == b) ? 0.0 : (target - a) / (b - a);
            return pts[i - 1].first + t * (pts[i].first - pts[i - 1].first);
        }
    }
    return std::nan("");
}

double diversity_estimate(const std::vector<FerRecord>& records, double fer_hi,
                          double fer_lo, int final_iteration) {
    const double e_hi = ebn0_at_fer(records, fer_hi, final_iteration);
    const double e_lo = ebn0_at_fer(records, fer_lo, final_iteration);
    if (std::isnan(e_hi) || std::isnan(e_lo) || e_lo <= e_hi) return 0.0;
    return 10.0 * (std::log10(fer_hi) - std::log10(fer_lo)) / (e_lo - e_hi);
}

} // namespace stbicm
