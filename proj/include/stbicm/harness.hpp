#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stbicm/common.hpp"
#include "stbicm/config.hpp"
#include "stbicm/rng.hpp"

namespace stbicm {

struct FerRecord {
    double ebn0_db = 0.0;
    int iteration = 0; // detector+decoder passes completed (1-based)
    uint64_t frames = 0;
    uint64_t frame_errors = 0;
    uint64_t bit_errors = 0;
    uint64_t info_bits = 0;
    double fer() const { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }
    double ber() const { return info_bits ? static_cast<double>(bit_errors) / info_bits : 0.0; }
};

struct StopRule {
    uint64_t target_frame_errors = 100; // at the final iteration
    uint64_t max_frames = 1'000'000;
};

// Monte Carlo frame/bit error rates of the full chain at each Eb/N0 grid
// point; one record per (point, iteration). Deterministic under cfg.seed via
// per-frame derived RNG streams.
// frame_flags, when given, receives one final-iteration error flag per frame
// (all grid points concatenated), enabling paired comparisons between runs
// that share seed and frame indices.
std::vector<FerRecord> run_fer(const SystemConfig& cfg, const std::vector<double>& ebn0_db,
                               const StopRule& stop,
                               std::vector<uint8_t>* frame_flags = nullptr);

// Monte Carlo outage probability of the Gaussian-input block-fading channel
// at rate bits-per-channel-use, on an SNR grid given in dB (SNR = total
// transmit power over per-receive-antenna noise power).
std::vector<double> outage_gaussian(int n_t, int n_r, int n_c, double rate,
                                    const std::vector<double>& snr_db, int n_draws,
                                    Rng& rng);

// Eb/N0 grid point (dB) -> the SNR (dB) entering the outage formula, under
// the same normalization as the simulator's noise scaling:
// SNR = rate * 10^(ebn0/10) * n_t / n_r.
double ebn0_to_outage_snr_db(double ebn0_db, double rate, int n_t, int n_r);

// CSV ("ebn0_db,iteration,frames,frame_errors,bit_errors,fer,ber") or JSON
// ({"config": ..., "records": [...]}) with 6-significant-digit floats.
void emit_results(const std::vector<FerRecord>& records, const SystemConfig& cfg,
                  const std::string& path, const std::string& format);

// Least-squares diversity estimate from final-iteration records: slope of
// -log10(FER) per 10 dB between the two grid points bracketing the FER range
// [lo, hi] (log-linear interpolation at the range edges). Returns 0 when the
// curve never spans the range.
double diversity_estimate(const std::vector<FerRecord>& records, double fer_hi,
                          double fer_lo, int final_iteration);

// Eb/N0 (dB) at which the final-iteration FER curve crosses `fer`, by
// log-linear interpolation; NaN when never crossed.
double ebn0_at_fer(const std::vector<FerRecord>& records, double fer, int final_iteration);

} // namespace stbicm
