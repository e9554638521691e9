#pragma once

#include <cstdint>
#include <string>

#include "stbicm/common.hpp"

namespace stbicm {

// Full description of one simulated link. JSON field names match the member
// names; omitted fields keep the defaults shown here.
struct SystemConfig {
    int n_t = 2;
    int n_r = 1;
    int n_c = 1;          // independent fading realizations per frame
    int n_s = 0;          // realizations per precoding period; 0 = min(s, n_c)
    int s = 1;            // precoder spreading factor
    int m = 2;            // bits per constellation symbol

    std::string code_type = "conv";   // "conv" (NRNSC) or "turbo" (RSC constituent)
    std::string generators = "7,5";   // octal, comma separated
    int coded_bits = 1024;            // codeword length fed to the channel
    int turbo_inner = 8;              // decoder activations per turbo pass

    std::string interleaver = "optimized"; // "optimized" or "random"
    int min_gap = 0;                  // spread constraint L_I; 0 = maximum usable

    std::string precoder = "dna";     // "dna", "identity", or a file path
    int iterations = 10;              // detector+decoder passes
    uint64_t seed = 1;

    void validate() const;            // throws config_error
    int n_s_eff() const { return n_s > 0 ? n_s : (s < n_c ? s : n_c); }
    int n_groups() const { return n_c / n_s_eff(); }
    int period_bits() const { return s * m * n_t; } // N_I
    double code_rate() const;
};

SystemConfig load_config(const std::string& path);
std::string config_to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const std::string& text);

} // namespace stbicm
