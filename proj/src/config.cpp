#include "stbicm/config.hpp"

#include <fstream>
#include <json.hpp>

#include "stbicm/codec.hpp"

namespace stbicm {

using nlohmann::json;

double SystemConfig::code_rate() const {
    if (code_type == "turbo") return 0.5; // rate-1/2 punctured parallel code
    const auto code = ConvCode::nrnsc(generators);
    return 1.0 / code.n_out;
}

void SystemConfig::validate() const {
    if (n_t < 1 || n_r < 1 || n_c < 1 || s < 1 || m < 1)
        throw config_error("dimensions must be positive");
    if ((n_t * n_c) % s != 0)
        throw config_error("s must divide n_t * n_c");
    const int ns = n_s_eff();
    if (ns < 1 || n_c % ns != 0)
        throw config_error("n_s must divide n_c");
    if (s % ns != 0)
        throw config_error("s must be a multiple of n_s");
    if (n_t % (s / ns) != 0)
        throw config_error("n_t must be a multiple of s / n_s");
    if (m * s * n_t > 16)
        throw resource_error("detector cap: m * s * n_t must not exceed 16");
    if (code_type != "conv" && code_type != "turbo")
        throw config_error("code_type must be conv or turbo");
    if (interleaver != "optimized" && interleaver != "random")
        throw config_error("interleaver must be optimized or random");
    const int n_i = period_bits();
    const int groups = n_groups();
    if (coded_bits < 1 || coded_bits % (groups * n_i * n_i) != 0)
        throw config_error("coded_bits must be a multiple of n_groups * (s*m*n_t)^2");
    if (iterations < 1) throw config_error("need at least one iteration");
    if (code_type == "turbo" && coded_bits % 2 != 0)
        throw config_error("punctured turbo codeword length must be even");
}

static void from_json_obj(const json& j, SystemConfig& c) {
    auto get = [&](const char* k, auto& dst) {
        if (j.contains(k)) j.at(k).get_to(dst);
    };
    get("n_t", c.n_t);
    get("n_r", c.n_r);
    get("n_c", c.n_c);
    get("n_s", c.n_s);
    get("s", c.s);
    get("m", c.m);
    get("code_type", c.code_type);
    get("generators", c.generators);
    get("coded_bits", c.coded_bits);
    get("turbo_inner", c.turbo_inner);
    get("interleaver", c.interleaver);
    get("min_gap", c.min_gap);
    get("precoder", c.precoder);
    get("iterations", c.iterations);
    get("seed", c.seed);
}

std::string config_to_json(const SystemConfig& c) {
    json j{{"n_t", c.n_t},
           {"n_r", c.n_r},
           {"n_c", c.n_c},
           {"n_s", c.n_s},
           {"s", c.s},
           {"m", c.m},
           {"code_type", c.code_type},
           {"generators", c.generators},
           {"coded_bits", c.coded_bits},
           {"turbo_inner", c.turbo_inner},
           {"interleaver", c.interleaver},
           {"min_gap", c.min_gap},
           {"precoder", c.precoder},
           {"iterations", c.iterations},
           {"seed", c.seed}};
    return j.dump(2);
}

SystemConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config JSON: ") + e.what());
    }
    SystemConfig c;
    try {
        from_json_obj(j, c);
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config field: ") + e.what());
    }
    return c;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot read config " + path);
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    return config_from_json(text);
}

} // namespace stbicm
