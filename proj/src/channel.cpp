#include "stbicm/channel.hpp"

#include <cmath>

namespace stbicm {

std::vector<CMat> draw_channel(int n_t, int n_r, int n_c, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<CMat> h(n_c);
    for (auto& m : h) {
        m.resize(n_t, n_r);
        for (int r = 0; r < n_t; ++r)
            for (int c = 0; c < n_r; ++c)
                m(r, c) = {g(rng), g(rng)};
    }
    return h;
}

CMat build_extended_matrix(const std::vector<CMat>& blocks, int first, int n_s, int s) {
    if (blocks.empty()) throw config_error("no channel realizations");
    const int n_t = static_cast<int>(blocks[0].rows());
    const int n_r = static_cast<int>(blocks[0].cols());
    if (s % n_s != 0) throw config_error("s must be a multiple of n_s");
    const int per_slot = s / n_s; // antenna vectors per fading realization
    CMat h = CMat::Zero(static_cast<Eigen::Index>(s) * n_t,
                        static_cast<Eigen::Index>(s) * n_r);
    for (int t = 0; t < n_s; ++t) {
        const CMat& blk = blocks.at(first + t);
        for (int q = 0; q < per_slot; ++q) {
            const int v = t * per_slot + q; // channel use within the period
            h.block(static_cast<Eigen::Index>(v) * n_t,
                    static_cast<Eigen::Index>(v) * n_r, n_t, n_r) = blk;
        }
    }
    return h;
}

CVec draw_noise(int dim, double n0, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(n0));
    CVec n(dim);
    for (int i = 0; i < dim; ++i) n(i) = {g(rng), g(rng)};
    return n;
}

CVec transmit(const CVec& x, const CMat& h_ext, double n0, Rng& rng) {
    if (x.cols() != h_ext.rows())
        throw config_error("transmit dimension mismatch");
    return x * h_ext + draw_noise(static_cast<int>(h_ext.cols()), n0, rng);
}

double ebn0_to_n0(double ebn0_db, int m, double r_c, int n_r) {
    if (m < 1 || r_c <= 0.0 || n_r < 1)
        throw config_error("bad Eb/N0 conversion parameters");
    return n_r / (2.0 * m * r_c * std::pow(10.0, ebn0_db / 10.0));
}

} // namespace stbicm
