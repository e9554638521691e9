#include "stbicm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stbicm {

CandidateTable precompute_candidates(const Constellation& cst, const CMat& smat,
                                     const CMat& h_ext) {
    CandidateTable tab;
    tab.m = cst.m;
    tab.dim = static_cast<int>(smat.rows());
    tab.n_bits = cst.m * tab.dim;
    if (tab.n_bits > 16)
        throw resource_error("exhaustive detection limited to 16 bits per period");
    if (smat.cols() != h_ext.rows())
        throw config_error("precoder/channel dimension mismatch");
    const CMat sh = smat * h_ext;
    const size_t n_cand = size_t{1} << tab.n_bits;
    tab.points.resize(n_cand);
    CVec z(tab.dim);
    std::vector<uint8_t> bits(tab.m);
    for (size_t idx = 0; idx < n_cand; ++idx) {
        for (int l = 0; l < tab.dim; ++l) {
            for (int k = 0; k < tab.m; ++k)
                bits[k] = static_cast<uint8_t>((idx >> (l * tab.m + k)) & 1u);
            z(l) = cst.map_bits(bits);
        }
        tab.points[idx] = z * sh;
    }
    return tab;
}

std::vector<double> app_detect(const CandidateTable& tab, const CVec& y,
                               double n0, std::span<const double> prior) {
    const int nb = tab.n_bits;
    if (static_cast<int>(prior.size()) != nb)
        throw config_error("detector prior length mismatch");
    // Per-bit log-prior terms; clipping keeps one-value bins finite.
    std::vector<double> lp0(nb), lp1(nb), p0(nb);
    for (int k = 0; k < nb; ++k) {
        const double p = 1.0 / (1.0 + std::exp(-std::clamp(prior[k], -27.6, 27.6)));
        p0[k] = std::clamp(p, 1e-12, 1.0 - 1e-12);
        lp0[k] = std::log(p0[k]);
        lp1[k] = std::log1p(-p0[k]);
    }
    const size_t n_cand = tab.points.size();
    std::vector<double> score(n_cand);
    double smax = -std::numeric_limits<double>::infinity();
    const double inv2n0 = 1.0 / (2.0 * n0);
    for (size_t idx = 0; idx < n_cand; ++idx) {
        double t = -inv2n0 * (y - tab.points[idx]).squaredNorm();
        for (int k = 0; k < nb; ++k)
            t += ((idx >> k) & 1u) ? lp1[k] : lp0[k];
        score[idx] = t;
        smax = std::max(smax, t);
    }
    // Bin exp(t - smax) once per candidate; dividing out the bit's own prior
    // probability turns the posterior sum into the extrinsic numerator.
    std::vector<double> bin0(nb, 0.0), bin1(nb, 0.0);
    for (size_t idx = 0; idx < n_cand; ++idx) {
        const double e = std::exp(score[idx] - smax);
        for (int k = 0; k < nb; ++k) {
            if ((idx >> k) & 1u)
                bin1[k] += e / (1.0 - p0[k]);
            else
                bin0[k] += e / p0[k];
        }
    }
    std::vector<double> ext(nb);
    for (int k = 0; k < nb; ++k) {
        const double l = std::log(std::max(bin0[k], 1e-300)) -
                         std::log(std::max(bin1[k], 1e-300));
        ext[k] = std::clamp(l, -40.0, 40.0);
    }
    return ext;
}

} // namespace stbicm
