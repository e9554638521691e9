#include <doctest.h>

#include <cmath>
#include <vector>

#include "stbicm/channel.hpp"
#include "stbicm/detect.hpp"
#include "stbicm/precode.hpp"

using namespace stbicm;

namespace {

// direct marginalization oracle with explicit probabilities
std::vector<double> brute_app(const CandidateTable& tab, const CVec& y, double n0,
                              const std::vector<double>& prior) {
    const int nb = tab.n_bits;
    std::vector<double> p0(nb);
    for (int k = 0; k < nb; ++k) p0[k] = 1.0 / (1.0 + std::exp(-prior[k]));
    std::vector<double> ext(nb);
    for (int k = 0; k < nb; ++k) {
        double num = 0.0, den = 0.0;
        for (size_t idx = 0; idx < tab.points.size(); ++idx) {
            double w = std::exp(-(y - tab.points[idx]).squaredNorm() / (2.0 * n0));
            for (int j = 0; j < nb; ++j) {
                if (j == k) continue; // extrinsic excludes the bit's own prior
                w *= ((idx >> j) & 1u) ? 1.0 - p0[j] : p0[j];
            }
            (((idx >> k) & 1u) ? den : num) += w;
        }
        ext[k] = std::log(num) - std::log(den);
    }
    return ext;
}

} // namespace

TEST_CASE("candidate table enumerates all labelings") {
    Rng rng(1);
    const auto cst = Constellation::make(2);
    const auto pre = build_precoder(2, 1, 1);
    const auto blocks = draw_channel(2, 2, 1, rng);
    const auto h = build_extended_matrix(blocks, 0, 1, 1);
    const auto tab = precompute_candidates(cst, pre.mat, h);
    CHECK(tab.n_bits == 4);
    CHECK(tab.points.size() == 16u);
    // candidate 0 = all-zero bits on both antennas
    CVec z(2);
    z << cst.points[0], cst.points[0];
    CHECK((tab.points[0] - z * (pre.mat * h)).norm() < 1e-12);
}

TEST_CASE("detector matches brute-force marginalization") {
    Rng rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto cst = Constellation::make(2);
        const auto pre = build_precoder(2, 1, 2);
        const auto blocks = draw_channel(2, 2, 2, rng);
        const auto h = build_extended_matrix(blocks, 0, 2, 2);
        const auto tab = precompute_candidates(cst, pre.mat, h);
        const double n0 = 0.4;
        CVec y = draw_noise(static_cast<int>(h.cols()), 1.0, rng); // arbitrary point
        std::vector<double> prior(tab.n_bits);
        for (auto& v : prior) v = g(rng);
        const auto ext = app_detect(tab, y, n0, prior);
        const auto ref = brute_app(tab, y, n0, prior);
        for (int k = 0; k < tab.n_bits; ++k)
            CHECK(ext[k] == doctest::Approx(ref[k]).epsilon(1e-8));
    }
}

TEST_CASE("genie priors reduce detection to the two-point likelihood ratio") {
    Rng rng(11);
    const auto cst = Constellation::make(2);
    const auto pre = build_precoder(2, 1, 1);
    const auto blocks = draw_channel(2, 1, 1, rng);
    const auto h = build_extended_matrix(blocks, 0, 1, 1);
    const auto tab = precompute_candidates(cst, pre.mat, h);
    const double n0 = 1.0; // keeps the two-point LLR inside the clipping range
    const size_t truth = 0b1011;
    const CVec y = tab.points[truth] + draw_noise(static_cast<int>(h.cols()), n0, rng);
    const double big = 25.0;
    for (int k = 0; k < tab.n_bits; ++k) {
        std::vector<double> prior(tab.n_bits);
        for (int j = 0; j < tab.n_bits; ++j)
            prior[j] = ((truth >> j) & 1u) ? -big : big;
        prior[k] = 0.0;
        const auto ext = app_detect(tab, y, n0, prior);
        const size_t flip = truth ^ (size_t{1} << k);
        const size_t x0 = (truth >> k) & 1u ? flip : truth; // candidate with bit k = 0
        const size_t x1 = x0 ^ (size_t{1} << k);
        const double ref = (-(y - tab.points[x0]).squaredNorm() +
                            (y - tab.points[x1]).squaredNorm()) / (2.0 * n0);
        CHECK(ext[k] == doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("detector cap is enforced") {
    Rng rng(3);
    const auto cst = Constellation::make(6);
    const auto pre = build_precoder(4, 1, 1);
    const auto blocks = draw_channel(4, 1, 1, rng);
    const auto h = build_extended_matrix(blocks, 0, 1, 1);
    CHECK_THROWS_AS(precompute_candidates(cst, pre.mat, h), resource_error);
}
