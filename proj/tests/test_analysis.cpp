#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "stbicm/analysis.hpp"
#include "stbicm/modem.hpp"

using namespace stbicm;

namespace {

// product-form characteristic function of the decision variable
std::complex<double> phi_product(const std::vector<PepMode>& modes, double n0,
                                 std::complex<double> z) {
    std::complex<double> acc = 1.0;
    for (const auto& m : modes)
        acc *= std::pow(1.0 - m.delta2 / (2.0 * n0) * z * (1.0 + z), -m.mult);
    return acc;
}

// Monte Carlo of the decision variable: per distinct distance delta2 and
// fading instance, R = delta2 * Gamma(n_r, 1), LLR = R/(2 n0) + sqrt(R/n0) g.
double pep_mc(const std::vector<std::pair<double, int>>& dist_lambda, int n_r,
              double n0, int draws, Rng& rng) {
    std::exponential_distribution<double> ex(1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    uint64_t neg = 0;
    for (int d = 0; d < draws; ++d) {
        double x = 0.0;
        for (const auto& [d2, lambda] : dist_lambda)
            for (int j = 0; j < lambda; ++j) {
                double r = 0.0;
                for (int a = 0; a < n_r; ++a) r += ex(rng);
                r *= d2;
                x += r / (2.0 * n0) + std::sqrt(r / n0) * g(rng);
            }
        neg += x < 0.0;
    }
    return static_cast<double>(neg) / draws;
}

} // namespace

TEST_CASE("diversity bound spot values from the reference tables") {
    // n_c = 1, rate 1/2, n_r = 1
    CHECK(singleton_diversity(0.5, 4, 1, 1, 2) == 4);
    CHECK(singleton_diversity(0.5, 4, 1, 1, 1) == 3);
    CHECK(singleton_diversity(0.5, 4, 1, 1, 4) == 4);
    CHECK(singleton_diversity(0.5, 2, 1, 1, 1) == 2);
    // n_c = 2
    CHECK(singleton_diversity(0.5, 3, 2, 1, 3) == 6);
    CHECK(singleton_diversity(0.5, 2, 2, 1, 2) == 4);
    // full spreading gives full diversity regardless of rate < 1
    CHECK(singleton_diversity(0.9, 3, 2, 2, 6) == 12);
    // minimum distance cap
    CHECK(singleton_diversity(0.5, 4, 1, 1, 2, 1) == 2);
    CHECK_THROWS_AS(singleton_diversity(0.5, 4, 1, 1, 3), config_error);
}

TEST_CASE("optimal spreading factor") {
    CHECK(optimal_spreading(0.5, 4, 1) == 2);
    CHECK(optimal_spreading(0.75, 2, 1) == 2);
    CHECK(optimal_spreading(0.25, 2, 2) == 1);
    CHECK(optimal_spreading(0.5, 3, 1) == 3); // divisors of 3: only 3 >= 1.5
    CHECK(optimal_spreading(2.0 / 3.0, 3, 2) == 6);
}

TEST_CASE("single-mode exact PEP closed form") {
    for (double d2 : {0.5, 2.0, 4.0}) {
        for (double n0 : {0.1, 0.5, 2.0}) {
            const double mu = 1.0 / std::sqrt(1.0 + 8.0 * n0 / d2);
            const double ref = 0.5 * (1.0 - mu);
            CHECK(pep_exact({{d2, 1}}, n0) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("confluent case matches the diversity-L closed form") {
    Rng rng(13);
    std::uniform_real_distribution<double> ud2(0.2, 6.0), un0(0.02, 1.0);
    std::uniform_int_distribution<int> ul(1, 6), unr(1, 2), unt(1, 3), unc(1, 2);
    for (int trial = 0; trial < 12; ++trial) {
        const double d2 = ud2(rng), n0 = un0(rng);
        const int lambda = ul(rng), n_r = unr(rng);
        const int n_t = unt(rng), n_c = unc(rng);
        const int order = lambda * n_r;
        // single eigenvalue d2 with multiplicity order == equal-eigenvalue event
        const double a = pep_exact({{d2, order}}, n0);
        const double b = ideal_pep(d2 * n_t * n_c, order, n0, n_t, n_c);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("partial-fraction expansion reconstructs the product form") {
    Rng rng(17);
    std::uniform_real_distribution<double> ud2(0.3, 5.0), un0(0.05, 1.0), uv(-3.0, 3.0);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<PepMode> modes;
        std::uniform_int_distribution<int> um(1, 4), uw(1, 3);
        const int w = uw(rng);
        for (int k = 0; k < w; ++k) modes.push_back({ud2(rng), um(rng)});
        const double n0 = un0(rng);
        const auto ex = pep_expand(modes, n0);
        for (int pt = 0; pt < 100; ++pt) {
            const std::complex<double> z(0.0, uv(rng)); // purely imaginary test points
            std::complex<double> rec = 0.0;
            double scale = 0.0; // cancellation scale of the summation
            for (const auto& pole : ex.poles)
                for (int i = 1; i <= pole.mult; ++i) {
                    const auto term = pole.coef[i - 1] / std::pow(z - pole.root, i);
                    rec += term;
                    scale += std::abs(term);
                }
            const auto ref = phi_product(modes, n0, z);
            CHECK(std::abs(rec - ref) <= 1e-8 * std::abs(ref) + 1e-12 * scale);
        }
    }
}

TEST_CASE("exact PEP matches a Monte Carlo of the decision variable") {
    Rng rng(23);
    const int draws = 400'000;
    struct Cfg {
        std::vector<std::pair<double, int>> dl; // (delta2, lambda)
        int n_r;
    };
    const std::vector<Cfg> cfgs = {
        {{{2.0, 1}}, 1},
        {{{2.0, 2}, {0.5, 1}}, 1},
        {{{1.0, 1}, {3.0, 1}}, 2},
    };
    for (const auto& c : cfgs) {
        for (double n0 : {0.25, 0.6}) {
            std::vector<PepMode> modes;
            for (const auto& [d2, l] : c.dl) modes.push_back({d2, l * c.n_r});
            const double exact = pep_exact(modes, n0);
            const double mc = pep_mc(c.dl, c.n_r, n0, draws, rng);
            const double se = std::sqrt(exact * (1.0 - exact) / draws);
            CHECK(std::abs(mc - exact) <= 3.5 * se + 1e-12);
        }
    }
}

TEST_CASE("near-coincident eigenmodes stay accurate despite pole clustering") {
    // distances a relative 1e-4 apart are not merged, so the partial-fraction
    // coefficients cancel heavily; the probability must still match MC
    Rng rng(71);
    const int draws = 2'000'000;
    std::vector<std::pair<double, int>> dl = {{1.7, 3}, {1.70017, 2}, {1.7063, 2}};
    std::vector<PepMode> modes;
    for (const auto& [d2, l] : dl) modes.push_back({d2, l});
    const double n0 = 0.12;
    const double exact = pep_exact(modes, n0);
    CHECK(exact > 0.0);
    const double mc = pep_mc(dl, 1, n0, draws, rng);
    const double se = std::sqrt(exact * (1.0 - exact) / draws);
    CHECK(std::abs(mc - exact) <= 4.0 * se + 1e-12);
}

TEST_CASE("log-log slope of the exact PEP approaches the diversity order") {
    const std::vector<PepMode> modes = {{1.5, 2}, {0.7, 1}};
    const int order = 3;
    const double n0 = 1e-4;
    const double p1 = pep_exact(modes, n0), p2 = pep_exact(modes, n0 / 10.0);
    const double slope = std::log10(p1 / p2);
    CHECK(slope == doctest::Approx(order).epsilon(0.02));
}

TEST_CASE("worked precoding gains") {
    CHECK(spreading_gain_db(2, 3) == doctest::Approx(0.26).epsilon(0.02));
    CHECK(spreading_gain_db(2, 5) == doctest::Approx(0.09).epsilon(0.06));
    CHECK(spreading_gain_db(2, 11) == doctest::Approx(0.02).epsilon(0.25));
    CHECK(spreading_gain_db(2, 4) == doctest::Approx(0.0));
    CHECK(spreading_gain_db(4, 6) == doctest::Approx(0.26).epsilon(0.02));
    // 16-QAM weight-5 example: distances (3A,3A,3A,A,A)
    const std::vector<double> d2 = {9, 9, 9, 1, 1}; // A^2 cancels in the ratio
    const double ideal = gain_ideal(d2, 2, 1);
    const double block = gain_block({27, 2}, 2, 1); // most even count split (3,2)
    CHECK(10.0 * std::log10(ideal / block) == doctest::Approx(2.95).epsilon(0.002));
}

TEST_CASE("eigen spectrum: identity precoder is diagonal") {
    const auto p = build_precoder(3, 1, 1);
    const auto eig = eigen_spectrum(p, {0.5, 2.0, 1.25});
    REQUIRE(eig.size() == 3u);
    double lo = *std::min_element(eig.begin(), eig.end());
    CHECK(lo == doctest::Approx(0.5));
    double sum = 0.0;
    for (double v : eig) sum += v;
    CHECK(sum == doctest::Approx(3.75));
}

TEST_CASE("full spreading with equal loads equalizes the eigenvalues") {
    const auto p = build_precoder(2, 1, 2); // s' = n_t = 2
    const std::vector<double> gamma2(4, 1.0);
    const auto eig = eigen_spectrum(p, gamma2);
    REQUIRE(eig.size() == 2u);
    CHECK(eig[0] == doctest::Approx(eig[1]).epsilon(1e-9));
    CHECK(eig[0] + eig[1] == doctest::Approx(4.0).epsilon(1e-9)); // trace identity
}

TEST_CASE("trace identity holds for random loads") {
    Rng rng(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (const auto& [nt, ns, s] : std::vector<std::array<int, 3>>{
             {2, 1, 2}, {4, 2, 2}, {4, 1, 4}, {2, 2, 2}}) {
        const auto p = build_precoder(nt, ns, s);
        std::vector<double> gamma2(p.dim());
        double total = 0.0;
        for (auto& v : gamma2) {
            v = u(rng);
            total += v;
        }
        const auto eig = eigen_spectrum(p, gamma2);
        double sum = 0.0;
        for (double v : eig) sum += v;
        CHECK(sum == doctest::Approx(total).epsilon(1e-9));
    }
}

TEST_CASE("gain ordering: ideal >= full-spread precoded >= block allocation") {
    Rng rng(37);
    const auto qam = bsk_distances(Constellation::make(4));
    std::uniform_int_distribution<size_t> pick(0, qam.all.size() - 1);
    std::uniform_int_distribution<int> uw(4, 9);
    const auto p = build_precoder(2, 1, 2); // full spreading, n_t = 2, n_c = 1
    for (int trial = 0; trial < 20; ++trial) {
        const int w = uw(rng);
        std::vector<double> d2(w);
        for (auto& v : d2) {
            const double d = qam.all[pick(rng)];
            v = d * d;
        }
        const double ideal = gain_ideal(d2, 2, 1);
        // distribute the w bits as evenly as possible over the 4 precoder rows
        std::vector<double> rows(4, 0.0);
        for (int k = 0; k < w; ++k) rows[k % 4] += d2[k];
        const auto eig = eigen_spectrum(p, rows);
        std::vector<PepMode> modes;
        for (double v : eig)
            if (v > 1e-12) modes.push_back({v, 1});
        const double prec = gain_precoded(modes);
        // unprecoded: same bits over the 2 antennas
        std::vector<double> ant(2, 0.0);
        for (int k = 0; k < w; ++k) ant[k % 2] += d2[k];
        const double block = gain_block(ant, 2, 1);
        CHECK(ideal >= prec - 1e-9);
        CHECK(prec >= block - 1e-9);
    }
}

TEST_CASE("golden-style unequal-norm gain") {
    // equal loads: reduces to the plain sum split
    const double g = gain_golden({1.0, 1.0, 1.0, 1.0});
    CHECK(g == doctest::Approx(2.0));
    // unequal loads weigh the two mixes differently
    const double h = gain_golden({4.0, 0.0, 0.0, 0.0});
    CHECK(h == doctest::Approx(std::sqrt(4.0 * 0.277 * 4.0 * 0.723)));
}

TEST_CASE("union bound with a single-weight spectrum") {
    WeightSpectrum ws;
    ws.entries[5] = 3;
    ws.d_hmin = 5;
    ws.w_max = 5;
    const double p5 = 1e-3;
    const double fer = union_bound_fer(ws, [&](int w) { return w == 5 ? p5 : 0.0; });
    CHECK(fer == doctest::Approx(3e-3));
}

TEST_CASE("asymptote bookkeeping") {
    const auto a = pep_asymptotic({{2.0, 2}, {8.0, 2}});
    CHECK(a.order == 4);
    CHECK(a.gain == doctest::Approx(4.0));
}
