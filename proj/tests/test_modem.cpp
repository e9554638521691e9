#include <doctest.h>

#include <cmath>
#include <set>

#include "stbicm/modem.hpp"

using namespace stbicm;

TEST_CASE("BPSK maps 0 to +1 and 1 to -1") {
    const auto c = Constellation::make(1);
    CHECK(c.points[0] == cplx(1.0, 0.0));
    CHECK(c.points[1] == cplx(-1.0, 0.0));
}

TEST_CASE("constellations have unit mean energy") {
    for (int m : {1, 2, 4, 6}) {
        const auto c = Constellation::make(m);
        double e = 0.0;
        for (const auto& p : c.points) e += std::norm(p);
        CHECK(e / c.order == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("labels are distinct points and map_bits round-trips") {
    for (int m : {1, 2, 4}) {
        const auto c = Constellation::make(m);
        std::set<std::pair<double, double>> seen;
        for (int label = 0; label < c.order; ++label)
            seen.insert({c.points[label].real(), c.points[label].imag()});
        CHECK(static_cast<int>(seen.size()) == c.order);
        std::vector<uint8_t> bits(m);
        for (int label = 0; label < c.order; ++label) {
            for (int k = 0; k < m; ++k) bits[k] = (label >> k) & 1;
            CHECK(c.label_of(bits) == label);
        }
    }
}

TEST_CASE("Gray labeling: nearest axis neighbors differ in one bit") {
    const auto c = Constellation::make(4);
    const double amp = std::sqrt(3.0 / (2.0 * 15.0));
    int adjacent_pairs = 0;
    for (int a = 0; a < c.order; ++a)
        for (int b = a + 1; b < c.order; ++b) {
            if (std::abs(c.points[a] - c.points[b]) < 2.0 * amp + 1e-9) {
                const int diff = a ^ b;
                CHECK((diff & (diff - 1)) == 0); // single-bit difference
                ++adjacent_pairs;
            }
        }
    CHECK(adjacent_pairs == 2 * 4 * 3); // 4x4 grid: 24 adjacent pairs
}

TEST_CASE("QPSK one-bit-flip distances all equal sqrt(2)") {
    const auto c = Constellation::make(2);
    const auto d = bsk_distances(c);
    CHECK(d.all.size() == 8);
    for (double v : d.all) CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("16-QAM one-bit-flip distances take the Gray values 2A and 6A") {
    const auto c = Constellation::make(4);
    const auto d = bsk_distances(c);
    const double amp = std::sqrt(3.0 / 30.0);
    int small = 0, large = 0;
    for (double v : d.all) {
        if (std::abs(v - 2 * amp) < 1e-9)
            ++small;
        else if (std::abs(v - 6 * amp) < 1e-9)
            ++large;
        else
            FAIL("unexpected distance ", v);
    }
    CHECK(small == 48);
    CHECK(large == 16);
}

TEST_CASE("odd m beyond BPSK is rejected") {
    CHECK_THROWS_AS(Constellation::make(3), config_error);
    CHECK_THROWS_AS(Constellation::make(0), config_error);
}
