#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "stbicm/precode.hpp"

using namespace stbicm;

TEST_CASE("inverse totient of small even orders") {
    CHECK(inverse_totient(1) == 1);
    CHECK(inverse_totient(2) == 3);
    CHECK(inverse_totient(4) == 5);
    CHECK(inverse_totient(8) == 15);
    CHECK(inverse_totient(16) == 17);
}

TEST_CASE("s = 1 yields the identity") {
    const auto p = build_precoder(3, 1, 1);
    CHECK((p.mat - CMat::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("valid constructions are row-orthonormal") {
    struct Cfg { int n_t, n_s, s; };
    for (const auto& c : {Cfg{2, 1, 2}, Cfg{2, 2, 2}, Cfg{4, 1, 2}, Cfg{4, 2, 2},
                          Cfg{4, 1, 4}, Cfg{4, 2, 4}, Cfg{4, 4, 4}, Cfg{3, 1, 3},
                          Cfg{2, 1, 1}, Cfg{1, 1, 1}}) {
        for (bool reorder : {false, true}) {
            const auto p = build_precoder(c.n_t, c.n_s, c.s, reorder);
            const auto chk = validate_precoder(p, 1e-10);
            INFO("n_t=", c.n_t, " n_s=", c.n_s, " s=", c.s, " reorder=", reorder);
            CHECK(chk.ok());
            CHECK(chk.max_row_norm_err < 1e-12);
            CHECK(chk.max_group_dot < 1e-12);
        }
    }
}

TEST_CASE("nucleotide structure: disjoint group supports with energy 1/s per use") {
    // each row spreads unit energy evenly over its s channel uses
    const auto p = build_precoder(4, 1, 2, false);
    const int dim = p.dim();
    for (int r = 0; r < dim; ++r) {
        for (int u = 0; u < p.s; ++u) {
            const double e = p.mat.row(r).segment(u * p.n_t, p.n_t).squaredNorm();
            CHECK(e == doctest::Approx(1.0 / p.s).epsilon(1e-12));
        }
    }
    // rows from different dispersion groups never share a column
    const int sp = p.s / p.n_s;
    const int group_rows = p.s * sp;
    for (int r = 0; r < dim; ++r)
        for (int q = 0; q < dim; ++q) {
            if (r / group_rows == q / group_rows) continue;
            for (int col = 0; col < dim; ++col)
                CHECK(std::abs(p.mat(r, col)) * std::abs(p.mat(q, col)) < 1e-15);
        }
}

TEST_CASE("row reordering is a row permutation of the grouped layout") {
    const auto a = build_precoder(4, 1, 2, false);
    const auto b = build_precoder(4, 1, 2, true);
    // every row of b appears exactly once in a
    const int dim = a.dim();
    std::vector<int> hits(dim, 0);
    for (int rb = 0; rb < dim; ++rb)
        for (int ra = 0; ra < dim; ++ra)
            if ((a.mat.row(ra) - b.mat.row(rb)).norm() < 1e-12) hits[ra]++;
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("invalid dimension combinations are rejected") {
    CHECK_THROWS_AS(build_precoder(2, 2, 3), config_error); // s not multiple of n_s
    CHECK_THROWS_AS(build_precoder(3, 1, 2), config_error); // n_t not multiple of s/n_s
    CHECK_THROWS_AS(build_precoder(0, 1, 1), config_error);
}

TEST_CASE("save/load round-trip") {
    const auto p = build_precoder(2, 1, 2);
    const char* path = "precoder_roundtrip.txt";
    save_precoder(p, path);
    const auto q = load_precoder(path);
    CHECK(q.n_t == p.n_t);
    CHECK(q.n_s == p.n_s);
    CHECK(q.s == p.s);
    CHECK((q.mat - p.mat).norm() < 1e-15);
    std::remove(path);
}
