#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stbicm/common.hpp"
#include "stbicm/rng.hpp"

namespace stbicm {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::RowVectorXcd;

// n_c independent n_t x n_r realizations with unit-variance circularly
// symmetric complex Gaussian entries (row-vector convention: y = x * H + n).
std::vector<CMat> draw_channel(int n_t, int n_r, int n_c, Rng& rng);

// Block-diagonal extension for one precoded vector of dimension s*n_t that
// spans n_s consecutive fading realizations: diag(H_k, ..., H_{k+n_s-1})
// repeated s/n_s times each... the s*n_t inputs split into n_s time slots of
// (s/n_s)*n_t entries, slot t seeing realization blocks[first + t] on each of
// its s/n_s antenna vectors.
CMat build_extended_matrix(const std::vector<CMat>& blocks, int first, int n_s, int s);

// y = x * H_ext + noise, total noise variance 2*n0 per complex entry
// (n0 per real dimension).
CVec transmit(const CVec& x, const CMat& h_ext, double n0, Rng& rng);

// Eb/N0 (dB) -> n0 under unit average symbol energy per antenna, m bits per
// symbol, code rate r_c: n0 = n_r / (2 * m * r_c * 10^(db/10)).
double ebn0_to_n0(double ebn0_db, int m, double r_c, int n_r);

// Additive circularly symmetric noise with per-component real variance n0.
CVec draw_noise(int dim, double n0, Rng& rng);

} // namespace stbicm
