#pragma once

#include <Eigen/Dense>
#include <string>

#include "stbicm/common.hpp"

namespace stbicm {

using CMat = Eigen::MatrixXcd;

// Smallest n whose Euler totient equals x (inverse totient); config_error if
// x has no preimage within the search bound.
int inverse_totient(int x);

struct Precoder {
    int n_t = 0;  // transmit antennas
    int n_s = 0;  // fading realizations spanned by one precoded vector
    int s = 0;    // spreading factor
    CMat mat;     // s*n_t x s*n_t, row-vector convention: x = z * mat

    int dim() const { return s * n_t; }
};

// Algebraic full-spread linear precoder over s*n_t dimensions built from
// cyclotomic rotations. s must be a multiple of n_s and s*n_t a multiple of
// (s/n_s)^2 * n_s (i.e. n_t divisible by s/n_s... see validation); s = 1
// yields the identity. If reorder_rows is set, rows are re-indexed so that
// consecutive precoder inputs cycle fastest over antennas, matching the
// channel interleaver's column layout.
Precoder build_precoder(int n_t, int n_s, int s, bool reorder_rows = true);

struct PrecoderCheck {
    bool unit_rows = true;        // every row has unit norm
    bool unit_frobenius = true;   // ||S||_F^2 == s * n_t
    bool group_orthogonal = true; // rows of one dispersion group are orthogonal
    double max_row_norm_err = 0.0;
    double max_group_dot = 0.0;
    bool ok() const { return unit_rows && unit_frobenius && group_orthogonal; }
};

// Structural validation of an energy-preserving spread precoder.
PrecoderCheck validate_precoder(const Precoder& p, double tol = 1e-9);

// Text format: header "n_t n_s s", then one "re im" pair per entry, row-major.
void save_precoder(const Precoder& p, const std::string& path);
Precoder load_precoder(const std::string& path);

} // namespace stbicm
