#include "stbicm/precode.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

namespace stbicm {

int inverse_totient(int x) {
    if (x < 1) throw config_error("inverse totient argument must be positive");
    if (x == 1) return 1;
    for (int n = 2; n <= 16 * x + 16; ++n) {
        int phi = n, r = n;
        for (int p = 2; p * p <= r; ++p) {
            if (r % p) continue;
            phi -= phi / p;
            while (r % p == 0) r /= p;
        }
        if (r > 1) phi -= phi / r;
        if (phi == x) return n;
    }
    throw config_error("no integer with the requested totient");
}

Precoder build_precoder(int n_t, int n_s, int s, bool reorder_rows) {
    if (n_t < 1 || n_s < 1 || s < 1)
        throw config_error("precoder dimensions must be positive");
    if (s % n_s != 0)
        throw config_error("spreading factor must be a multiple of n_s");
    const int sp = s / n_s; // antennas-per-group spreading component
    if (n_t % sp != 0)
        throw config_error("n_t must be a multiple of s / n_s");
    const int ntp = s * sp; // dimension of one dispersion group
    const int dim = s * n_t;
    const double theta1 = ntp > 1 ? 1.0 / inverse_totient(2 * ntp) : 0.0;
    const double theta2 = sp > 1 ? 1.0 / inverse_totient(2 * sp) : 0.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(ntp));
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Precoder p;
    p.n_t = n_t;
    p.n_s = n_s;
    p.s = s;
    p.mat = CMat::Zero(dim, dim);
    for (int l2 = 0; l2 < n_t / sp; ++l2) {
        for (int l1 = 0; l1 < ntp; ++l1) {
            // Group-major rows build each dispersion group contiguously; the
            // reordered layout cycles rows fastest over groups so consecutive
            // precoder inputs hit different antennas.
            const int row = reorder_rows ? l1 * (n_t / sp) + l2 : l2 * ntp + l1;
            for (int t = 0; t < n_s; ++t)
                for (int i = 0; i < sp; ++i)
                    for (int v = 0; v < sp; ++v) {
                        const int col = v + l2 * sp + i * n_t + t * sp * n_t;
                        const double phase =
                            l1 * (theta1 + static_cast<double>(v + i * sp + t * sp * sp) / ntp) +
                            i * (theta2 + static_cast<double>(v) / sp);
                        p.mat(row, col) = scale * std::polar(1.0, two_pi * phase);
                    }
        }
    }
    return p;
}

PrecoderCheck validate_precoder(const Precoder& p, double tol) {
    PrecoderCheck c;
    const int dim = p.dim();
    if (p.mat.rows() != dim || p.mat.cols() != dim)
        throw config_error("precoder matrix has wrong shape");
    // Dispersion groups occupy disjoint column supports, so row-orthonormality
    // of the whole matrix captures per-group unitarity as well.
    const CMat gram = p.mat * p.mat.adjoint();
    double frob2 = 0.0;
    for (int r = 0; r < dim; ++r) {
        c.max_row_norm_err = std::max(c.max_row_norm_err, std::abs(gram(r, r).real() - 1.0));
        frob2 += gram(r, r).real();
        for (int q = 0; q < dim; ++q)
            if (q != r) c.max_group_dot = std::max(c.max_group_dot, std::abs(gram(r, q)));
    }
    c.unit_rows = c.max_row_norm_err <= tol;
    c.group_orthogonal = c.max_group_dot <= tol;
    c.unit_frobenius = std::abs(frob2 - dim) <= tol * dim;
    return c;
}

void save_precoder(const Precoder& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw config_error("cannot write " + path);
    f.precision(17);
    f << p.n_t << ' ' << p.n_s << ' ' << p.s << '\n';
    const int dim = p.dim();
    for (int r = 0; r < dim; ++r)
        for (int cidx = 0; cidx < dim; ++cidx)
            f << p.mat(r, cidx).real() << ' ' << p.mat(r, cidx).imag() << '\n';
}

Precoder load_precoder(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot read " + path);
    Precoder p;
    if (!(f >> p.n_t >> p.n_s >> p.s))
        throw config_error("bad precoder header in " + path);
    const int dim = p.dim();
    if (dim < 1) throw config_error("bad precoder dimensions in " + path);
    p.mat.resize(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int cidx = 0; cidx < dim; ++cidx) {
            double re, im;
            if (!(f >> re >> im))
                throw config_error("truncated precoder file " + path);
            p.mat(r, cidx) = {re, im};
        }
    return p;
}

} // namespace stbicm
