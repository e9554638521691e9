#include "stbicm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace stbicm {
namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

// Taylor coefficients around z = p of (z - a)^(-mu), orders 0..n-1.
void mul_inverse_power_series(std::vector<double>& acc, double p, double a, int mu) {
    const int n = static_cast<int>(acc.size());
    std::vector<double> f(n);
    double c = std::pow(p - a, -mu); // order-0 coefficient
    for (int k = 0; k < n; ++k) {
        f[k] = c;
        c *= -static_cast<double>(mu + k) / ((k + 1) * (p - a));
    }
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) out[i + j] += acc[i] * f[j];
    acc.swap(out);
}

struct MergedMode {
    double delta2;
    int mult;
    double r_plus;
    double r_minus;
};

// P(X < 0) by contour integration of phi(z)/z along the vertical line through
// the real-axis saddle point between the leftmost pole cluster and zero.
// Immune to the coefficient cancellation that plagues the residue sum when
// pole clusters are close.
double pep_quadrature(const std::vector<MergedMode>& merged, double n0) {
    // log phi(t) on the real segment (max r_minus, 0) where every factor is
    // positive; objective G(t) = log phi(t) - log(-t) is convex there.
    auto log_phi_real = [&](double t) {
        double s = 0.0;
        for (const auto& m : merged)
            s -= m.mult * std::log(1.0 - (m.delta2 / (2.0 * n0)) * t * (1.0 + t));
        return s;
    };
    double lo = -1.0;
    for (const auto& m : merged) lo = std::min(lo, m.r_minus);
    lo *= 1.0 - 1e-9;
    lo += 1e-300;
    double hi = -1e-12;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    auto G = [&](double t) { return log_phi_real(t) - std::log(-t); };
    double g1 = G(x1), g2 = G(x2);
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, -a); ++it) {
        if (g1 < g2) {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - gr * (b - a);
            g1 = G(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + gr * (b - a);
            g2 = G(x2);
        }
    }
    const double c = 0.5 * (a + b);
    // curvature of G at the saddle sets the natural width of the integrand
    double gpp = 1.0 / (c * c);
    for (const auto& m : merged) {
        const double k = m.delta2 / (2.0 * n0);
        const double u = 1.0 - k * c * (1.0 + c);
        const double up = -k * (1.0 + 2.0 * c);
        const double upp = -2.0 * k;
        gpp -= m.mult * (upp * u - up * up) / (u * u);
    }
    const double sigma = 1.0 / std::sqrt(std::max(gpp, 1e-300));

    auto phi = [&](std::complex<double> z) {
        std::complex<double> s = 0.0;
        for (const auto& m : merged)
            s -= static_cast<double>(m.mult) *
                 std::log(1.0 - (m.delta2 / (2.0 * n0)) * z * (1.0 + z));
        return std::exp(s);
    };
    // P = -(sigma/pi) * int_0^{pi/2} Re[phi(c + i sigma tan h)/(c + i sigma tan h)] sec^2 h dh
    static const double gl_x[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                    0.9931285991850949};
    static const double gl_w[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                    0.0176140071391521};
    const double pi = std::acos(-1.0);
    const int panels = 64;
    const double width = 0.5 * pi / panels;
    double integral = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (int q = 0; q < 10; ++q)
            for (int sgn : {-1, 1}) {
                const double h = mid + sgn * 0.5 * width * gl_x[q];
                const double tn = std::tan(h);
                const std::complex<double> z(c, sigma * tn);
                const double sec2 = 1.0 + tn * tn;
                integral += 0.5 * width * gl_w[q] * sec2 * std::real(phi(z) / z);
            }
    }
    return std::clamp(-(sigma / pi) * integral, 0.0, 1.0);
}

std::vector<MergedMode> merge_modes(const std::vector<PepMode>& modes, double n0) {
    std::vector<PepMode> sorted;
    for (const auto& m : modes) {
        if (m.mult <= 0) continue;
        if (m.delta2 <= 0.0) throw config_error("pairwise distances must be positive");
        sorted.push_back(m);
    }
    if (sorted.empty()) throw config_error("no eigenmodes");
    std::sort(sorted.begin(), sorted.end(),
              [](const PepMode& a, const PepMode& b) { return a.delta2 < b.delta2; });
    std::vector<MergedMode> out;
    for (const auto& m : sorted) {
        if (!out.empty() && std::abs(m.delta2 - out.back().delta2) <=
                                1e-9 * std::max(m.delta2, out.back().delta2)) {
            out.back().mult += m.mult;
            continue;
        }
        out.push_back({m.delta2, m.mult, 0.0, 0.0});
    }
    for (auto& m : out) {
        const double root = std::sqrt(1.0 + 8.0 * n0 / m.delta2);
        m.r_plus = 0.5 * (-1.0 + root);
        m.r_minus = 0.5 * (-1.0 - root);
    }
    return out;
}

} // namespace

int singleton_diversity(double r_c, int n_t, int n_c, int n_r, int s, int d_hmin) {
    if (n_t < 1 || n_c < 1 || n_r < 1 || s < 1 || r_c <= 0.0 || r_c > 1.0)
        throw config_error("bad diversity-bound parameters");
    if ((n_t * n_c) % s != 0)
        throw config_error("spreading factor must divide n_t * n_c");
    const int blocks = n_t * n_c / s;
    const int singleton = s * n_r * (static_cast<int>(std::floor(blocks * (1.0 - r_c))) + 1);
    int d = std::min(singleton, n_t * n_c * n_r);
    if (d_hmin > 0) d = std::min(d, s * n_r * d_hmin);
    return d;
}

int optimal_spreading(double r_c, int n_t, int n_c) {
    const int n = n_t * n_c;
    if (n < 1 || r_c <= 0.0 || r_c > 1.0)
        throw config_error("bad spreading parameters");
    if (r_c <= 1.0 / n) return 1;
    for (int s = 1; s <= n; ++s)
        if (n % s == 0 && s >= r_c * n) return s;
    return n; // unreachable: s = n always qualifies
}

std::vector<double> eigen_spectrum(const Precoder& p, const std::vector<double>& gamma2) {
    const int dim = p.dim();
    if (static_cast<int>(gamma2.size()) != dim)
        throw config_error("gamma2 must have one entry per precoder row");
    const int sp = p.s / p.n_s;
    std::vector<double> eig;
    eig.reserve(static_cast<size_t>(p.n_s) * p.n_t);
    for (int t = 0; t < p.n_s; ++t) {
        CMat sigma = CMat::Zero(p.n_t, p.n_t);
        for (int l = 0; l < dim; ++l) {
            if (gamma2[l] == 0.0) continue;
            for (int i = 0; i < sp; ++i) {
                const auto sub = p.mat.row(l).segment((t * sp + i) * p.n_t, p.n_t);
                sigma += gamma2[l] * (sub.adjoint() * sub);
            }
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
        for (int u = 0; u < p.n_t; ++u)
            eig.push_back(std::max(0.0, es.eigenvalues()(u)));
    }
    return eig;
}

PepExpansion pep_expand(const std::vector<PepMode>& modes, double n0) {
    if (n0 <= 0.0) throw config_error("noise variance must be positive");
    const auto merged = merge_modes(modes, n0);

    // phi(z) = prod_v [ -c_v (z - r+_v)(z - r-_v) ]^(-m_v), c_v = delta2/(2 n0)
    double const_factor = 1.0;
    for (const auto& m : merged)
        const_factor *= std::pow(-m.delta2 / (2.0 * n0), -m.mult);

    PepExpansion ex;
    auto expand_at = [&](double p, int mp) {
        // Taylor series of (z-p)^mp * phi(z) around p, orders 0..mp-1.
        std::vector<double> acc(mp, 0.0);
        acc[0] = const_factor;
        for (const auto& m : merged) {
            if (m.r_plus != p) mul_inverse_power_series(acc, p, m.r_plus, m.mult);
            if (m.r_minus != p) mul_inverse_power_series(acc, p, m.r_minus, m.mult);
        }
        PepExpansion::Pole pole;
        pole.root = p;
        pole.mult = mp;
        pole.coef.resize(mp);
        // coefficient of (z-p)^-i is the Taylor coefficient of order mp - i
        for (int i = 1; i <= mp; ++i) pole.coef[i - 1] = acc[mp - i];
        ex.poles.push_back(std::move(pole));
    };
    for (const auto& m : merged) expand_at(m.r_plus, m.mult);
    for (const auto& m : merged) expand_at(m.r_minus, m.mult);

    // P(X < 0) = -sum of residues of phi(z)/z at the poles left of zero;
    // Res = sum_i coef[i-1] * (-1)^(i-1) / p^i from the 1/z expansion at p.
    double prob = 0.0, gross = 0.0;
    for (const auto& pole : ex.poles) {
        if (pole.root >= 0.0) continue;
        double res = 0.0, sign = 1.0, pw = pole.root;
        for (int i = 1; i <= pole.mult; ++i) {
            const double term = pole.coef[i - 1] * sign / pw;
            res += term;
            gross += std::abs(term);
            sign = -sign;
            pw *= pole.root;
        }
        prob -= res;
    }
    // When nearby pole clusters make the residue terms cancel almost
    // completely, the sum has no reliable digits; integrate instead.
    if (!(prob > 1e-7 * gross) || prob > 1.0)
        prob = pep_quadrature(merged, n0);
    ex.prob = std::clamp(prob, 0.0, 1.0);
    return ex;
}

double pep_exact(const std::vector<PepMode>& modes, double n0) {
    return pep_expand(modes, n0).prob;
}

double pep_exact_from_spectrum(const std::vector<double>& delta2, int n_r, double n0) {
    std::vector<PepMode> modes;
    for (double d2 : delta2)
        if (d2 > 1e-12) modes.push_back({d2, n_r});
    return pep_exact(modes, n0);
}

PepAsymptote pep_asymptotic(const std::vector<PepMode>& modes) {
    PepAsymptote a;
    double logsum = 0.0;
    for (const auto& m : modes) {
        if (m.mult <= 0 || m.delta2 <= 0.0) continue;
        a.order += m.mult;
        logsum += m.mult * std::log(m.delta2);
    }
    if (a.order == 0) throw config_error("no eigenmodes");
    a.gain = std::exp(logsum / a.order);
    return a;
}

double gain_ergodic(const std::vector<double>& d2) {
    if (d2.empty()) throw config_error("empty distance set");
    double logsum = 0.0;
    for (double v : d2) {
        if (v <= 0.0) throw config_error("distances must be positive");
        logsum += std::log(v);
    }
    return std::exp(logsum / static_cast<double>(d2.size()));
}

double gain_block(const std::vector<double>& gamma2, int n_t, int n_c) {
    if (static_cast<int>(gamma2.size()) != n_t * n_c)
        throw config_error("need one gamma2 per (antenna, block) pair");
    double logsum = 0.0;
    for (double v : gamma2) {
        if (v <= 0.0) return 0.0; // lost diversity branch: no finite full-order gain
        logsum += std::log(v);
    }
    return std::exp(logsum / static_cast<double>(n_t * n_c));
}

double gain_precoded(const std::vector<PepMode>& modes) {
    return pep_asymptotic(modes).gain;
}

double gain_ideal(const std::vector<double>& d2, int n_t, int n_c) {
    const double sum = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (sum <= 0.0) throw config_error("distances must be positive");
    return sum / static_cast<double>(n_t * n_c);
}

double gain_golden(const std::array<double, 4>& gamma2, double alpha1, double alpha2) {
    const double a = alpha1 * (gamma2[0] + gamma2[3]) + alpha2 * (gamma2[1] + gamma2[2]);
    const double b = alpha1 * (gamma2[1] + gamma2[2]) + alpha2 * (gamma2[0] + gamma2[3]);
    return std::sqrt(a * b);
}

double spreading_gain_db(int n_t, int w) {
    if (n_t < 1 || w < n_t) throw config_error("spreading gain needs w >= n_t");
    // most even partition of w into n_t parts
    const int base = w / n_t, rem = w % n_t;
    double logsum = 0.0;
    for (int l = 0; l < n_t; ++l)
        logsum += std::log(static_cast<double>(l < rem ? base + 1 : base));
    const double geo = std::exp(logsum / n_t);
    return 10.0 * std::log10((static_cast<double>(w) / n_t) / geo);
}

double ideal_pep(double sum_d2, int diversity_order, double n0, int n_t, int n_c) {
    if (sum_d2 <= 0.0 || diversity_order < 1)
        throw config_error("bad ideal-pep parameters");
    const double mu = 1.0 / std::sqrt(1.0 + 8.0 * n0 * n_t * n_c / sum_d2);
    const int L = diversity_order;
    double acc = 0.0;
    for (int k = 0; k < L; ++k)
        acc += binom(L - 1 + k, k) * std::pow(0.5 * (1.0 + mu), k);
    return std::pow(0.5 * (1.0 - mu), L) * acc;
}

double union_bound_fer(const WeightSpectrum& spectrum,
                       const std::function<double(int)>& pep_of_w) {
    double fer = 0.0;
    for (const auto& [w, a_w] : spectrum.entries)
        fer += static_cast<double>(a_w) * pep_of_w(w);
    return fer;
}

double expected_pep_ergodic(int w, const std::vector<double>& d2_set, int n_r,
                            double n0, int n_samples, Rng& rng) {
    if (w < 1 || d2_set.empty() || n_samples < 1)
        throw config_error("bad pep-expectation parameters");
    std::uniform_int_distribution<size_t> pick(0, d2_set.size() - 1);
    std::vector<PepMode> modes(w);
    double acc = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        for (int k = 0; k < w; ++k) modes[k] = {d2_set[pick(rng)], n_r};
        acc += pep_exact(modes, n0);
    }
    return acc / n_samples;
}

} // namespace stbicm
