// SPDX-License-Identifier: Apache-2.0
#include "rydsim/drive.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rydsim/constants.hpp"
#include "rydsim/fit.hpp"

namespace ryd {

// ------------------------------------------------------------ algebraic couplings

namespace {

// Product of ladder factors for k steps (k < 0: lowering) from doubled m. Zero when the chain leaves [-J, J].
double ladder_chain(int twoJ, int two_m, int k) {
    double v = 1.0;
    int m = two_m;
    const int step = k >= 0 ? 2 : -2;
    for (int s = 0; s < std::abs(k); ++s) {
        const int next = m + step;
        if (next > twoJ || next < -twoJ) return 0.0;
        v *= step > 0 ? ladder_plus(twoJ, m) : ladder_plus(twoJ, next);
        m = next;
    }
    return v;
}

}  // namespace

double algebraic_element(SpinLength s, int ka, int kb, int two_ma, int two_mb) {
    return ladder_chain(s.twoJ, two_ma, ka) * ladder_chain(s.twoJ, two_mb, kb);
}

std::map<std::pair<int, int>, double> algebraic_elements(SpinLength s, int ka, int kb) {
    if (std::abs(ka) + std::abs(kb) > s.twoJ)
        throw Error(ErrorCode::InvalidArgument, "|kappa_a| + |kappa_b| exceeds 2J");
    std::map<std::pair<int, int>, double> out;
    for (int a = -s.twoJ; a <= s.twoJ; a += 2)
        for (int b = -s.twoJ; b <= s.twoJ; b += 2) {
            const int ta = a + 2 * ka, tb = b + 2 * kb;
            if (std::abs(ta) > s.twoJ || std::abs(tb) > s.twoJ) continue;
            out[{a, b}] = algebraic_element(s, ka, kb, a, b);
        }
    return out;
}

SparseOperator build_pondero(const ManifoldBasis& basis, const std::vector<PonderoTerm>& terms) {
    std::vector<Triplet> t;
    const SpinLength s = basis.spin();
    for (const auto& term : terms) {
        if (term.kappa_a == 0 && term.kappa_b == 0)
            throw Error(ErrorCode::InvalidArgument, "pondero term needs a nonzero kappa");
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const int a = basis.two_ma(i), b = basis.two_mb(i);
            const long j = basis.index2(a + 2 * term.kappa_a, b + 2 * term.kappa_b);
            if (j < 0) continue;
            const double m = algebraic_element(s, term.kappa_a, term.kappa_b, a, b);
            if (m == 0.0) continue;
            t.push_back({j, static_cast<std::int64_t>(i), term.lambda * m});
            t.push_back({static_cast<std::int64_t>(i), j, std::conj(term.lambda) * m});
        }
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), true);
}

// ------------------------------------------------------------ quadrature

namespace {

struct Rule {
    std::vector<double> x, w;
};

// Golub-Welsch on a symmetric tridiagonal Jacobi matrix.
Rule golub_welsch(const std::vector<double>& diag, const std::vector<double>& off, double mu0) {
    const Eigen::Index n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) T(i, i) = diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = off[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Rule r;
    for (Eigen::Index i = 0; i < n; ++i) {
        r.x.push_back(es.eigenvalues()(i));
        r.w.push_back(mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    return r;
}

Rule gauss_legendre(int n) {
    std::vector<double> d(n, 0.0), o(n > 0 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) o[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(d, o, 2.0);
}

Rule gauss_laguerre(int n) {
    std::vector<double> d(n), o(n > 0 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) d[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) o[k - 1] = k;
    Rule r = golub_welsch(d, o, 1.0);
    // far nodes carry tiny weights that the eigenvectors get only to absolute precision;
    // polish nodes by Newton and use w = x / ((n+1) L_{n+1}(x))^2
    auto lag = [n](double x, double& ln, double& ln1) {
        double l0 = 1.0, l1 = 1.0 - x;
        for (int j = 1; j < n; ++j) {
            const double l2 = ((2.0 * j + 1.0 - x) * l1 - j * l0) / (j + 1.0);
            l0 = l1;
            l1 = l2;
        }
        ln = l1;
        ln1 = ((2.0 * n + 1.0 - x) * l1 - n * l0) / (n + 1.0);
        return n * (l1 - l0) / x;  // L_n'
    };
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        double x = r.x[i], ln = 0, ln1 = 0;
        for (int it = 0; it < 4; ++it) {
            const double dl = lag(x, ln, ln1);
            x -= ln / dl;
        }
        lag(x, ln, ln1);
        r.x[i] = x;
        r.w[i] = x / std::pow((n + 1.0) * ln1, 2);
    }
    return r;
}

double gen_laguerre(int k, double alpha, double x) {
    if (k == 0) return 1.0;
    double l0 = 1.0, l1 = 1.0 + alpha - x;
    for (int j = 1; j < k; ++j) {
        const double l2 = ((2.0 * j + 1.0 + alpha - x) * l1 - (j + alpha) * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

// ------------------------------------------------------------ LG beams

cplx lg_mode(int p, int dm, double rho, double /*phi*/, double z, double wavelength, double w0) {
    const int l = std::abs(dm);
    const double zR = phys::pi * w0 * w0 / wavelength;
    const double w = w0 * std::sqrt(1.0 + z * z / (zR * zR));
    const double C = std::sqrt(2.0 * factorial(p) / factorial(p + l));
    const double x = 2.0 * rho * rho / (w * w);
    const double k = 2.0 * phys::pi / wavelength;
    const double amp = C * (w0 / w) * std::pow(std::sqrt(2.0) * rho / w, l) * gen_laguerre(p, l, x) *
                       std::exp(-rho * rho / (w * w));
    const double ph = k * rho * rho * z / (2.0 * (z * z + zR * zR)) - (2.0 * p + l + 1.0) * std::atan(z / zR);
    return amp * std::exp(cplx(0, ph));
}

// Radial profile only; the azimuthal factor is carried by the interference term.
cplx beam_field(const LGBeam& b, double rho, double phi, double z) {
    cplx s = 0.0;
    for (std::size_t p = 0; p < b.amps.size(); ++p)
        s += b.amps[p] * lg_mode(static_cast<int>(p), b.dm, rho, phi, z, b.wavelength, b.waist);
    return s;
}

std::vector<double> flat_vortex_amplitudes(int dm) {
    const double l = std::abs(dm);
    // a1/a0 cancels the x^{l/2+1} term of a0 u_0 + a1 u_1
    const double r = -std::sqrt(l + 1.0) / (l + 3.0);
    const double a0 = 1.0 / std::sqrt(1.0 + r * r);
    return {a0, r * a0};
}

double mode_power_integral(const LGBeam& b, double z) {
    const double zR = phys::pi * b.waist * b.waist / b.wavelength;
    const double w = b.waist * std::sqrt(1.0 + z * z / (zR * zR));
    // x = 2 rho^2 / w^2, dA = (pi w^2 / 2) dx; integrand is polynomial times e^{-x}
    const int order = static_cast<int>(b.amps.size()) + std::abs(b.dm) + 8;
    const Rule r = gauss_laguerre(order);
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const double rho = w * std::sqrt(r.x[i] / 2.0);
        s += r.w[i] * std::exp(r.x[i]) * std::norm(beam_field(b, rho, 0.0, z));
    }
    return s * (phys::pi * w * w / 2.0) / (phys::pi * b.waist * b.waist);
}

InterferenceResult beam_interference(const LGBeam& b1, const LGBeam& b2, double rho_max, int points, double z,
                                     int fit_terms) {
    if (std::abs(b1.waist - b2.waist) > 1e-12 * b1.waist)
        throw Error(ErrorCode::MismatchedWaist, "beams must share the waist");
    if (points < fit_terms + 1) throw Error(ErrorCode::InvalidArgument, "too few grid points");
    InterferenceResult r;
    r.kappa = b1.dm + b2.dm;
    const double P = b1.power + b2.power;
    const double lam = 0.5 * (b1.wavelength + b2.wavelength);
    r.U0 = phys::e * phys::e * P / (16.0 * std::pow(phys::pi, 3) * phys::me * phys::eps0 * std::pow(phys::c, 3)) *
           (lam * lam / (b1.waist * b1.waist));
    const cplx ph = std::exp(cplx(0, b1.alpha - b2.alpha));
    for (int i = 0; i < points; ++i) {
        const double rho = rho_max * (i + 1) / points;
        const cplx u1 = beam_field(b1, rho, 0.0, z), u2 = beam_field(b2, rho, 0.0, z);
        r.rho.push_back(rho);
        r.Uc.push_back(r.U0 * (std::norm(u1) + std::norm(u2)) / 2.0);
        r.Ukappa.push_back(r.U0 * ph * u1 * std::conj(u2) / 4.0);
    }
    // vortex expansion in (rho / w0)^2 of U_kappa / rho^|kappa| (real part carries the profile at z = 0)
    const int k = std::abs(r.kappa);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.rho.size(); ++i) {
        const double s = r.rho[i] / b1.waist;
        x.push_back(s * s);
        y.push_back(std::abs(r.Ukappa[i]) / std::pow(s, k));
    }
    const auto c = polyfit(x, y, fit_terms - 1);
    for (int t = 0; t < fit_terms; ++t) {
        const int pw = k + 2 * t;
        r.vortex_powers.push_back(pw);
        r.vortex_coeffs.push_back(c[t] / std::pow(b1.waist, pw));
    }
    return r;
}

// ------------------------------------------------------------ small-n oracle

namespace {

// Y_lm(theta, phi = 0), Condon-Shortley phase.
double ylm0(int l, int m, double x) {
    const int am = std::abs(m);
    if (am > l) return 0.0;
    // P_am^am then upward in l
    double pmm = 1.0;
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int i = 1; i <= am; ++i) pmm *= -(2.0 * i - 1.0) * sx;
    double plm = pmm;
    if (l > am) {
        double p1 = x * (2.0 * am + 1.0) * pmm;
        double p0 = pmm;
        for (int ll = am + 2; ll <= l; ++ll) {
            const double p2 = ((2.0 * ll - 1.0) * x * p1 - (ll + am - 1.0) * p0) / (ll - am);
            p0 = p1;
            p1 = p2;
        }
        plm = p1;
    }
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * phys::pi) * factorial(l - am) / factorial(l + am));
    double y = norm * plm;
    if (m < 0 && (am % 2)) y = -y;
    return y;
}

// r^2 R_n l1 R_n l2 r^k integrated over r (atomic units).
double radial_integral(int n, int l1, int l2, int k, const Rule& lag) {
    auto N = [n](int l) { return std::sqrt(std::pow(2.0 / n, 3) * factorial(n - l - 1) / (2.0 * n * factorial(n + l))); };
    const double s = n / 2.0;  // r = s u, e^{-2r/n} = e^{-u}
    double acc = 0.0;
    for (std::size_t i = 0; i < lag.x.size(); ++i) {
        const double u = lag.x[i];
        const double r = s * u;
        const double f = std::pow(u, l1 + l2) * gen_laguerre(n - l1 - 1, 2 * l1 + 1, u) *
                         gen_laguerre(n - l2 - 1, 2 * l2 + 1, u) * std::pow(r, 2 + k);
        acc += lag.w[i] * f;
    }
    return acc * s * N(l1) * N(l2);
}

// sin^k theta Y_l1m1 Y_l2m2 over cos theta, times 2 pi from the azimuth.
double angular_integral(int l1, int m1, int l2, int m2, int k, const Rule& leg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < leg.x.size(); ++i) {
        const double x = leg.x[i];
        acc += leg.w[i] * ylm0(l1, m1, x) * ylm0(l2, m2, x) * std::pow(std::max(0.0, 1.0 - x * x), 0.5 * k);
    }
    return 2.0 * phys::pi * acc;
}

double oracle_W(int n, const CGTable& cg, int two_ma, int two_mb, int ka, int kb, int k, const Rule& lag,
                const Rule& leg) {
    const int two_ta = two_ma + 2 * ka, two_tb = two_mb + 2 * kb;
    const int ml = (two_ma + two_mb) / 2, mt = (two_ta + two_tb) / 2;
    double acc = 0.0;
    for (int l1 = std::abs(mt); l1 < n; ++l1) {
        const double c1 = cg.coeff(l1, two_ta, two_tb);
        if (c1 == 0.0) continue;
        for (int l2 = std::abs(ml); l2 < n; ++l2) {
            const double c2 = cg.coeff(l2, two_ma, two_mb);
            if (c2 == 0.0) continue;
            acc += c1 * c2 * radial_integral(n, l1, l2, k, lag) * angular_integral(l1, mt, l2, ml, k, leg);
        }
    }
    return acc;
}

}  // namespace

OracleReport pondero_oracle_smalln(int n, int ka, int kb, int eta, int two_mb_in) {
    if (n < 1 || n > 10) throw Error(ErrorCode::InvalidArgument, "oracle supports 1 <= n <= 10");
    if (eta < 0) throw Error(ErrorCode::InvalidArgument, "eta must be >= 0");
    const SpinLength s = SpinLength::from_n(n);
    const int two_mb = two_mb_in == (1 << 20) ? s.twoJ : two_mb_in;
    const int kappa = ka + kb;
    const int k = std::abs(kappa) + 2 * eta;
    const CGTable cg = cg_transform(s);
    OracleReport rep;
    rep.n = n;
    rep.kappa_a = ka;
    rep.kappa_b = kb;
    rep.eta = eta;
    const int base_r = n + k + 4, base_t = n + k + 4;
    const Rule lag1 = gauss_laguerre(base_r), leg1 = gauss_legendre(base_t);
    const Rule lag2 = gauss_laguerre(2 * base_r), leg2 = gauss_legendre(2 * base_t);
    std::vector<double> ratios;
    for (int a = -s.twoJ; a <= s.twoJ; a += 2) {
        if (std::abs(a + 2 * ka) > s.twoJ || std::abs(two_mb + 2 * kb) > s.twoJ) continue;
        const double M = (ka == 0 && kb == 0) ? 1.0 : algebraic_element(s, ka, kb, a, two_mb);
        if (M == 0.0) continue;
        const double W1 = oracle_W(n, cg, a, two_mb, ka, kb, k, lag1, leg1);
        const double W2 = oracle_W(n, cg, a, two_mb, ka, kb, k, lag2, leg2);
        rep.convergence = std::max(rep.convergence, std::abs(W2 - W1) / std::max(std::abs(W2), 1e-300));
        rep.two_ma.push_back(a);
        rep.W.push_back(std::abs(W2));
        rep.M.push_back(M);
        ratios.push_back(std::abs(W2) / M);
    }
    if (ratios.empty()) throw Error(ErrorCode::InvalidArgument, "no state pairs for this kappa");
    if (rep.convergence > 1e-9)
        throw Error(ErrorCode::QuadratureNonConvergence,
                    "oracle changed by " + std::to_string(rep.convergence) + " on doubling the grid");
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    rep.ratio = mean;
    for (double r : ratios) rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(r - mean) / mean);
    return rep;
}

// ------------------------------------------------------------ Thomson rate

double thomson_rate(double power, double wavelength, double waist) {
    const double I = 2.0 * power / (phys::pi * waist * waist);
    const double re = phys::e * phys::e / (4.0 * phys::pi * phys::eps0 * phys::me * phys::c * phys::c);
    const double sigma = 8.0 * phys::pi / 3.0 * re * re;
    const double omega = 2.0 * phys::pi * phys::c / wavelength;
    return I * sigma / (phys::hbar * omega);
}

// ------------------------------------------------------------ squeezing

SqueezeScan squeeze_extract(double delta0, double dw, const std::function<double(double)>& rabi, SpinLength s,
                            double window) {
    const double J = s.J();
    const double win = window < 0 ? 0.5 * J : window;
    SqueezeScan out;
    std::vector<double> xf, yf;
    for (int a = -s.twoJ; a <= s.twoJ; a += 2) {
        const double m = 0.5 * a;
        const double D = delta0 + dw * m;
        if (D <= 0.0)
            throw Error(ErrorCode::ResonanceCrossed, "detuning of level m_a = " + std::to_string(m) + " is not positive");
        const double W = rabi(m);
        const double root = std::sqrt(D * D + W * W);
        const double E = 0.5 * (-D + root);
        out.ma.push_back(m);
        out.shift.push_back(E);
        out.purity.push_back(0.5 * (1.0 + D / root));
        if (std::abs(m) <= win + 1e-12) {
            xf.push_back(m);
            yf.push_back(E);
        }
    }
    const int deg = std::min<int>(3, static_cast<int>(xf.size()) - 1);
    if (deg < 2) return out;
    const auto c = polyfit(xf, yf, deg);
    out.chi = c[2];
    out.xi = deg >= 3 ? c[3] : 0.0;
    return out;
}

double squeeze_zero_cubic(double lo, double hi, double dw, const std::function<double(double)>& rabi, SpinLength s,
                          double window) {
    auto f = [&](double d) { return squeeze_extract(d, dw, rabi, s, window).xi; };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw Error(ErrorCode::FitFailure, "cubic coefficient does not change sign in bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::abs(hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ryd
