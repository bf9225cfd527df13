// SPDX-License-Identifier: Apache-2.0
#include "rydsim/qft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rydsim/constants.hpp"
#include "rydsim/cv.hpp"

namespace ryd {

// ------------------------------------------------------------ parameter maps

double SGParams::beta2() const { return 2.0 * kappa * kappa * std::sqrt(chi / Vnn); }
double SGParams::ellM0() const { return kappa * std::sqrt(2.0 * lambda / Vnn); }
double SGParams::xi_sg() const {
    const double b = beta2();
    return b / (8.0 * phys::pi - b);
}

SGParams SGParams::from_qft(double beta2, double ellM0, double chi, int kappa) {
    if (!(beta2 > 0) || !(chi > 0) || kappa < 1) throw Error(ErrorCode::InvalidArgument, "from_qft");
    SGParams p;
    p.chi = chi;
    p.kappa = kappa;
    const double r = 2.0 * kappa * kappa / beta2;  // sqrt(V / chi)
    p.Vnn = chi * r * r;
    const double s = ellM0 / kappa;
    p.lambda = 0.5 * p.Vnn * s * s;
    return p;
}

double dispersion_nn(double chi, double lambda, double Vnn, double q) {
    if (lambda < 0) throw Error(ErrorCode::InvalidArgument, "lambda' must be >= 0");
    return std::sqrt(2.0 * chi * (lambda + Vnn - Vnn * std::cos(q)));
}

// ------------------------------------------------------------ Ewald

namespace {

// int_1^inf e^{-z y} / y^2 dy
double expint_E2(double z) {
    if (z == 0.0) return 1.0;
    const double E1 = -std::expint(-z);
    return std::exp(-z) - z * E1;
}

// int_1^inf y^{1/2} e^{-z y} dy = Gamma(3/2, z) / z^{3/2}
double expint_Em12(double z) {
    const double sz = std::sqrt(z);
    const double g = 0.5 * std::sqrt(phys::pi) * std::erfc(sz) + sz * std::exp(-z);
    return g / (z * sz);
}

}  // namespace

double ewald_epsilon(double q, const EwaldOptions& o) {
    const double t0 = o.t0;
    double recip = 0.0;
    // reciprocal shells G = 2 pi g, both signs
    int g = 0;
    for (;; ++g) {
        if (g > o.max_terms) throw Error(ErrorCode::NonConvergent, "reciprocal sum did not converge");
        double term = 0.0;
        for (int sgn : {1, -1}) {
            if (g == 0 && sgn < 0) continue;
            const double k = q + sgn * 2.0 * phys::pi * g;
            term += t0 * expint_E2(k * k / (4.0 * t0));
        }
        recip += term;
        if (g > 0 && std::abs(term) < o.tol) break;
    }
    double real = 0.0;
    for (int j = 1;; ++j) {
        if (j > o.max_terms) throw Error(ErrorCode::NonConvergent, "lattice sum did not converge");
        if (o.real_terms_cap > 0 && j > o.real_terms_cap) break;
        const double term =
            2.0 * std::pow(t0, 1.5) / std::sqrt(phys::pi) * expint_Em12(t0 * j * j) * std::cos(q * j);
        real += term;
        if (std::abs(term) < o.tol) break;
    }
    return recip + real - 2.0 * std::pow(t0, 1.5) / (3.0 * std::sqrt(phys::pi));
}

BruteForceSum ewald_direct(double q, long jmax) {
    // small terms first
    double s = 0.0, c = 0.0;
    for (long j = jmax; j >= 1; --j) {
        const double jd = static_cast<double>(j);
        const double y = std::cos(q * jd) / (jd * jd * jd) - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return {s, 1.0 / (2.0 * static_cast<double>(jmax) * static_cast<double>(jmax))};
}

EwaldFit fit_ewald_constants(double qmin, double qmax, int points, const EwaldOptions& opt) {
    const double e0 = ewald_epsilon(0.0, opt);
    std::vector<std::vector<double>> cols(3);
    std::vector<double> y;
    for (int i = 0; i < points; ++i) {
        const double q = qmin + (qmax - qmin) * i / (points - 1);
        cols[0].push_back(q * q);
        cols[1].push_back(q * q * std::log(q));
        cols[2].push_back(q * q * q * q);
        y.push_back(ewald_epsilon(q, opt) - e0);
    }
    const auto c = linfit(cols, y);
    EwaldFit f;
    f.c2 = c[0];
    f.c2p = c[1];
    double ss = 0;
    for (int i = 0; i < points; ++i) {
        const double r = y[i] - (c[0] * cols[0][i] + c[1] * cols[1][i] + c[2] * cols[2][i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / points);
    return f;
}

double vertex_expectation(double chi, double lambda, double Vnn, int N) {
    if (!(lambda > 0)) throw Error(ErrorCode::Gapless, "free theory is gapless for lambda' <= 0");
    double s = 0.0;
    if (N > 0) {
        for (int k = 0; k < N; ++k) s += 1.0 / dispersion_nn(chi, lambda, Vnn, 2.0 * phys::pi * k / N);
        return std::exp(-chi / (2.0 * N) * s);
    }
    // Brillouin-zone average by a fine midpoint rule; integrand is smooth and periodic
    const int M = 4096;
    for (int k = 0; k < M; ++k) s += 1.0 / dispersion_nn(chi, lambda, Vnn, 2.0 * phys::pi * (k + 0.5) / M);
    return std::exp(-chi / 2.0 * s / M);
}

SGMasses sg_exact_masses(double beta2, double M0) {
    if (!(beta2 > 0) || beta2 >= 8.0 * phys::pi)
        throw Error(ErrorCode::OutsideMassivePhase, "beta^2 must lie in (0, 8 pi)");
    SGMasses m;
    const double xi = beta2 / (8.0 * phys::pi - beta2);
    m.xi = xi;
    const double lg = std::log(2.0) + std::lgamma(xi / 2) - 0.5 * std::log(phys::pi) - std::lgamma((1 + xi) / 2);
    const double inner = std::log(M0 * M0) + std::log1p(xi) + std::lgamma(1 / (1 + xi)) - std::log(16.0 * xi) -
                         std::lgamma(xi / (1 + xi));
    m.soliton = std::exp(lg + 0.5 * (1 + xi) * inner);
    m.threshold = std::abs(beta2 - 4.0 * phys::pi) < 1e-12;
    if (beta2 < 4.0 * phys::pi || m.threshold) {
        const long nb = static_cast<long>(std::floor(1.0 / xi + 1e-12));
        for (long k = 1; k <= nb; ++k) m.breathers.push_back(2.0 * m.soliton * std::sin(k * phys::pi * xi / 2.0));
    }
    return m;
}

// ------------------------------------------------------------ chains

SparseOperator chain_site(const ChainModel& m) {
    const ManifoldBasis basis = single_spin_basis(m.J);
    const double JJ = m.J.casimir();
    EdgeSiteTerms t;
    t.chi = m.p.chi;
    const cplx tilt = std::exp(cplx(0, m.alpha));
    if (m.p.omega != 0.0) t.pondero.push_back({1, 0, -m.p.omega / (2.0 * std::sqrt(JJ)) * tilt});
    if (m.p.lambda != 0.0) {
        // with kappa = 1 the lambda' drive is the linear one and carries the tilt
        const cplx ph = std::exp(cplx(0, m.p.theta)) * (m.p.kappa == 1 ? tilt : cplx(1.0));
        t.pondero.push_back({m.p.kappa, 0, -m.p.lambda / (2.0 * std::pow(JJ, 0.5 * m.p.kappa)) * ph});
    }
    return edge_single_site(basis, t);
}

SparseOperator build_chain(const ChainModel& m, std::size_t budget) {
    checked_dimension(m.J.n(), m.N, budget);
    const ManifoldBasis basis = single_spin_basis(m.J);
    std::vector<PairGeometry> pairs;
    const double V = m.p.Vnn / m.J.casimir();
    for (int i = 0; i + 1 < m.N; ++i) pairs.push_back({i, i + 1, 1.0, 0.5 * phys::pi, 0.0, V});
    if (m.boundary == Boundary::PeriodicRing && m.N > 2) pairs.push_back({m.N - 1, 0, 1.0, 0.5 * phys::pi, 0.0, V});
    return build_Ha_pairs(m.N, basis, chain_site(m), pairs, m.ising);
}

double chain_gap(const ChainModel& m, std::size_t budget, int* matvecs) {
    const SparseOperator H = build_chain(m, budget);
    LanczosOptions o;
    o.want_vectors = false;
    o.degeneracy_passes = 0;
    const EigenResult r = ground_state(H, 3, o);
    if (matvecs) *matvecs = r.matvecs;
    return lanczos_gap(r);
}

std::vector<GapRow> sg_gap_benchmark(int N, const std::vector<SpinLength>& Js, double chi, double Vnn, double lambda,
                                     int kappa, bool include_ising, std::size_t budget) {
    std::vector<GapRow> out;
    for (const auto& J : Js) {
        ChainModel m;
        m.N = N;
        m.J = J;
        m.p.chi = chi;
        m.p.Vnn = Vnn;
        m.p.lambda = lambda;
        m.p.kappa = kappa;
        m.ising = include_ising;
        m.boundary = Boundary::PeriodicRing;
        GapRow row;
        row.J = J.J();
        row.gap = chain_gap(m, budget, &row.matvecs);
        row.oracle = std::sqrt(2.0 * chi * lambda);
        out.push_back(row);
    }
    return out;
}

namespace {

SparseOperator site_average(const SparseOperator& op, int N) {
    ManyBodyBuilder b(N, static_cast<int>(op.dim()));
    for (int i = 0; i < N; ++i) b.add_local(i, op, 1.0 / N);
    return b.build(true);
}

CVec lowest_state(const SparseOperator& H) {
    LanczosOptions o;
    o.degeneracy_passes = 0;
    const EigenResult r = ground_state(H, 1, o);
    return r.vectors.at(0);
}

}  // namespace

QuenchResult quench_gap(const ChainModel& post, double alpha, const std::vector<double>& times, std::size_t budget,
                        bool with_ed_gap) {
    ChainModel pre = post;
    pre.alpha = post.alpha + alpha;
    const SparseOperator H0 = build_chain(pre, budget);
    const SparseOperator H1 = build_chain(post, budget);
    const CVec psi = lowest_state(H0);
    const SparseOperator jy = build_jy(single_spin_basis(post.J), Species::a);
    Propagation prop;
    prop.times = times;
    prop.observables.push_back({"Jy", site_average(jy, post.N)});
    const TimeSeries ts = evolve(H1, psi, prop);
    QuenchResult r;
    r.t = ts.times;
    for (const auto& v : ts.values[0]) r.jy.push_back(v.real());
    const double scale = std::max(1.0, post.J.J());
    r.fit = fit_damped_sine(r.t, r.jy, 1e-9 * scale);
    if (with_ed_gap) {
        LanczosOptions o;
        o.want_vectors = false;
        o.degeneracy_passes = 0;
        r.ed_gap = lanczos_gap(ground_state(H1, 3, o));
    }
    return r;
}

CapacitorResult schwinger_capacitor(const CapacitorSpec& s, const std::vector<double>& times, std::size_t budget) {
    CapacitorResult out;
    const auto sp = map_schwinger(s.chi, s.Vnn, s.omega, std::max(s.lambda_from, s.lambda_to), s.kappa);
    out.warnings = sp.warnings;
    ChainModel m;
    m.N = s.N;
    m.J = s.J;
    m.p.chi = s.chi;
    m.p.Vnn = s.Vnn;
    m.p.omega = s.omega;
    m.p.kappa = s.kappa;
    m.boundary = Boundary::Open;
    ChainModel pre = m, post = m;
    pre.p.lambda = s.lambda_from;
    pre.p.theta = s.theta_from;
    post.p.lambda = s.lambda_to;
    post.p.theta = s.theta_to;
    const SparseOperator H0 = build_chain(pre, budget);
    const SparseOperator H1 = build_chain(post, budget);
    const CVec psi = lowest_state(H0);
    const SparseOperator jy = build_jy(single_spin_basis(s.J), Species::a);
    Propagation prop;
    prop.times = times;
    for (int i = 0; i < s.N; ++i) prop.observables.push_back({"Jy" + std::to_string(i), embed(jy, i, s.N)});
    const TimeSeries ts = evolve(H1, psi, prop);
    out.t = ts.times;
    const int centre = s.N / 2;
    for (int i = 0; i < s.N; ++i) out.site_label.push_back(i - centre);
    for (std::size_t k = 0; k < ts.times.size(); ++k) {
        std::vector<double> row(s.N), rho(s.N);
        for (int i = 0; i < s.N; ++i) {
            const cplx v = ts.values[i][k];
            out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
            row[i] = v.real();
        }
        for (int i = 0; i < s.N; ++i) rho[i] = row[i] - (i > 0 ? row[i - 1] : 0.0);
        out.jy.push_back(row);
        out.rho.push_back(rho);
    }
    return out;
}

SchwingerParams map_schwinger(double chi, double Vnn, double omega, double lambda, int kappa) {
    SchwingerParams p;
    const double k2 = static_cast<double>(kappa) * kappa;
    const double eL = std::sqrt(omega / chi * std::pow(2.0 * phys::pi, 3) / (k2 * k2));
    const double mL = lambda / chi * std::pow(2.0 * phys::pi, 2) / (k2 * std::exp(phys::euler_gamma) * phys::pi);
    p.e_over_Lambda = eL / phys::pi;
    p.m_over_Lambda = mL / phys::pi;
    p.e_over_m = lambda > 0 ? eL / mL : std::numeric_limits<double>::infinity();
    auto warn = [&](bool bad, const char* what) {
        if (bad) p.warnings.push_back(what);
    };
    warn(!(chi < omega), "chi is not small compared to Omega'");
    warn(!(lambda < omega), "lambda' is not small compared to Omega'");
    warn(!(omega < Vnn), "Omega' is not small compared to V'_nn");
    warn(!(lambda < std::sqrt(chi * Vnn)), "lambda' is not small compared to sqrt(chi V'_nn)");
    return p;
}

SchwingerCouplings schwinger_couplings(double e_over_Lambda, double m_over_Lambda, double chi, int kappa) {
    const double k2 = static_cast<double>(kappa) * kappa;
    const double eL = e_over_Lambda * phys::pi, mL = m_over_Lambda * phys::pi;
    SchwingerCouplings c;
    c.Vnn = chi * k2 * k2 / std::pow(2.0 * phys::pi, 2);
    c.omega = chi * k2 * k2 * eL * eL / std::pow(2.0 * phys::pi, 3);
    c.lambda = chi * k2 * std::exp(phys::euler_gamma) * phys::pi * mL / std::pow(2.0 * phys::pi, 2);
    return c;
}

}  // namespace ryd
