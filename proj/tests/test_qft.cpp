// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "rydsim/constants.hpp"
#include "rydsim/cv.hpp"
#include "rydsim/qft.hpp"

using namespace ryd;

namespace {

double dense_gap(const SparseOperator& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.to_dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[1] - es.eigenvalues()[0];
}

}  // namespace

// ---------------------------------------------------------------- free theory

TEST_CASE("nearest-neighbour dispersion") {
    CHECK(dispersion_nn(1.0, 50.0, 10.0, 0.0) == doctest::Approx(10.0));
    CHECK(dispersion_nn(0.3, 2.0, 7.0, 0.0) == doctest::Approx(std::sqrt(2 * 0.3 * 2.0)));
    CHECK(dispersion_nn(0.3, 0.0, 7.0, phys::pi) == doctest::Approx(std::sqrt(4 * 0.3 * 7.0)));
    CHECK_THROWS_AS(dispersion_nn(1.0, -1.0, 1.0, 0.0), Error);
}

TEST_CASE("dispersion at q = 0 is the gap of the harmonic lattice") {
    // chi pi^2 + (k/2) phi^2 per site, -(V/2) phi_i phi_{i+1} on a 3-ring, truncated oscillators
    const double chi = 1.0, lam = 2.0, V = 3.0, k = lam + V;
    const int K = 16, d = K + 1;
    const double l2 = std::sqrt(2 * chi / k);
    std::vector<Triplet> xt, nt;
    for (int n = 0; n < K; ++n) {
        const double a = std::sqrt(n + 1.0) * std::sqrt(l2 / 2);
        xt.push_back({n + 1, n, a});
        xt.push_back({n, n + 1, a});
    }
    std::vector<cplx> level(d);
    for (int n = 0; n < d; ++n) level[n] = std::sqrt(2 * chi * k) * (n + 0.5);
    const auto x = SparseOperator::from_triplets(d, xt, true);
    ManyBodyBuilder mb(3, d);
    for (int i = 0; i < 3; ++i) {
        mb.add_local(i, SparseOperator::diagonal(level, true), 1.0);
        mb.add_pair(i, x, (i + 1) % 3, x, -V / 2);
    }
    LanczosOptions o;
    o.want_vectors = false;
    o.degeneracy_passes = 0;
    o.max_basis = 80;
    const auto g = ground_state(mb.build(true), 2, o);
    CHECK(lanczos_gap(g) == doctest::Approx(dispersion_nn(chi, lam, V, 0.0)).epsilon(1e-8));
}

TEST_CASE("beta^2 map") {
    SGParams p;
    p.chi = 2.0;
    p.Vnn = 9.0;
    p.lambda = 4.0;
    p.kappa = 2;
    const double b = p.beta2();
    CHECK(b == doctest::Approx(2 * 4 * std::sqrt(2.0 / 9.0)));
    p.chi *= 3.7;
    p.Vnn *= 3.7;
    CHECK(p.beta2() == doctest::Approx(b).epsilon(1e-15));
    const auto q = SGParams::from_qft(p.beta2(), p.ellM0(), p.chi, p.kappa);
    CHECK(q.Vnn == doctest::Approx(p.Vnn).epsilon(1e-12));
    CHECK(q.lambda == doctest::Approx(p.lambda).epsilon(1e-12));
}

// ---------------------------------------------------------------- Ewald

TEST_CASE("Ewald sum against slow partial sums") {
    const auto bf = ewald_direct(1.0, 1000000);
    CHECK(std::abs(ewald_epsilon(1.0) - bf.value) < 1e-8);
    CHECK(bf.tail_bound <= 0.5e-12 * 1.0001);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 2 * phys::pi - 0.05);
    for (int k = 0; k < 20; ++k) {
        const double q = u(rng);
        CHECK(std::abs(ewald_epsilon(q) - ewald_direct(q, 200000).value) < 1e-8);
    }
    CHECK(ewald_epsilon(0.0) == doctest::Approx(1.2020569031595942).epsilon(1e-13));
    CHECK(ewald_epsilon(0.8) == doctest::Approx(ewald_epsilon(2 * phys::pi - 0.8)).epsilon(1e-13));
}

TEST_CASE("Ewald small-q constants") {
    const auto f = fit_ewald_constants();
    // exact expansion: -3/4 q^2 + 1/2 q^2 log q
    CHECK(f.c2 == doctest::Approx(-0.75).epsilon(1e-4));
    CHECK(f.c2p == doctest::Approx(0.5).epsilon(1e-4));
    EwaldOptions one;
    one.real_terms_cap = 1;
    const auto g = fit_ewald_constants(0.01, 0.2, 40, one);
    CHECK(g.c2 == doctest::Approx(-0.739).epsilon(0.01));
}

// ---------------------------------------------------------------- vertex

TEST_CASE("vertex operator limits") {
    CHECK(vertex_expectation(1.0, 1e12, 10.0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    const double lam = 1e3;
    CHECK(vertex_expectation(1.0, lam, 10.0, 0) == doctest::Approx(std::exp(-0.5 * std::sqrt(1.0 / (2 * lam)))).epsilon(1e-3));
    const double v5 = vertex_expectation(1.0, 3.0, 10.0, 5), vinf = vertex_expectation(1.0, 3.0, 10.0, 0);
    CHECK(v5 != vinf);
    CHECK(std::abs(v5 - vinf) < 0.05);
    CHECK_THROWS_AS(vertex_expectation(1.0, 0.0, 10.0, 5), Error);
}

// ---------------------------------------------------------------- masses

TEST_CASE("exact sine-Gordon masses") {
    const double M0 = 1.3;
    const auto small = sg_exact_masses(1e-3, M0);
    CHECK(small.breathers.front() / M0 == doctest::Approx(1.0).epsilon(0.005));
    // the Gamma-function soliton mass goes as 8 M0 / beta^2
    CHECK(small.soliton * 1e-3 / M0 == doctest::Approx(8.0).epsilon(0.005));
    for (double b2 : {0.5, 3.0, 10.0}) {
        const auto m = sg_exact_masses(b2, M0);
        for (std::size_t k = 0; k < m.breathers.size(); ++k) {
            CHECK(m.breathers[k] < 2 * m.soliton);
            if (k) CHECK(m.breathers[k] > m.breathers[k - 1]);
        }
        CHECK_FALSE(m.threshold);
    }
    const auto t = sg_exact_masses(4 * phys::pi, M0);
    CHECK(t.threshold);
    CHECK(t.xi == doctest::Approx(1.0));
    REQUIRE(t.breathers.size() == 1);
    CHECK(t.breathers[0] == doctest::Approx(2 * t.soliton));
    CHECK(sg_exact_masses(20.0, M0).breathers.empty());
    CHECK_THROWS_AS(sg_exact_masses(8 * phys::pi, M0), Error);
    CHECK_THROWS_AS(sg_exact_masses(0.0, M0), Error);
}

// ---------------------------------------------------------------- chains

TEST_CASE("J = 1/2 chain gap matches dense diagonalisation") {
    ChainModel m;
    m.N = 6;
    m.J = SpinLength::from_J(0.5);
    m.p.lambda = 1.2;
    m.p.Vnn = 0.9;
    m.ising = true;
    const auto H = build_chain(m);
    CHECK(chain_gap(m) == doctest::Approx(dense_gap(H)).epsilon(1e-9));
    CHECK(H.hermiticity_defect() < 1e-14);
}

TEST_CASE("decoupled sites have the single-site gap") {
    ChainModel m;
    m.N = 3;
    m.J = SpinLength::from_J(3);
    m.p.lambda = 6.0;
    const auto e = spin_spectrum({1.0, 0.0, 6.0, 1, 0.0}, m.J);
    CHECK(chain_gap(m) == doctest::Approx(e[1] - e[0]).epsilon(1e-10));
}

TEST_CASE("gap benchmark overestimates the free gap and decreases with J") {
    const auto rows = sg_gap_benchmark(3, {SpinLength::from_J(2), SpinLength::from_J(3), SpinLength::from_J(4)}, 1.0,
                                       10.0, 50.0, 1, false);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].oracle == doctest::Approx(10.0));
        CHECK(rows[k].gap > rows[k].oracle);
        if (k) CHECK(rows[k].gap < rows[k - 1].gap);
    }
}

TEST_CASE("ED budget guard") {
    ChainModel m;
    m.N = 5;
    m.J = SpinLength::from_J(20);
    CHECK_THROWS_AS(build_chain(m), Error);
}

TEST_CASE("quench: flat at alpha = 0, linear response in alpha") {
    ChainModel m;
    m.N = 3;
    m.J = SpinLength::from_J(2);
    m.p.lambda = 10;
    m.p.Vnn = 10;
    std::vector<double> t;
    for (int k = 0; k <= 160; ++k) t.push_back(0.02 * k);
    const auto flat = quench_gap(m, 0.0, t);
    CHECK_FALSE(flat.fit.has_value());
    const auto a = quench_gap(m, phys::pi / 50, t), b = quench_gap(m, phys::pi / 25, t);
    REQUIRE(a.fit.has_value());
    REQUIRE(b.fit.has_value());
    CHECK(a.fit->omega == doctest::Approx(a.ed_gap).epsilon(0.05));
    CHECK(b.fit->omega == doctest::Approx(a.fit->omega).epsilon(0.01));
}

TEST_CASE("capacitor: real observables, Gauss bookkeeping, no quench") {
    CapacitorSpec s;
    s.N = 3;
    s.J = SpinLength::from_J(2);
    s.kappa = 2;
    s.Vnn = 2.0;
    s.omega = 1.0;
    s.lambda_from = 1.0;
    s.lambda_to = 0.5;
    s.theta_from = phys::pi / 2;
    std::vector<double> t;
    for (int k = 0; k <= 20; ++k) t.push_back(0.1 * k);
    const auto r = schwinger_capacitor(s, t);
    CHECK(r.max_imag < 1e-10);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double total = std::accumulate(r.rho[k].begin(), r.rho[k].end(), 0.0);
        CHECK(total == doctest::Approx(r.jy[k].back()).epsilon(1e-12));
    }
    s.theta_from = 0;
    s.lambda_to = s.lambda_from;
    const auto still = schwinger_capacitor(s, t);
    for (std::size_t k = 0; k < t.size(); ++k)
        for (std::size_t i = 0; i < still.jy[k].size(); ++i) CHECK(std::abs(still.jy[k][i] - still.jy[0][i]) < 1e-8);
}

TEST_CASE("Schwinger parameter map") {
    const double u = 2 * phys::pi * 1e3;
    const auto p = map_schwinger(50 * u, 790 * u, 200 * u, 50 * u, 5);
    CHECK(p.e_over_m == doctest::Approx(4.5).epsilon(0.05));
    CHECK(p.e_over_Lambda == doctest::Approx(0.4).epsilon(0.1));
    CHECK(p.m_over_Lambda == doctest::Approx(0.09).epsilon(0.1));
    CHECK(map_schwinger(50 * u, 790 * u, 200 * u, 1e12 * u, 5).e_over_m < 1e-3);
    // Lambda ell = pi pins V'_nn = chi kappa^4 / (2 pi)^2, about 2 pi x 791.6 kHz here
    const auto c = schwinger_couplings(p.e_over_Lambda, p.m_over_Lambda, 50 * u, 5);
    CHECK(c.Vnn == doctest::Approx(790 * u).epsilon(0.005));
    CHECK(c.omega == doctest::Approx(200 * u).epsilon(1e-12));
    CHECK(c.lambda == doctest::Approx(50 * u).epsilon(1e-12));
    const auto back = map_schwinger(50 * u, c.Vnn, c.omega, c.lambda, 5);
    CHECK(back.e_over_m == doctest::Approx(p.e_over_m).epsilon(1e-12));
    CHECK(back.e_over_Lambda == doctest::Approx(p.e_over_Lambda).epsilon(1e-12));
}
