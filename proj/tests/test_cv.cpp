// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rydsim/constants.hpp"
#include "rydsim/cv.hpp"

using namespace ryd;

TEST_CASE("free rotor") {
    RingParticleParams p;
    const auto c = continuum_spectrum(p, 0, 9);
    CHECK(c.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    for (int m = 1; m <= 4; ++m) {
        CHECK(c.values[2 * m - 1] == doctest::Approx(double(m * m)));
        CHECK(c.values[2 * m] == doctest::Approx(double(m * m)));
    }
}

TEST_CASE("harmonic regime gap") {
    RingParticleParams p;
    p.omega = 1e4;
    const auto c = continuum_spectrum(p);
    CHECK((c.values[1] - c.values[0]) == doctest::Approx(std::sqrt(2.0 * 1e4)).epsilon(0.01));
    CHECK(c.tail < 1e-12);
}

TEST_CASE("theta periodicity and m -> -m symmetry") {
    RingParticleParams p;
    p.omega = 5;
    p.lambda = 3;
    p.kappa = 2;
    p.theta = 0.4;
    const auto a = continuum_spectrum(p, 80);
    p.theta += 2 * phys::pi;
    const auto b = continuum_spectrum(p, 80);
    for (int k = 0; k < 15; ++k) CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-12));

    p.theta = 0;
    const SpinLength s = SpinLength::from_J(6);
    const auto H = spin_rotor_hamiltonian(p, s).to_dense();
    const long d = H.rows();
    double worst = 0;
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) worst = std::max(worst, std::abs(H(i, j) - H(d - 1 - i, d - 1 - j)));
    CHECK(worst < 1e-13);
}

TEST_CASE("J = 1/2 closed form") {
    RingParticleParams p;
    p.chi = 0.7;
    p.omega = 1.9;
    const auto e = spin_spectrum(p, SpinLength::from_J(0.5));
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(0.7 / 4 - 1.9 / std::sqrt(3.0)));
    CHECK(e[1] == doctest::Approx(0.7 / 4 + 1.9 / std::sqrt(3.0)));
}

TEST_CASE("mapped raising operator") {
    for (double J : {2.0, 7.5, 20.0}) {
        const SpinLength s = SpinLength::from_J(J);
        const auto jz = cv_momentum(s).to_dense(), e = cv_raising(s).to_dense();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e.adjoint() * e);
        // integer J: norm 1; half-integer J overshoots through the m = -1/2 element
        const double bound = std::sqrt(1.0 + (s.twoJ % 2 ? 0.25 / (J * (J + 1)) : 0.0));
        CHECK(std::sqrt(es.eigenvalues().maxCoeff()) == doctest::Approx(bound).epsilon(1e-13));
        const Eigen::MatrixXcd c = jz * e - e * jz - e;
        CHECK(c.cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("spin levels approach the continuum as J grows") {
    RingParticleParams p;
    p.omega = 50;
    const auto ref = continuum_spectrum(p);
    const int nb = bound_state_count(p);
    REQUIRE(nb > 3);
    double last = 1e300;
    for (double J : {10.0, 20.0, 40.0}) {
        const auto e = spin_spectrum(p, SpinLength::from_J(J));
        double dev = 0;
        for (int k = 0; k < 10; ++k) dev = std::max(dev, std::abs(e[k] - ref.values[k]));
        CHECK(dev < last);
        last = dev;
    }
}

TEST_CASE("lambda scan at kappa = 4 tracks the continuum") {
    const SpinLength s = SpinLength::from_J(50);
    for (double lam : {0.0, 10.0, 40.0}) {
        RingParticleParams p;
        p.omega = 10;
        p.lambda = lam;
        p.kappa = 4;
        const auto ref = continuum_spectrum(p);
        const auto e = spin_spectrum(p, s);
        const double spacing = ref.values[1] - ref.values[0] + 1e-300;
        for (int k = 0; k < 3; ++k) CHECK(std::abs(e[k] - ref.values[k]) < 0.05 * std::max(spacing, 1.0));
    }
}

TEST_CASE("explicit cutoff too small") {
    RingParticleParams p;
    p.omega = 400;
    CHECK_THROWS_AS(continuum_spectrum(p, 3), Error);
}

TEST_CASE("bound states") {
    RingParticleParams p;
    CHECK(bound_state_count(p) == 0);
    p.omega = 1e4;
    // semiclassical: separatrix action over 2 pi
    CHECK(bound_state_count(p) == doctest::Approx(4 / phys::pi * std::sqrt(2e4)).epsilon(0.01));
}
