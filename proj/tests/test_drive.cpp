// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "rydsim/constants.hpp"
#include "rydsim/drive.hpp"
#include "rydsim/fit.hpp"
#include "rydsim/manifold.hpp"

using namespace ryd;

TEST_CASE("two-axis twisting from kappa_a = 2") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(3));
    const double c = 0.37;
    const auto H = build_pondero(b, {{2, 0, cplx(0, c)}});
    const auto jp = build_jpm(b, Species::a, Ladder::plus), jm = build_jpm(b, Species::a, Ladder::minus);
    const auto want = (jp * jp).scaled(cplx(0, c)).plus(jm * jm, cplx(0, -c));
    CHECK((H - want).max_abs() < 1e-13);
}

TEST_CASE("kappa_a = 1 is the microwave a drive") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(2.5));
    const cplx lam(0.3, -0.8);
    MWDrive d;
    d.omega_a = lam;
    CHECK((build_pondero(b, {{1, 0, lam}}) - build_mw(b, d)).max_abs() < 1e-14);
}

TEST_CASE("kappa beyond 2J annihilates") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(1));
    CHECK(build_pondero(b, {{3, 0, 1.0}}).nnz() == 0);
    CHECK_THROWS_AS(build_pondero(b, {{0, 0, 1.0}}), Error);
}

TEST_CASE("pondero hermitian for complex couplings") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(4));
    const auto H = build_pondero(b, {{2, 0, cplx(0.3, 1.1)}, {1, -1, cplx(-0.2, 0.5)}, {3, 1, cplx(0.7, 0.0)}});
    CHECK(H.hermiticity_defect() < 1e-12);
}

TEST_CASE("algebraic elements") {
    const SpinLength s = SpinLength::from_J(3.5);
    for (int a = -s.twoJ; a < s.twoJ; a += 2)
        CHECK(algebraic_element(s, 1, 0, a, s.twoJ) == doctest::Approx(std::sqrt(s.casimir() - 0.25 * a * (a + 2))));
    for (int a = -s.twoJ; a + 4 <= s.twoJ; a += 2)
        CHECK(algebraic_element(s, 2, 0, a, 1) == doctest::Approx(algebraic_element(s, 2, 0, -a - 4, 1)));
    CHECK(algebraic_element(SpinLength::from_J(1), 2, 0, -2, 0) == doctest::Approx(2.0));
}

TEST_CASE("algebraic elements equal dense ladder powers for J <= 8") {
    for (int twoJ : {1, 2, 5, 8, 16}) {
        const SpinLength s{twoJ};
        const auto b = ManifoldBasis::full(s);
        const auto jap = build_jpm(b, Species::a, Ladder::plus).to_dense();
        const auto jbm = build_jpm(b, Species::b, Ladder::minus).to_dense();
        for (auto [ka, kb] : {std::pair{1, 0}, {2, 0}, {1, -1}, {2, -2}, {3, -1}}) {
            if (std::abs(ka) + std::abs(kb) > twoJ) continue;
            Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(b.size(), b.size());
            for (int k = 0; k < ka; ++k) P = jap * P;
            for (int k = 0; k < -kb; ++k) P = jbm * P;
            for (auto [key, M] : algebraic_elements(s, ka, kb)) {
                const long i = b.index2(key.first, key.second);
                const long j = b.index2(key.first + 2 * ka, key.second + 2 * kb);
                CHECK(std::abs(P(j, i) - M) < 1e-12 * (1 + M));
            }
        }
    }
}

namespace {

LGBeam beam(int dm, std::vector<double> amps, double alpha = 0.0) {
    LGBeam b;
    b.dm = dm;
    b.amps = std::move(amps);
    b.alpha = alpha;
    b.power = 0.05;
    return b;
}

}  // namespace

TEST_CASE("LG normalisation") {
    for (int dm : {0, 1, 2, 4})
        for (auto amps : {std::vector<double>{1.0}, flat_vortex_amplitudes(dm)})
            for (double z : {0.0, 3e-7}) CHECK(std::abs(mode_power_integral(beam(dm, amps), z) - 1.0) < 1e-8);
}

TEST_CASE("interference of two l = 1 beams") {
    const auto b = beam(1, {1.0});
    const auto r = beam_interference(b, b, 0.2 * b.waist, 40);
    CHECK(r.kappa == 2);
    CHECK(r.vortex_powers.front() == 2);
    for (const auto& u : r.Ukappa) {
        CHECK(std::abs(u.imag()) <= 1e-14 * std::abs(u));
        CHECK(u.real() > 0);
    }
    CHECK_THROWS_AS(beam_interference(b, [&] { auto c = b; c.waist *= 1.1; return c; }(), b.waist, 10), Error);
}

TEST_CASE("flat-vortex superposition removes the next radial power") {
    const auto flat = beam(1, flat_vortex_amplitudes(1));
    const auto r = beam_interference(flat, flat, 0.2 * flat.waist, 40);
    const double lead = r.vortex_coeffs[0] * std::pow(flat.waist, r.vortex_powers[0]);
    const double next = r.vortex_coeffs[1] * std::pow(flat.waist, r.vortex_powers[1]);
    CHECK(std::abs(next) < 1e-6 * std::abs(lead));
    const auto plain = beam_interference(beam(1, {1.0}), beam(1, {1.0}), 0.2 * flat.waist, 40);
    CHECK(std::abs(plain.vortex_coeffs[1] * std::pow(flat.waist, 4)) > 0.1 * std::abs(plain.vortex_coeffs[0] * std::pow(flat.waist, 2)));
    CHECK(flat_vortex_amplitudes(3)[1] / flat_vortex_amplitudes(3)[0] == doctest::Approx(-2.0 / 6.0));
}

TEST_CASE("oracle: identity, proportionality, n scaling") {
    const auto id = pondero_oracle_smalln(4, 0, 0, 0);
    for (double w : id.W) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    const auto r = pondero_oracle_smalln(5, 2, 0, 0);
    CHECK(r.max_rel_dev < 1e-6);
    CHECK(r.convergence < 1e-9);
    std::vector<double> ln, lr;
    for (int n = 4; n <= 10; ++n) {
        ln.push_back(std::log(n));
        lr.push_back(std::log(pondero_oracle_smalln(n, 2, 0, 0).ratio));
    }
    CHECK(polyfit(ln, lr, 1)[1] == doctest::Approx(2.0).epsilon(0.02));
    CHECK_THROWS_AS(pondero_oracle_smalln(11, 2, 0, 0), Error);
}

TEST_CASE("Thomson rate scaling") {
    CHECK(thomson_rate(0.0, 1300e-9, 650e-9) == 0.0);
    const double g1 = thomson_rate(1e-3, 1300e-9, 650e-9), g2 = thomson_rate(1e-3, 1300e-9, 1300e-9);
    CHECK(g2 == doctest::Approx(g1 / 4).epsilon(1e-14));
    CHECK(g1 == doctest::Approx(0.656).epsilon(0.01));
}

TEST_CASE("squeezing: flat profile and purity") {
    const SpinLength s = SpinLength::from_J(10);
    const auto flat = squeeze_extract(50.0, 0.0, [](double) { return 8.0; }, s);
    CHECK(std::abs(flat.chi) < 1e-12);
    CHECK(std::abs(flat.xi) < 1e-12);
    const auto sc = squeeze_extract(30.0, 1.0, [](double) { return 8.0; }, s);
    for (std::size_t i = 1; i < sc.purity.size(); ++i) CHECK(sc.purity[i - 1] < sc.purity[i]);
    CHECK_THROWS_AS(squeeze_extract(5.0, 1.0, [](double) { return 8.0; }, s), Error);
}

TEST_CASE("squeezing: cubic term can be tuned away") {
    const SpinLength s = SpinLength::from_J(10);
    auto rabi = [](double m) { return 20.0 * (1.0 - 0.05 * m); };
    const double d0 = squeeze_zero_cubic(12.0, 30.0, 1.0, rabi, s);
    const auto at = squeeze_extract(d0, 1.0, rabi, s);
    CHECK(std::abs(at.xi) < 1e-10 * std::abs(at.chi));
    CHECK_THROWS_AS(squeeze_zero_cubic(60.0, 90.0, 1.0, rabi, s), Error);
}
