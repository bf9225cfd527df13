// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "rydsim/constants.hpp"
#include "rydsim/gates.hpp"

using namespace ryd;

namespace {

const double T_swap = phys::pi / 2;  // V = 1

double maxdiff(const CVec& a, const CVec& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

cplx at(const CVec& v, int ni, int nj, int na, int nb) { return v[na * (ni + nj + 1) + nb]; }

}  // namespace

TEST_CASE("oracle: vacuum, single quantum, phases (-i)^n") {
    const auto v = ho_oracle(2, 0, T_swap, 1.0);
    CHECK(std::abs(std::abs(at(v, 2, 0, 0, 2)) - 1.0) < 1e-14);
    const auto one = ho_oracle(0, 1, T_swap, 1.0);
    CHECK(std::abs(at(one, 0, 1, 1, 0) - cplx(0, -1)) < 1e-14);
    for (int n = 0; n <= 3; ++n) {
        const auto w = ho_oracle(0, n, T_swap, 1.0);
        CHECK(std::abs(at(w, 0, n, n, 0) - std::pow(cplx(0, -1), n)) < 1e-13);
    }
    const auto none = ho_oracle(0, 0, 0.7, 1.0);
    CHECK(std::abs(none[0] - 1.0) < 1e-15);
}

TEST_CASE("oracle agrees with dense two-mode propagation") {
    for (int ni = 0; ni <= 2; ++ni)
        for (int nj = 0; nj <= 2; ++nj)
            for (double t : {0.3, T_swap, 2.1}) CHECK(maxdiff(ho_oracle(ni, nj, t, 1.0), ho_dense(ni, nj, t, 1.0, 4)) < 1e-10);
    CHECK_THROWS_AS(ho_dense(3, 2, 1.0, 1.0, 4), Error);
}

TEST_CASE("double swap gives (-1)^n") {
    for (int n = 0; n <= 3; ++n) {
        const auto w = ho_oracle(0, n, 2 * T_swap, 1.0);
        CHECK(std::abs(at(w, 0, n, 0, n) - std::pow(-1.0, n)) < 1e-13);
    }
}

TEST_CASE("transfer fidelity: vacuum, J = 50 table, J trend") {
    TransferSpec z;
    CHECK(transfer_fidelity(SpinLength::from_J(10), z, true).F == doctest::Approx(1.0).epsilon(1e-12));
    for (int ni = 0; ni <= 3; ++ni)
        for (int nj = 0; nj <= 3; ++nj) {
            TransferSpec s;
            s.n_i = ni;
            s.n_j = nj;
            const auto r = transfer_fidelity(SpinLength::from_J(50), s, true);
            CHECK(r.F >= 0.99);
            CHECK(r.F <= 1.0 + 1e-12);
        }
    TransferSpec s;
    s.n_i = 1;
    s.n_j = 1;
    double last = 1.0;
    for (double J : {20.0, 50.0, 100.0}) {
        const double err = 1.0 - transfer_fidelity(SpinLength::from_J(J), s, true).F;
        CHECK(err < last);
        last = err;
    }
}

TEST_CASE("transfer fidelity does not depend on the azimuth sign") {
    TransferSpec s;
    s.n_i = 2;
    s.n_j = 1;
    s.phi = 0.3;
    const double a = transfer_fidelity(SpinLength::from_J(8), s, true).F;
    s.phi = -0.3;
    CHECK(transfer_fidelity(SpinLength::from_J(8), s, true).F == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("retaining the pair block at large detuning changes little") {
    TransferSpec s;
    s.n_j = 1;
    const double bare = transfer_fidelity(SpinLength::from_J(10), s, false).F;
    s.keep_pair_terms = true;
    s.pair_detuning = 1e4;
    const double kept = transfer_fidelity(SpinLength::from_J(10), s, false).F;
    CHECK(std::abs(kept - bare) < 1e-3);
}

TEST_CASE("gate from identity is the phase map") {
    const int d = 2;
    const auto g = entangling_gate(SpinLength::from_J(50), d, Eigen::MatrixXcd::Identity(d * d, d * d), true);
    Eigen::MatrixXcd phase = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) phase(a * d + b, a * d + b) = std::pow(-1.0, b);
    CHECK(process_overlap(phase, g.process) > 0.99);
    // finite-J residue leaves a small second operator-Schmidt value
    CHECK(operator_schmidt_rank(g.process, d, 0.05) == 1);
}

TEST_CASE("controlled phase is entangling") {
    const int d = 2;
    Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(d * d, d * d);
    cz(3, 3) = -1;
    const auto g = entangling_gate(SpinLength::from_J(50), d, cz, true);
    CHECK(g.schmidt_rank == 2);
    CHECK(g.entangling);
    CHECK(g.leakage < 0.01);
}

TEST_CASE("d = 1 is a scalar") {
    const auto g = entangling_gate(SpinLength::from_J(5), 1, Eigen::MatrixXcd::Identity(1, 1), true);
    CHECK(g.process.rows() == 1);
    CHECK(std::abs(g.process(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(entangling_gate(SpinLength::from_J(5), 2, Eigen::MatrixXcd::Identity(3, 3), true), Error);
}
