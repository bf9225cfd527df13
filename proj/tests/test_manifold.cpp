// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "rydsim/constants.hpp"
#include "rydsim/manifold.hpp"

using namespace ryd;

namespace {

std::vector<double> eig(const SparseOperator& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.to_dense());
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("static Stark-Zeeman diagonal") {
    const SpinLength s = SpinLength::from_n(5);
    const auto b = ManifoldBasis::full(s);
    const auto f = FieldConfig::make(5, 0.3 * inglis_teller_field(5), 12.0);
    const auto H = build_static(b, f);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(H.at(i, i).real() == doctest::Approx(-f.omega_a() * b.ma(i) + f.omega_b() * b.mb(i)));
    CHECK(H.nnz() <= b.size());
}

TEST_CASE("B = 0 gives the rhombus: level m_l has n - |m_l| states") {
    const int n = 6;
    const auto b = ManifoldBasis::full(SpinLength::from_n(n));
    const auto f = FieldConfig::make(n, 0.2 * inglis_teller_field(n), 0.0);
    const auto H = build_static(b, f);
    std::map<long, int> deg;
    for (std::size_t i = 0; i < b.size(); ++i) deg[std::lround(H.at(i, i).real() / f.omega_S())]++;
    for (int ml = -(n - 1); ml <= n - 1; ++ml) CHECK(deg[ml] == n - std::abs(ml));
}

TEST_CASE("circular state at zero electric field sits at 2 J omega_Z") {
    const SpinLength s = SpinLength::from_n(7);
    const auto b = ManifoldBasis::full(s);
    const auto f = FieldConfig::make(7, 0.0, 3.0);
    const auto H = build_static(b, f);
    const long c = b.index2(s.twoJ, s.twoJ);
    CHECK(H.at(c, c).real() == doctest::Approx(2.0 * s.J() * f.omega_Z()).epsilon(1e-14));
}

TEST_CASE("Inglis-Teller guard") {
    const auto b = ManifoldBasis::full(SpinLength::from_n(4));
    CHECK_THROWS_AS(build_static(b, FieldConfig::make(4, 1.01 * inglis_teller_field(4), 0.0)), Error);
}

TEST_CASE("microwave drive") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(1));
    MWDrive d;
    d.delta_a = 0.7;
    d.delta_b = -0.2;
    const auto H = build_mw(b, d);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(H.at(i, i).real() == doctest::Approx(-0.7 * b.ma(i) + 0.2 * b.mb(i)));
    CHECK(H.nnz() == 8);  // m_a = m_b = 0 entry vanishes

    const auto b2 = ManifoldBasis::full(SpinLength::from_J(0.5));
    MWDrive r;
    r.omega_a = 1.3;
    auto ev = eig(build_mw(b2, r));
    CHECK(ev[0] == doctest::Approx(-1.3));
    CHECK(ev[1] == doctest::Approx(-1.3));
    CHECK(ev[2] == doctest::Approx(1.3));
    CHECK(ev[3] == doctest::Approx(1.3));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    MWDrive z{g(rng), g(rng), {g(rng), g(rng)}, {g(rng), g(rng)}};
    CHECK(build_mw(ManifoldBasis::full(SpinLength::from_J(8)), z).hermiticity_defect() < 1e-12);
}

TEST_CASE("quantum defects: empty set, m_l symmetry, trace") {
    const int n = 5;
    const auto b = ManifoldBasis::full(SpinLength::from_n(n));
    const auto cg = cg_transform(b.spin());
    const auto f = FieldConfig::make(n, 0.4 * inglis_teller_field(n), 2.0);
    CHECK((build_qd(b, f, DefectModel::none(), cg) - build_static(b, f)).max_abs() == 0.0);

    const auto P = build_defect_projector(b, n, DefectModel::from_shifts({-1.0}), cg);
    CHECK(P.to_dense().trace().real() == doctest::Approx(-1.0).epsilon(1e-13));

    const auto Q = build_defect_projector(b, n, DefectModel::rb_defaults(), cg);
    double off = 0;
    for (const auto& t : Q.triplets())
        if (b.two_ma(t.row) + b.two_mb(t.row) != b.two_ma(t.col) + b.two_mb(t.col)) off = std::max(off, std::abs(t.val));
    CHECK(off < 1e-12);
    const auto lz = build_jz(b, Species::a) + build_jz(b, Species::b);
    CHECK(commutator(build_qd(b, f, DefectModel::rb_defaults(), cg), lz).max_abs() < 1e-12 * Q.max_abs());
}

TEST_CASE("vertical-ground coupling") {
    const auto b = ManifoldBasis::vertical(SpinLength::from_J(2), 1);
    CHECK(build_vg(b, {}).max_abs() == 0.0);
    const auto H = build_vg(b, {{0, cplx(0.4, 0.3)}});
    CHECK(H.nnz() == 2);
    const auto ev = eig(H);
    CHECK(ev.front() == doctest::Approx(-0.25));
    CHECK(ev.back() == doctest::Approx(0.25));
    std::map<int, cplx> m;
    for (int a = -2; a <= 4; a += 2) m[a] = cplx(0.1 * a, 1.0 - 0.05 * a * a);
    CHECK(build_vg(b, m).hermiticity_defect() < 1e-12);
}

TEST_CASE("sweep: no coupling leaves the state alone") {
    const auto b = ManifoldBasis::full(SpinLength::from_n(3));
    const auto f = FieldConfig::make(3, 0.0, 0.0);
    const auto p = SweepProtocol::standard(1.0, 5.0, 0.0);
    CVec psi(b.size(), 0.0);
    const long i = b.index2(0, 2);
    psi[i] = 1.0;
    const auto r = arp_sweep(b, f, DefectModel::none(), p, psi, {0});
    CHECK(std::norm(r.final_state[i]) == doctest::Approx(1.0).epsilon(1e-13));
}

namespace {

// dense midpoint propagation, Richardson-extrapolated in the step count
CVec dense_reference(const SweepHamiltonian& sh, const SweepProtocol& p, const CVec& psi0, int steps) {
    auto run = [&](int n) {
        Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(psi0.data(), psi0.size());
        const double dt = p.T / n;
        for (int k = 0; k < n; ++k) v = expm_hermitian(sh.at(p, (k + 0.5) * dt).to_dense(), dt) * v;
        return v;
    };
    const Eigen::VectorXcd a = run(steps), c = run(2 * steps);
    const Eigen::VectorXcd e = (4.0 * c - a) / 3.0;
    return {e.data(), e.data() + e.size()};
}

}  // namespace

TEST_CASE("two-level sweep matches dense propagation") {
    const auto b = ManifoldBasis::full(SpinLength::from_J(0.5));
    const auto f = FieldConfig::make(2, 0.0, 0.0);
    const double O = 2 * phys::pi * 3.0;
    const auto p = SweepProtocol::standard(1.0, -O, O);
    CVec psi(b.size(), 0.0);
    psi[b.index2(-1, -1)] = 1.0;
    SweepOptions o;
    o.tol = 1e-13;
    const auto r = arp_sweep(b, f, DefectModel::none(), p, psi, {-1}, o);
    const auto sh = sweep_hamiltonian(b, f, DefectModel::none(), cg_transform(b.spin()));
    const CVec ref = dense_reference(sh, p, psi, 4000);
    const long e = edge_index(b, -1);
    CHECK(std::abs(r.fidelity[0] - std::norm(ref[e])) < 1e-8);
    CHECK(r.fidelity[0] > 0.9);
}

TEST_CASE("sweep fidelity ignores a global phase of Omega_b") {
    const auto b = ManifoldBasis::full(SpinLength::from_n(5));
    const auto f = FieldConfig::from_ratios(5, 0.5, 0.5);
    auto p = SweepProtocol::standard(2e-7, -2 * phys::pi * 50e6, 2 * phys::pi * 50e6);
    SweepOptions o;
    o.tol = 1e-10;
    const auto r0 = arp_sweep_vertical(b, f, DefectModel::none(), p, {0}, o);
    p.phase = 1.1;
    const auto r1 = arp_sweep_vertical(b, f, DefectModel::none(), p, {0}, o);
    CHECK(std::abs(r0.fidelity[0] - r1.fidelity[0]) < 1e-9);
}

TEST_CASE("reversed schedule undoes the sweep") {
    // H(t) is real here, so U^dagger = K U_{H(T - t)} K with K complex conjugation
    const auto b = ManifoldBasis::full(SpinLength::from_n(5));
    const auto f = FieldConfig::from_ratios(5, 0.5, 0.5);
    const double O = 2 * phys::pi * 50e6, T = 2e-7;
    const auto fwd = SweepProtocol::standard(T, -O, O);
    SweepProtocol rev = fwd;
    rev.delta_fn = [=](double t) { return fwd.delta_b(T - t); };
    rev.omega_fn = [=](double t) { return fwd.omega_b(T - t); };
    SweepOptions o;
    o.tol = 1e-11;
    CVec psi(b.size(), 0.0);
    psi[vertical_index(b, 0, 0)] = 1.0;
    CVec mid = arp_sweep(b, f, DefectModel::none(), fwd, psi, {0}, o).final_state;
    for (auto& x : mid) x = std::conj(x);
    CVec out = arp_sweep(b, f, DefectModel::none(), rev, mid, {0}, o).final_state;
    for (auto& x : out) x = std::conj(x);
    CHECK(std::norm(out[vertical_index(b, 0, 0)]) > 1.0 - 1e-8);
}

TEST_CASE("motional estimates") {
    const auto m = motional_estimates(2 * phys::pi * 300e3, 17e-6, 2 * phys::pi * 40e3, 87 * phys::amu, 0.0);
    CHECK(m.l_t == doctest::Approx(54e-9).epsilon(0.01));
    CHECK(m.U / (2 * phys::pi) == doctest::Approx(3e3).epsilon(0.06));
    CHECK(m.n_of_t == 0.0);
    CHECK(motional_estimates(0.0, 17e-6, 1e5, 1e-25, 1e-3).n_of_t == 0.0);
}
