// SPDX-License-Identifier: Apache-2.0
#include "rydsim/cv.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rydsim/constants.hpp"
#include "rydsim/drive.hpp"
#include "rydsim/lattice.hpp"

namespace ryd {

ManifoldBasis single_spin_basis(SpinLength s) { return ManifoldBasis::edge_a(s, 0); }

SparseOperator cv_momentum(SpinLength s) { return build_jz(single_spin_basis(s), Species::a); }

SparseOperator cv_raising(SpinLength s) {
    return build_jpm(single_spin_basis(s), Species::a, Ladder::plus).scaled(1.0 / std::sqrt(s.casimir()));
}

namespace {

Eigen::MatrixXcd rotor_matrix(const RingParticleParams& p, int M) {
    const int n = 2 * M + 1;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    const cplx lam = -0.5 * p.lambda * std::exp(cplx(0, p.theta));
    for (int i = 0; i < n; ++i) {
        const double m = i - M;
        H(i, i) = p.chi * m * m;
        if (i + 1 < n) {
            H(i + 1, i) += -0.5 * p.omega;
            H(i, i + 1) += -0.5 * p.omega;
        }
        if (p.lambda != 0.0 && i + p.kappa < n) {
            H(i + p.kappa, i) += lam;  // raising by kappa carries e^{i theta}
            H(i, i + p.kappa) += std::conj(lam);
        }
    }
    return H;
}

}  // namespace

ContinuumSpectrum continuum_spectrum(const RingParticleParams& p, int m_cut, int checked_levels, double tail_tol) {
    if (p.kappa < 1) throw Error(ErrorCode::InvalidArgument, "kappa must be >= 1");
    if (!(p.chi > 0)) throw Error(ErrorCode::InvalidArgument, "chi must be positive");
    const bool automatic = m_cut <= 0;
    int M = automatic ? static_cast<int>(4 * std::max(std::sqrt(std::abs(p.omega) / p.chi), double(p.kappa)) + 20)
                      : m_cut;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rotor_matrix(p, M));
        const int n = 2 * M + 1;
        const int k = std::min(checked_levels, n);
        double tail = 0.0;
        for (int j = 0; j < k; ++j)
            tail = std::max({tail, std::abs(es.eigenvectors()(0, j)), std::abs(es.eigenvectors()(n - 1, j))});
        if (tail < tail_tol) {
            ContinuumSpectrum out;
            out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
            out.m_cut = M;
            out.tail = tail;
            return out;
        }
        if (!automatic)
            throw Error(ErrorCode::CutoffTooSmall,
                        "boundary coefficient " + std::to_string(tail) + " at m_cut = " + std::to_string(M));
        M *= 2;
    }
    throw Error(ErrorCode::CutoffTooSmall, "tail check failed after repeated doubling");
}

SparseOperator spin_rotor_hamiltonian(const RingParticleParams& p, SpinLength s) {
    const ManifoldBasis basis = single_spin_basis(s);
    const double JJ = s.casimir();
    EdgeSiteTerms t;
    t.chi = p.chi;
    if (p.omega != 0.0) t.pondero.push_back({1, 0, -p.omega / (2.0 * std::sqrt(JJ))});
    if (p.lambda != 0.0)
        t.pondero.push_back({p.kappa, 0, -p.lambda / (2.0 * std::pow(JJ, 0.5 * p.kappa)) * std::exp(cplx(0, p.theta))});
    return edge_single_site(basis, t);
}

std::vector<double> spin_spectrum(const RingParticleParams& p, SpinLength s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spin_rotor_hamiltonian(p, s).to_dense(),
                                                       Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

int bound_state_count(const RingParticleParams& p) {
    double vmax = -1e300;
    for (int i = 0; i < 20000; ++i) {
        const double phi = 2 * phys::pi * i / 20000.0;
        vmax = std::max(vmax, -p.omega * std::cos(phi) - p.lambda * std::cos(p.kappa * phi + p.theta));
    }
    const auto c = continuum_spectrum(p);
    return static_cast<int>(std::count_if(c.values.begin(), c.values.end(), [&](double e) { return e < vmax; }));
}

}  // namespace ryd
