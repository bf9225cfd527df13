#pragma once
// SPDX-License-Identifier: Apache-2.0
// Large spin as a quantum rotor, and the rotor's reference spectrum in the angular-momentum basis.

#include <vector>

#include "rydsim/spinops.hpp"

namespace ryd {

// Parameters of chi pi^2 - Omega' cos(phi) - lambda' cos(kappa phi + theta).
struct RingParticleParams {
    double chi = 1.0;
    double omega = 0.0;   // Omega'
    double lambda = 0.0;  // lambda'
    int kappa = 1;
    double theta = 0.0;
};

// The 2J+1 single-spin space as an EdgeA manifold with every m_a present.
ManifoldBasis single_spin_basis(SpinLength s);
// pi <-> J_z, e^{i phi} <-> J_+ / sqrt(J(J+1)).
SparseOperator cv_momentum(SpinLength s);
SparseOperator cv_raising(SpinLength s);

struct ContinuumSpectrum {
    std::vector<double> values;  // ascending
    int m_cut = 0;
    double tail = 0.0;           // largest |c_{+-m_cut}| over the checked levels
};

// Default cutoff 4 max(sqrt(Omega'/chi), kappa) + 20, doubled until the boundary coefficients of the
// lowest `checked_levels` eigenvectors fall below tail_tol. An explicit m_cut > 0 is used as given and
// throws CutoffTooSmall when the tail check fails.
ContinuumSpectrum continuum_spectrum(const RingParticleParams& p, int m_cut = 0, int checked_levels = 20,
                                     double tail_tol = 1e-12);

// Single-site spin operator chi J_z^2 - Omega'/(2 sqrt(J(J+1))) (J_+ + J_-)
//   - lambda'/(2 [J(J+1)]^{kappa/2}) (e^{i theta} J_+^kappa + h.c.).
SparseOperator spin_rotor_hamiltonian(const RingParticleParams& p, SpinLength s);
std::vector<double> spin_spectrum(const RingParticleParams& p, SpinLength s);

// Levels of the continuum problem below the maximum of the potential.
int bound_state_count(const RingParticleParams& p);

}  // namespace ryd
