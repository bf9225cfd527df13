#pragma once
// SPDX-License-Identifier: Apache-2.0
// Ponderomotive couplings, Laguerre-Gauss beams, small-n position-space oracle,
// Thomson rate and off-resonant squeezing coefficients.

#include <functional>
#include <map>
#include <vector>

#include "rydsim/spinops.hpp"

namespace ryd {

struct PonderoTerm {
    int kappa_a = 0;
    int kappa_b = 0;
    cplx lambda = 0.0;
};

// sum lambda (J_a+)^ka (J_b+)^kb + h.c.; negative exponents use the lowering operator.
SparseOperator build_pondero(const ManifoldBasis& basis, const std::vector<PonderoTerm>& terms);

// Matrix elements of (J_a+)^ka (J_b+)^kb between |m_a, m_b> and |m_a+ka, m_b+kb> on the
// full manifold. Keys are doubled (m_a, m_b) of the source state.
std::map<std::pair<int, int>, double> algebraic_elements(SpinLength s, int kappa_a, int kappa_b);
double algebraic_element(SpinLength s, int kappa_a, int kappa_b, int two_ma, int two_mb);

struct LGBeam {
    double wavelength = 1300e-9;  // m
    double waist = 650e-9;        // m
    int dm = 1;                   // orbital index
    std::vector<double> amps{1.0};  // radial mode amplitudes a_p, sum a_p^2 = 1
    double alpha = 0.0;           // phase
    double power = 0.0;           // W
};

// Normalised LG mode u_{p,dm}(rho, z), int |u|^2 dA = pi w0^2.
cplx lg_mode(int p, int dm, double rho, double phi, double z, double wavelength, double waist);
cplx beam_field(const LGBeam& b, double rho, double phi, double z);

struct InterferenceResult {
    int kappa = 0;
    double U0 = 0.0;                 // J
    std::vector<double> rho;         // m
    std::vector<double> Uc;          // constant part, J
    std::vector<cplx> Ukappa;        // oscillating part, J
    std::vector<double> vortex_coeffs;  // c_{|kappa|+2k}, k = 0.., in J / m^power
    std::vector<int> vortex_powers;
};

// Constant and rotating parts of the ponderomotive potential of two co-propagating
// beams on rho in [0, rho_max] at z. Throws MismatchedWaist.
InterferenceResult beam_interference(const LGBeam& b1, const LGBeam& b2, double rho_max, int points,
                                     double z = 0.0, int fit_terms = 5);
// Radial coefficients a_p cancelling the rho^{|dm|+2} term of u (two-mode superposition).
std::vector<double> flat_vortex_amplitudes(int dm);
// int |u|^2 dA / (pi w0^2), by quadrature.
double mode_power_integral(const LGBeam& b, double z = 0.0);

struct OracleReport {
    int n = 0;
    int kappa_a = 0, kappa_b = 0, eta = 0;
    std::vector<int> two_ma;        // source states
    std::vector<double> W;          // quadrature values (magnitudes)
    std::vector<double> M;          // algebraic elements
    double ratio = 0.0;             // mean W/M
    double max_rel_dev = 0.0;       // max |W/M - ratio| / ratio
    double convergence = 0.0;       // change on doubling quadrature order
};

// W = <psi'|(rho/a0)^{|kappa|+2 eta} e^{-i kappa phi}|psi> over hydrogen wavefunctions of
// states m_b = two_mb/2 (default J) built with the CG table; reports W/M statistics.
// Positive kappa raises m_l, matching (J_a+)^kappa.
OracleReport pondero_oracle_smalln(int n, int kappa_a, int kappa_b, int eta, int two_mb_or_default = 1 << 20);

// Thomson scattering rate per unit power (s^-1 W^-1) for total power P (W).
double thomson_rate(double power, double wavelength, double waist);

struct SqueezeScan {
    double chi = 0.0;   // coefficient of m_a^2
    double xi = 0.0;    // coefficient of m_a^3
    std::vector<double> ma;
    std::vector<double> shift;   // dressed energy per m_a
    std::vector<double> purity;  // |c_{m_a}|^2
};

// Dressed two-level energies E = (-D + sqrt(D^2 + W^2)) / 2 with D = delta0 + dw * m_a.
// chi, xi come from a cubic fit over |m_a| <= window (default J/2).
SqueezeScan squeeze_extract(double delta0, double dw, const std::function<double(double)>& rabi, SpinLength s,
                            double window = -1.0);
// Delta0 where the cubic coefficient vanishes, bracketed in [lo, hi]. Throws FitFailure.
double squeeze_zero_cubic(double lo, double hi, double dw, const std::function<double(double)>& rabi,
                          SpinLength s, double window = -1.0);

}  // namespace ryd
