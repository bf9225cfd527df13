#pragma once
// SPDX-License-Identifier: Apache-2.0
// Sine-Gordon and massive Schwinger experiments on edge-manifold chains.

#include <optional>
#include <string>
#include <vector>

#include "rydsim/fit.hpp"
#include "rydsim/lattice.hpp"
#include "rydsim/solvers.hpp"

namespace ryd {

struct SGParams {
    double chi = 1.0, lambda = 0.0, omega = 0.0, Vnn = 0.0;
    int kappa = 1;
    double theta = 0.0;

    double beta2() const;  // 2 kappa^2 sqrt(chi / V'_nn)
    double ellM0() const;  // kappa sqrt(2 lambda' / V'_nn)
    double xi_sg() const;  // beta^2 / (8 pi - beta^2)
    // Inverse at fixed chi and kappa.
    static SGParams from_qft(double beta2, double ellM0, double chi, int kappa);
};

double dispersion_nn(double chi, double lambda, double Vnn, double q);

struct EwaldOptions {
    double t0 = 1.0;
    double tol = 1e-16;
    int max_terms = 10000;
    int real_terms_cap = -1;  // >0 truncates the lattice-space sum after that many shells
};

// eps_q = sum_{j >= 1} cos(q j) / j^3 by Ewald splitting. Throws NonConvergent.
double ewald_epsilon(double q, const EwaldOptions& opt = {});
struct BruteForceSum {
    double value = 0.0;
    double tail_bound = 0.0;  // |remainder| <= 1 / (2 jmax^2)
};
BruteForceSum ewald_direct(double q, long jmax);

struct EwaldFit {
    double c2 = 0.0, c2p = 0.0;
    double rms = 0.0;
};
// eps_q - eps_0 ~ c2 q^2 + c2' q^2 log q + c4 q^4 on q in [qmin, qmax].
EwaldFit fit_ewald_constants(double qmin = 0.01, double qmax = 0.2, int points = 40, const EwaldOptions& opt = {});

// exp[-(chi / 2N) sum_q 1/omega_q] on q = 2 pi k / N. N = 0 integrates over the Brillouin zone.
double vertex_expectation(double chi, double lambda, double Vnn, int N);

struct SGMasses {
    double xi = 0.0;
    double soliton = 0.0;
    std::vector<double> breathers;  // m_1, m_2, ...
    bool threshold = false;         // beta^2 == 4 pi within 1e-12
};
// Throws OutsideMassivePhase for beta^2 outside (0, 8 pi).
SGMasses sg_exact_masses(double beta2, double M0);

// Edge-manifold chain of identical sites, nearest-neighbour couplings V'_nn / (J(J+1)).
struct ChainModel {
    int N = 5;
    SpinLength J;
    SGParams p;
    double alpha = 0.0;  // phase of the Omega' (kappa = 1: lambda') drive
    bool ising = false;
    Boundary boundary = Boundary::PeriodicRing;
};
SparseOperator build_chain(const ChainModel& m, std::size_t budget = 20000000);
// Single-site part of the chain Hamiltonian.
SparseOperator chain_site(const ChainModel& m);

struct GapRow {
    double J = 0.0;
    double gap = 0.0;
    double oracle = 0.0;
    int matvecs = 0;
};
std::vector<GapRow> sg_gap_benchmark(int N, const std::vector<SpinLength>& Js, double chi, double Vnn, double lambda,
                                     int kappa, bool include_ising, std::size_t budget = 20000000);
double chain_gap(const ChainModel& m, std::size_t budget = 20000000, int* matvecs = nullptr);

struct QuenchResult {
    std::vector<double> t;
    std::vector<double> jy;      // site-averaged <J_y>
    std::optional<DampedSine> fit;
    double ed_gap = 0.0;
};
// Ground state with the drive phase tilted by alpha, then evolution at alpha = 0.
QuenchResult quench_gap(const ChainModel& post, double alpha, const std::vector<double>& times,
                        std::size_t budget = 20000000, bool with_ed_gap = true);

struct CapacitorResult {
    std::vector<double> t;
    std::vector<int> site_label;             // centre site is 0
    std::vector<std::vector<double>> jy;     // [time][site]
    std::vector<std::vector<double>> rho;    // [time][site], rho_i = Jy_i - Jy_{i-1}, rho_first = Jy_first
    double max_imag = 0.0;                   // largest imaginary part of any recorded expectation value
    std::vector<std::string> warnings;
};
struct CapacitorSpec {
    int N = 5;
    SpinLength J;
    int kappa = 4;
    double chi = 1.0;
    double Vnn = 0.0, omega = 0.0;
    double lambda_from = 0.0, lambda_to = 0.0;
    double theta_from = 0.0, theta_to = 0.0;
};
CapacitorResult schwinger_capacitor(const CapacitorSpec& s, const std::vector<double>& times,
                                    std::size_t budget = 20000000);

struct SchwingerParams {
    double e_over_m = 0.0;
    double e_over_Lambda = 0.0;
    double m_over_Lambda = 0.0;
    std::vector<std::string> warnings;  // separation-of-scales violations
};
// Lambda ell = pi.
SchwingerParams map_schwinger(double chi, double Vnn, double omega, double lambda, int kappa);
struct SchwingerCouplings {
    double Vnn = 0.0, omega = 0.0, lambda = 0.0;
};
SchwingerCouplings schwinger_couplings(double e_over_Lambda, double m_over_Lambda, double chi, int kappa);

}  // namespace ryd
