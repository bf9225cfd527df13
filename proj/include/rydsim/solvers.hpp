#pragma once
// SPDX-License-Identifier: Apache-2.0
// Sparse eigensolver and propagators shared by every experiment.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/spinops.hpp"

namespace ryd {

struct LanczosOptions {
    int max_basis = 40;        // Krylov vectors kept in memory
    int max_restarts = 400;
    double tol = 1e-10;        // residual relative to the norm estimate
    std::uint64_t seed = 20240611;
    bool want_vectors = true;
    // Search once more in the complement of the converged vectors to catch
    // degenerate partners a single Krylov sequence cannot see.
    int degeneracy_passes = -1;  // -1: automatic (on for dim <= 2e5)
    std::vector<CVec> locked;    // vectors the search must stay orthogonal to
};

struct EigenResult {
    std::vector<double> values;
    std::vector<CVec> vectors;
    double residual = 0.0;  // largest ||H v - E v|| among returned pairs
    double norm_estimate = 0.0;
    int matvecs = 0;
};

// Lowest-k eigenpairs of a hermitian operator (thick-restart Lanczos, full
// reorthogonalization). Throws NoConvergence.
EigenResult ground_state(const SparseOperator& H, int k, const LanczosOptions& opt = {});

// Gap E1 - E0 with the degeneracy tolerance 1e-9 ||H||: the first level
// strictly above the ground level.
double lanczos_gap(const EigenResult& r);

// Rough spectral interval from a short Lanczos run, widened by residuals.
std::pair<double, double> spectral_bounds(const SparseOperator& H, int steps = 40,
                                          std::uint64_t seed = 7);

struct KrylovOptions {
    int max_dim = 30;
    double tol = 1e-12;  // local error per step
};

// psi <- exp(-i H dt) psi with adaptive Lanczos substeps. Returns matvec count.
int expv(const SparseOperator& H, double dt, CVec& psi, const KrylovOptions& opt = {});

// psi <- exp(-i H dt) psi by Chebyshev expansion on [emin, emax].
int chebyshev_step(const SparseOperator& H, double dt, CVec& psi, double emin, double emax,
                   double tol = 1e-14);

struct Observable {
    std::string name;
    SparseOperator op;
};

struct Propagation {
    std::vector<double> times;  // strictly increasing, first entry is the initial time
    std::vector<Observable> observables;
    KrylovOptions krylov;
    double norm_drift_tol = 1e-9;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<cplx>> values;  // values[observable][time]
    CVec final_state;
    double norm_drift = 0.0;
};

TimeSeries evolve(const SparseOperator& H, const CVec& psi0, const Propagation& prop);

// Piecewise-constant propagation of H(t) sampled at step midpoints.
using HamiltonianFn = std::function<SparseOperator(double)>;
TimeSeries evolve_td(const HamiltonianFn& H, const CVec& psi0, const Propagation& prop,
                     double max_step);

// Dense Hermitian exponential, used by oracles and small problems.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& H, double t);

}  // namespace ryd
