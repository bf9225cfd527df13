#pragma once
// SPDX-License-Identifier: Apache-2.0
// Excitation transfer between two atoms near the circular level, and gates built from it.

#include <Eigen/Dense>
#include <vector>

#include "rydsim/lattice.hpp"

namespace ryd {

// Two bosonic modes (i, j) under H = V (a_i^dag a_j + h.c.); Fock index n_i * (K+1) + n_j with K = n_i + n_j.
// a_i^dag(t) = cos(Vt) a_i^dag - i sin(Vt) a_j^dag.
CVec ho_oracle(int n_i, int n_j, double t, double V);
// Same problem by dense propagation on a per-mode cutoff.
CVec ho_dense(int n_i, int n_j, double t, double V, int cutoff);

struct TransferSpec {
    int n_i = 0;  // a-quanta on atom i (spectators)
    int n_j = 0;  // b-quanta on atom j, moved to atom i
    double V = 1.0;
    double phi = 0.0;
    bool keep_pair_terms = false;  // retain the a-b pair block at the given detuning
    double pair_detuning = 0.0;    // omega_a - omega_b in the frame of the pair block
};

struct TransferResult {
    cplx amplitude = 0.0;  // <psi_T | U | psi_0>
    double F = 0.0;        // |amplitude|
    double T = 0.0;
    int dim = 0;
    std::vector<std::string> warnings;
};

// Two atoms, b flip-flop (plus optional Ising) on a triangular basis with l* = 2J - (n_i + n_j).
TransferResult transfer_fidelity(SpinLength J, const TransferSpec& spec, bool include_ising);

struct GateResult {
    Eigen::MatrixXcd process;  // d^2 x d^2 on |n_a(i), n_b(j)>, index n_a * d + n_b
    int schmidt_rank = 0;
    bool entangling = false;
    double leakage = 0.0;  // 1 - min column norm
};

// U_ST(ij) U_SP(i) U_ST(ji). usp acts on atom i's (n_a, n_b) occupations below d, index n_a * d + n_b.
GateResult entangling_gate(SpinLength J, int d, const Eigen::MatrixXcd& usp, bool include_ising, double V = 1.0);
int operator_schmidt_rank(const Eigen::MatrixXcd& process, int d, double tol = 1e-6);
// |Tr(A^dag B)| / dim, the overlap of two processes.
double process_overlap(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

}  // namespace ryd
