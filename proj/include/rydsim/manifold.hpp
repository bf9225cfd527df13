#pragma once
// SPDX-License-Identifier: Apache-2.0
// Single-atom Hamiltonians of one n-manifold and the swept state transfer.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydsim/solvers.hpp"
#include "rydsim/spinops.hpp"

namespace ryd {

// Static fields. F in V/cm, B in gauss, frequencies in rad/s.
struct FieldConfig {
    int n = 1;
    double F = 0.0;
    double B = 0.0;

    static FieldConfig make(int n, double F_Vcm, double B_G);
    // F as a fraction of the Inglis-Teller field, B such that omega_Z = ratio * omega_S.
    static FieldConfig from_ratios(int n, double f_over_FIT, double omegaZ_over_omegaS);

    double omega_S() const;
    double omega_Z() const;
    double omega_a() const { return omega_S() - omega_Z(); }
    double omega_b() const { return omega_S() + omega_Z(); }
    double F_IT() const;  // V/cm
    bool valid() const { return F < F_IT(); }
};

double inglis_teller_field(int n);  // V/cm

struct MWDrive {
    double delta_a = 0.0, delta_b = 0.0;
    cplx omega_a = 0.0, omega_b = 0.0;
};

// Threshold l* and per-l energy shifts E_{n,l} - E_n (rad/s) for l < l*.
struct DefectModel {
    int lstar = 0;
    std::vector<double> delta;   // quantum defects, may be empty when shifts are given directly
    std::vector<double> shifts;  // filled by resolve()

    static DefectModel none() { return {}; }
    static DefectModel from_defects(std::vector<double> d);
    static DefectModel from_shifts(std::vector<double> s);
    // Rb s, p, d defects. Config defaults only, not reference data.
    static DefectModel rb_defaults();

    // Shifts for principal number n (computed from delta when present).
    std::vector<double> shifts_for(int n) const;
};

// -Ry/(n - delta)^2 + Ry/n^2 in rad/s.
double defect_shift(int n, double delta);

SparseOperator build_static(const ManifoldBasis& basis, const FieldConfig& fields);
SparseOperator build_mw(const ManifoldBasis& basis, const MWDrive& drive);
// Defect projector alone: sum_{l<l*, m} shift_l |l m><l m|.
SparseOperator build_defect_projector(const ManifoldBasis& basis, int n, const DefectModel& defects,
                                      const CGTable& cg);
SparseOperator build_qd(const ManifoldBasis& basis, const FieldConfig& fields, const DefectModel& defects,
                        const CGTable& cg);
// Vertical basis plus one ground state appended at index basis.size().
SparseOperator build_vg(const ManifoldBasis& basis, const std::map<int, cplx>& rabi_by_two_ma);

// |psi^v_{m_a}> = |m_a, l* - m_a> and |psi^a_{m_a}> = |m_a, J>.
long vertical_index(const ManifoldBasis& basis, int two_ma, int lstar);
long edge_index(const ManifoldBasis& basis, int two_ma);

struct SweepProtocol {
    double T = 0.0;       // s
    double delta0 = 0.0;  // rad/s
    double omega0 = 0.0;  // rad/s
    double phase = 0.0;   // global phase of Omega_b
    std::function<double(double)> delta_fn;  // optional overrides
    std::function<cplx(double)> omega_fn;

    double delta_b(double t) const;
    cplx omega_b(double t) const;
    static SweepProtocol standard(double T, double delta0, double omega0);
};

struct SweepOptions {
    double tol = 1e-8;          // per-step commutator error bound
    double max_step = 0.0;      // 0: T / 64
    double min_step = 0.0;      // 0: no floor
    int eigen_traces = 0;       // number of sampled times for instantaneous spectra
    int trace_two_ma = 0;       // m_a sector shown in traces
    double trace_window = 0.0;  // keep |E| below this (0: all)
};

struct EigenTrace {
    double t;
    std::vector<double> energies;  // levels whose weight in the trace sector exceeds 1/2
};

struct SweepResult {
    CVec final_state;
    std::vector<int> two_ma;
    std::vector<double> fidelity;  // |<psi^a_{m_a}|psi(T)>|^2, one per swept m_a
    std::vector<CVec> finals;      // per swept m_a
    std::vector<EigenTrace> traces;
    int steps = 0;
    int matvecs = 0;
    double norm_drift = 0.0;
    std::vector<std::string> warnings;
};

// Rotating-frame Hamiltonian at time t: -(w_a+w_b) J_az + P - Delta_b(t) L_z + Omega_b(t) J_b+ + h.c.
struct SweepHamiltonian {
    SparseOperator base;  // -(w_a + w_b) J_az + P
    SparseOperator lz;
    SparseOperator jbp;
    SparseOperator jbm;
    SparseOperator at(const SweepProtocol& p, double t) const;
};

SweepHamiltonian sweep_hamiltonian(const ManifoldBasis& basis, const FieldConfig& fields,
                                   const DefectModel& defects, const CGTable& cg);

// Propagates one initial state. Fidelities are onto |psi^a> for every m_a in `two_ma`.
SweepResult arp_sweep(const ManifoldBasis& basis, const FieldConfig& fields, const DefectModel& defects,
                      const SweepProtocol& protocol, const CVec& initial, const std::vector<int>& two_ma,
                      const SweepOptions& opt = {});
// One sweep per m_a starting from |psi^v_{m_a}>.
SweepResult arp_sweep_vertical(const ManifoldBasis& basis, const FieldConfig& fields,
                               const DefectModel& defects, const SweepProtocol& protocol,
                               const std::vector<int>& two_ma, const SweepOptions& opt = {});

struct MotionalEstimate {
    double l_t;        // m
    double U;          // rad/s
    double n_of_t;     // at the requested time
    bool adiabatic_ok; // U << omega_t
};

// V_eff, omega_t in rad/s, R in m, mass in kg, t in s.
MotionalEstimate motional_estimates(double V_eff, double R_ij, double omega_t, double mass, double t);

}  // namespace ryd
