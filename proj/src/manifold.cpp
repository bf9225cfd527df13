// SPDX-License-Identifier: Apache-2.0
#include "rydsim/manifold.hpp"

#include <algorithm>
#include <cmath>

#include "rydsim/constants.hpp"

namespace ryd {

using namespace phys;

double inglis_teller_field(int n) {
    // 2 Ry / (3 e a0 n^5), V/m -> V/cm
    return 2.0 * rydberg_J / (3.0 * e * a0 * std::pow(static_cast<double>(n), 5)) / 100.0;
}

FieldConfig FieldConfig::make(int n, double F_Vcm, double B_G) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    return {n, F_Vcm, B_G};
}

FieldConfig FieldConfig::from_ratios(int n, double f_over_FIT, double ratio) {
    FieldConfig f = make(n, f_over_FIT * inglis_teller_field(n), 0.0);
    // omega_Z = muB B / hbar
    f.B = ratio * f.omega_S() * hbar / muB * 1e4;
    return f;
}

double FieldConfig::omega_S() const { return 1.5 * n * e * a0 * (F * 100.0) / hbar; }
double FieldConfig::omega_Z() const { return muB * (B * 1e-4) / hbar; }
double FieldConfig::F_IT() const { return inglis_teller_field(n); }

double defect_shift(int n, double delta) {
    const double nn = static_cast<double>(n);
    return -rydberg_rad * (1.0 / ((nn - delta) * (nn - delta)) - 1.0 / (nn * nn));
}

DefectModel DefectModel::from_defects(std::vector<double> d) {
    DefectModel m;
    m.lstar = static_cast<int>(d.size());
    m.delta = std::move(d);
    return m;
}

DefectModel DefectModel::from_shifts(std::vector<double> s) {
    DefectModel m;
    m.lstar = static_cast<int>(s.size());
    m.shifts = std::move(s);
    return m;
}

DefectModel DefectModel::rb_defaults() { return from_defects({3.1311804, 2.6548849, 1.3480917}); }

std::vector<double> DefectModel::shifts_for(int n) const {
    if (lstar < 0) throw Error(ErrorCode::InvalidArgument, "l* must be >= 0");
    if (!delta.empty()) {
        if (static_cast<int>(delta.size()) != lstar)
            throw Error(ErrorCode::InvalidArgument, "need one quantum defect per l < l*");
        std::vector<double> s;
        for (double d : delta) s.push_back(defect_shift(n, d));
        return s;
    }
    if (static_cast<int>(shifts.size()) != lstar)
        throw Error(ErrorCode::InvalidArgument, "need one shift per l < l*");
    return shifts;
}

SparseOperator build_static(const ManifoldBasis& basis, const FieldConfig& fields) {
    if (!fields.valid())
        throw Error(ErrorCode::InglisTellerExceeded,
                    "F = " + std::to_string(fields.F) + " V/cm >= F_IT = " + std::to_string(fields.F_IT()));
    const double wa = fields.omega_a(), wb = fields.omega_b();
    std::vector<cplx> d(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) d[i] = -wa * basis.ma(i) + wb * basis.mb(i);
    return SparseOperator::diagonal(d, true);
}

SparseOperator build_mw(const ManifoldBasis& basis, const MWDrive& dr) {
    SparseOperator h(basis.size());
    const Species sp[2] = {Species::a, Species::b};
    const double dl[2] = {dr.delta_a, dr.delta_b};
    const cplx om[2] = {dr.omega_a, dr.omega_b};
    for (int s = 0; s < 2; ++s) {
        if (dl[s] != 0.0) h = h.plus(build_jz(basis, sp[s]), -dl[s]);
        if (om[s] != 0.0) {
            h = h.plus(build_jpm(basis, sp[s], Ladder::plus), om[s]);
            h = h.plus(build_jpm(basis, sp[s], Ladder::minus), std::conj(om[s]));
        }
    }
    return SparseOperator::from_triplets(h.dim(), h.triplets(), true);
}

SparseOperator build_defect_projector(const ManifoldBasis& basis, int n, const DefectModel& defects,
                                      const CGTable& cg) {
    if (basis.kind() != ManifoldKind::Full)
        throw Error(ErrorCode::BasisNotFull, "quantum-defect projector needs the full manifold");
    if (basis.spin().n() != n) throw Error(ErrorCode::InvalidArgument, "basis and field n differ");
    const auto shifts = defects.shifts_for(n);
    if (defects.lstar > basis.spin().twoJ + 1)
        throw Error(ErrorCode::InvalidArgument, "l* exceeds n");
    std::vector<Triplet> t;
    for (int l = 0; l < defects.lstar; ++l) {
        for (int ml = -l; ml <= l; ++ml) {
            const CVec v = cg.state(basis, l, ml);
            std::vector<std::pair<long, double>> nz;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0.0) nz.push_back({static_cast<long>(i), v[i].real()});
            for (auto [i, ci] : nz)
                for (auto [j, cj] : nz) t.push_back({i, j, shifts[l] * ci * cj});
        }
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), true);
}

SparseOperator build_qd(const ManifoldBasis& basis, const FieldConfig& fields, const DefectModel& defects,
                        const CGTable& cg) {
    if (basis.kind() != ManifoldKind::Full)
        throw Error(ErrorCode::BasisNotFull, "quantum-defect Hamiltonian needs the full manifold");
    SparseOperator h = build_static(basis, fields);
    if (defects.lstar == 0) return h;
    return h + build_defect_projector(basis, fields.n, defects, cg);
}

long vertical_index(const ManifoldBasis& basis, int two_ma, int lstar) {
    return basis.index2(two_ma, 2 * lstar - two_ma);
}

long edge_index(const ManifoldBasis& basis, int two_ma) { return basis.index2(two_ma, basis.spin().twoJ); }

SparseOperator build_vg(const ManifoldBasis& basis, const std::map<int, cplx>& rabi) {
    if (basis.kind() != ManifoldKind::Vertical)
        throw Error(ErrorCode::InvalidArgument, "build_vg needs a vertical basis");
    const std::int64_t gs = static_cast<std::int64_t>(basis.size());
    std::vector<Triplet> t;
    for (auto [two_ma, om] : rabi) {
        const long i = vertical_index(basis, two_ma, basis.lstar());
        if (i < 0) throw Error(ErrorCode::InvalidArgument, "m_a outside the vertical manifold");
        t.push_back({i, gs, 0.5 * om});
        t.push_back({gs, i, 0.5 * std::conj(om)});
    }
    return SparseOperator::from_triplets(basis.size() + 1, std::move(t), true);
}

// ------------------------------------------------------------------ sweep

double SweepProtocol::delta_b(double t) const {
    if (delta_fn) return delta_fn(t);
    return delta0 * std::cos(pi * t / T);
}

cplx SweepProtocol::omega_b(double t) const {
    const cplx g = std::exp(cplx(0, phase));
    if (omega_fn) return g * omega_fn(t);
    return g * omega0 * std::sin(pi * t / T);
}

SweepProtocol SweepProtocol::standard(double T, double delta0, double omega0) {
    SweepProtocol p;
    p.T = T;
    p.delta0 = delta0;
    p.omega0 = omega0;
    return p;
}

SparseOperator SweepHamiltonian::at(const SweepProtocol& p, double t) const {
    const cplx om = p.omega_b(t);
    return base.plus(lz, -p.delta_b(t)).plus(jbp, om).plus(jbm, std::conj(om));
}

SweepHamiltonian sweep_hamiltonian(const ManifoldBasis& basis, const FieldConfig& fields,
                                   const DefectModel& defects, const CGTable& cg) {
    if (basis.kind() != ManifoldKind::Full)
        throw Error(ErrorCode::BasisNotFull, "sweep needs the full manifold");
    if (!fields.valid())
        throw Error(ErrorCode::InglisTellerExceeded, "field above Inglis-Teller limit");
    SweepHamiltonian s;
    const SparseOperator jaz = build_jz(basis, Species::a);
    s.base = jaz.scaled(-(fields.omega_a() + fields.omega_b()));
    if (defects.lstar > 0) s.base = s.base + build_defect_projector(basis, fields.n, defects, cg);
    s.lz = jaz + build_jz(basis, Species::b);
    s.jbp = build_jpm(basis, Species::b, Ladder::plus);
    s.jbm = build_jpm(basis, Species::b, Ladder::minus);
    return s;
}

namespace {

struct Sched {
    double delta;
    cplx omega;
};

Sched derivative(const SweepProtocol& p, double t) {
    const double h = 1e-6 * p.T;
    const double a = std::max(0.0, t - h), b = std::min(p.T, t + h);
    return {(p.delta_b(b) - p.delta_b(a)) / (b - a), (p.omega_b(b) - p.omega_b(a)) / (b - a)};
}

}  // namespace

SweepResult arp_sweep(const ManifoldBasis& basis, const FieldConfig& fields, const DefectModel& defects,
                      const SweepProtocol& protocol, const CVec& initial, const std::vector<int>& two_ma,
                      const SweepOptions& opt) {
    if (!(protocol.T > 0)) throw Error(ErrorCode::InvalidArgument, "sweep duration must be positive");
    if (initial.size() != basis.size()) throw Error(ErrorCode::DimensionMismatch, "initial state length");
    const CGTable cg = cg_transform(basis.spin(), std::max(61, basis.spin().n()));
    const SweepHamiltonian sh = sweep_hamiltonian(basis, fields, defects, cg);
    SweepResult res;

    // schedule extrema, used for spectral bounds and the adiabaticity warning
    double dmax = 0.0, omax = 0.0;
    for (int i = 0; i <= 512; ++i) {
        const double t = protocol.T * i / 512.0;
        dmax = std::max(dmax, std::abs(protocol.delta_b(t)));
        omax = std::max(omax, std::abs(protocol.omega_b(t)));
    }
    const double wmin = std::min(std::abs(fields.omega_a()), std::abs(fields.omega_b()));
    if (omax > 0.1 * wmin)
        res.warnings.push_back("|Omega_b| is not small compared to omega_a, omega_b");

    const double twoJ = basis.spin().twoJ;
    auto [lo, hi] = spectral_bounds(sh.base, 60);
    const double pad = dmax * twoJ + 2.0 * omax * (0.5 * twoJ + 1.0);
    lo -= pad;
    hi += pad;

    const double max_step = opt.max_step > 0 ? opt.max_step : protocol.T / 64.0;
    CVec psi = initial;
    const double n0 = norm(psi);
    const std::size_t n = psi.size();
    CVec a(n), b(n), c(n), d(n);
    double t = 0.0;
    while (t < protocol.T * (1 - 1e-14)) {
        // local error ~ dt^3/12 ||[H, dH/dt] psi|| for the midpoint rule
        const SparseOperator H = sh.at(protocol, t);
        const Sched ds = derivative(protocol, t);
        const SparseOperator Hd =
            sh.lz.scaled(-ds.delta).plus(sh.jbp, ds.omega).plus(sh.jbm, std::conj(ds.omega));
        Hd.apply(psi.data(), a.data());
        H.apply(a.data(), b.data());
        H.apply(psi.data(), c.data());
        Hd.apply(c.data(), d.data());
        kern::axpy(n, -1.0, d.data(), b.data());
        res.matvecs += 4;
        const double cn = norm(b);
        double dt = max_step;
        if (cn > 0) dt = std::min(dt, std::cbrt(12.0 * opt.tol / cn));
        if (opt.min_step > 0) dt = std::max(dt, opt.min_step);
        dt = std::min(dt, protocol.T - t);
        res.matvecs += chebyshev_step(sh.at(protocol, t + 0.5 * dt), dt, psi, lo, hi);
        t += dt;
        ++res.steps;
    }
    res.norm_drift = std::abs(norm(psi) - n0);
    if (res.norm_drift > 1e-7)
        throw Error(ErrorCode::PropagationTolerance, "sweep norm drift " + std::to_string(res.norm_drift));

    for (int m : two_ma) {
        const long i = edge_index(basis, m);
        if (i < 0) throw Error(ErrorCode::InvalidArgument, "m_a outside manifold");
        res.two_ma.push_back(m);
        res.fidelity.push_back(std::norm(psi[i]));
    }

    if (opt.eigen_traces > 0) {
        for (int k = 0; k < opt.eigen_traces; ++k) {
            const double tt = opt.eigen_traces == 1 ? 0.0 : protocol.T * k / (opt.eigen_traces - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sh.at(protocol, tt).to_dense());
            EigenTrace tr{tt, {}};
            for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
                double w = 0.0;
                for (std::size_t r = 0; r < basis.size(); ++r)
                    if (basis.two_ma(r) == opt.trace_two_ma) w += std::norm(es.eigenvectors()(r, j));
                const double E = es.eigenvalues()(j);
                if (w > 0.5 && (opt.trace_window <= 0 || std::abs(E) < opt.trace_window))
                    tr.energies.push_back(E);
            }
            res.traces.push_back(std::move(tr));
        }
    }
    res.final_state = std::move(psi);
    return res;
}

SweepResult arp_sweep_vertical(const ManifoldBasis& basis, const FieldConfig& fields, const DefectModel& defects,
                               const SweepProtocol& protocol, const std::vector<int>& two_ma,
                               const SweepOptions& opt) {
    SweepResult all;
    for (std::size_t k = 0; k < two_ma.size(); ++k) {
        const long i = vertical_index(basis, two_ma[k], defects.lstar);
        if (i < 0) throw Error(ErrorCode::InvalidArgument, "vertical state outside manifold");
        CVec psi(basis.size(), 0.0);
        psi[i] = 1.0;
        SweepOptions o = opt;
        if (k > 0) o.eigen_traces = 0;
        SweepResult r = arp_sweep(basis, fields, defects, protocol, psi, {two_ma[k]}, o);
        all.two_ma.push_back(two_ma[k]);
        all.fidelity.push_back(r.fidelity[0]);
        all.steps += r.steps;
        all.matvecs += r.matvecs;
        all.norm_drift = std::max(all.norm_drift, r.norm_drift);
        if (k == 0) {
            all.traces = std::move(r.traces);
            all.warnings = r.warnings;
        }
        all.finals.push_back(r.final_state);
        all.final_state = std::move(r.final_state);
    }
    return all;
}

MotionalEstimate motional_estimates(double V_eff, double R_ij, double omega_t, double mass, double t) {
    if (!(R_ij > 0) || !(omega_t > 0) || !(mass > 0))
        throw Error(ErrorCode::InvalidArgument, "motional_estimates: R, omega_t, mass must be positive");
    MotionalEstimate m;
    m.l_t = std::sqrt(hbar / (mass * omega_t));
    m.U = 3.0 * m.l_t * V_eff / R_ij;
    m.n_of_t = m.U * m.U * t * t / 8.0;
    m.adiabatic_ok = std::abs(m.U) < 0.1 * omega_t;
    return m;
}

}  // namespace ryd
