// SPDX-License-Identifier: Apache-2.0
#include "rydsim/gates.hpp"

#include <cmath>

#include "rydsim/constants.hpp"
#include "rydsim/solvers.hpp"

namespace ryd {

namespace {

double fact(int k) { return std::tgamma(k + 1.0); }

double binom(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

}  // namespace

CVec ho_oracle(int ni, int nj, double t, double V) {
    if (ni < 0 || nj < 0) throw Error(ErrorCode::InvalidArgument, "occupations must be >= 0");
    const int K = ni + nj;
    const cplx c = std::cos(V * t), s = cplx(0, -1) * std::sin(V * t);
    // (c a^dag + s b^dag)^ni (s a^dag + c b^dag)^nj |0> / sqrt(ni! nj!)
    CVec out(static_cast<std::size_t>((K + 1) * (K + 1)), 0.0);
    for (int p = 0; p <= ni; ++p)
        for (int q = 0; q <= nj; ++q) {
            const int na = p + q, nb = K - na;
            const cplx coef = binom(ni, p) * std::pow(c, p) * std::pow(s, ni - p) * binom(nj, q) * std::pow(s, q) *
                              std::pow(c, nj - q);
            out[na * (K + 1) + nb] += coef * std::sqrt(fact(na) * fact(nb) / (fact(ni) * fact(nj)));
        }
    return out;
}

CVec ho_dense(int ni, int nj, double t, double V, int cutoff) {
    const int K = ni + nj;
    if (cutoff < K) throw Error(ErrorCode::InvalidArgument, "cutoff below total occupation");
    const int q = cutoff + 1;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(q * q, q * q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            if (a + 1 < q && b > 0) {
                // a^dag b
                const double v = V * std::sqrt((a + 1.0) * b);
                H((a + 1) * q + b - 1, a * q + b) += v;
                H(a * q + b, (a + 1) * q + b - 1) += v;
            }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(q * q);
    psi(ni * q + nj) = 1.0;
    const Eigen::VectorXcd out = expm_hermitian(H, t) * psi;
    CVec r(static_cast<std::size_t>((K + 1) * (K + 1)), 0.0);
    for (int a = 0; a <= K; ++a) r[a * (K + 1) + (K - a)] = out(a * q + (K - a));
    return r;
}

namespace {

struct PairSystem {
    ManifoldBasis basis;
    SparseOperator H;
};

PairSystem pair_system(SpinLength J, int K, const TransferSpec& spec, bool ising) {
    if (K > J.twoJ) throw Error(ErrorCode::SubspaceTooLarge, "excitations exceed 2J");
    PairSystem ps{ManifoldBasis::triangular(J, J.twoJ - K), SparseOperator()};
    const ManifoldBasis& b = ps.basis;
    const auto jaz = build_jz(b, Species::a), jbz = build_jz(b, Species::b);
    const auto jbp = build_jpm(b, Species::b, Ladder::plus), jbm = build_jpm(b, Species::b, Ladder::minus);
    ManyBodyBuilder mb(2, static_cast<int>(b.size()));
    if (ising) {
        const auto dz = jaz - jbz;
        mb.add_pair(0, dz, 1, dz, spec.V);
    }
    mb.add_pair(0, jbp, 1, jbm, -0.25 * spec.V);
    mb.add_pair(0, jbm, 1, jbp, -0.25 * spec.V);
    if (spec.keep_pair_terms) {
        const auto jap = build_jpm(b, Species::a, Ladder::plus), jam = build_jpm(b, Species::a, Ladder::minus);
        const cplx ph = 0.75 * spec.V * std::exp(cplx(0, 2 * spec.phi));
        mb.add_pair(0, jap, 1, jbp, ph);
        mb.add_pair(0, jbp, 1, jap, ph);
        mb.add_pair(0, jam, 1, jbm, std::conj(ph));
        mb.add_pair(0, jbm, 1, jam, std::conj(ph));
        for (int s = 0; s < 2; ++s) mb.add_local(s, jaz, spec.pair_detuning);
    }
    ps.H = mb.build(true);
    return ps;
}

// |n_a, n_b> on one atom
long atom_index(const ManifoldBasis& b, int na, int nb) {
    const int tj = b.spin().twoJ;
    return b.index2(tj - 2 * na, tj - 2 * nb);
}

Eigen::MatrixXcd propagator(const SparseOperator& H, double t) { return expm_hermitian(H.to_dense(), t); }

}  // namespace

TransferResult transfer_fidelity(SpinLength J, const TransferSpec& spec, bool include_ising) {
    TransferResult r;
    const int K = spec.n_i + spec.n_j;
    if (spec.n_i > J.J() / 10 || spec.n_j > J.J() / 10)
        r.warnings.push_back("occupation above J/10; expansion around the circular level is poor");
    const PairSystem ps = pair_system(J, K, spec, include_ising);
    const std::size_t d = ps.basis.size();
    r.dim = static_cast<int>(d * d);
    const double h = 0.5 * J.J() * spec.V;
    r.T = phys::pi / (2.0 * h);
    CVec psi0(d * d, 0.0);
    psi0[atom_index(ps.basis, spec.n_i, 0) * d + atom_index(ps.basis, 0, spec.n_j)] = 1.0;
    // flip-flop acts as hopping -h on the b modes
    const CVec osc = ho_oracle(0, spec.n_j, r.T, -h);
    CVec target(d * d, 0.0);
    const int Kb = spec.n_j;
    for (int nbi = 0; nbi <= Kb; ++nbi) {
        const int nbj = Kb - nbi;
        const cplx a = osc[nbi * (Kb + 1) + nbj];
        if (a == cplx(0.0)) continue;
        target[atom_index(ps.basis, spec.n_i, nbi) * d + atom_index(ps.basis, 0, nbj)] = a;
    }
    CVec psi = psi0;
    if (d * d <= 3000) {
        const Eigen::MatrixXcd U = propagator(ps.H, r.T);
        Eigen::Map<const Eigen::VectorXcd> v(psi0.data(), static_cast<Eigen::Index>(psi0.size()));
        const Eigen::VectorXcd w = U * v;
        psi.assign(w.data(), w.data() + w.size());
    } else {
        Propagation p;
        p.times = {0.0, r.T};
        psi = evolve(ps.H, psi0, p).final_state;
    }
    r.amplitude = inner(target, psi);
    r.F = std::abs(r.amplitude);
    return r;
}

int operator_schmidt_rank(const Eigen::MatrixXcd& P, int d, double tol) {
    Eigen::MatrixXcd M(d * d, d * d);
    for (int a2 = 0; a2 < d; ++a2)
        for (int b2 = 0; b2 < d; ++b2)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) M(a2 * d + a, b2 * d + b) = P(a2 * d + b2, a * d + b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++rank;
    return rank;
}

double process_overlap(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    return std::abs((A.adjoint() * B).trace()) / static_cast<double>(A.rows());
}

GateResult entangling_gate(SpinLength J, int d, const Eigen::MatrixXcd& usp, bool include_ising, double V) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "qudit dimension must be >= 1");
    if (usp.rows() != d * d || usp.cols() != d * d) throw Error(ErrorCode::DimensionMismatch, "U_SP must be d^2 x d^2");
    const int K = 2 * (d - 1);
    if (d > 4 || K > J.twoJ) throw Error(ErrorCode::SubspaceTooLarge, "qudit subspace too large for this spin");
    TransferSpec spec;
    spec.V = V;
    const PairSystem ps = pair_system(J, K, spec, include_ising);
    const Eigen::Index n = static_cast<Eigen::Index>(ps.basis.size());
    const double h = 0.5 * J.J() * V;
    const double T = phys::pi / (2.0 * h);
    const Eigen::MatrixXcd U = propagator(ps.H, T);
    // U_SP on atom i (site 0), identity elsewhere
    Eigen::MatrixXcd local = Eigen::MatrixXcd::Identity(n, n);
    std::vector<long> idx(d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) idx[a * d + b] = atom_index(ps.basis, a, b);
    for (int r = 0; r < d * d; ++r)
        for (int c = 0; c < d * d; ++c) local(idx[r], idx[c]) = usp(r, c);
    Eigen::MatrixXcd SP = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (local(i, j) != cplx(0.0))
                for (Eigen::Index k = 0; k < n; ++k) SP(i * n + k, j * n + k) = local(i, j);
    const Eigen::MatrixXcd total = U * SP * U;
    GateResult g;
    g.process.resize(d * d, d * d);
    for (int a2 = 0; a2 < d; ++a2)
        for (int b2 = 0; b2 < d; ++b2)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const Eigen::Index out = atom_index(ps.basis, a2, 0) * n + atom_index(ps.basis, 0, b2);
                    const Eigen::Index in = atom_index(ps.basis, a, 0) * n + atom_index(ps.basis, 0, b);
                    g.process(a2 * d + b2, a * d + b) = total(out, in);
                }
    double mn = 1.0;
    for (int c = 0; c < d * d; ++c) mn = std::min(mn, g.process.col(c).norm());
    g.leakage = 1.0 - mn;
    g.schmidt_rank = operator_schmidt_rank(g.process, d);
    g.entangling = g.schmidt_rank > 1;
    return g;
}

}  // namespace ryd
