// SPDX-License-Identifier: Apache-2.0
#include "rydsim/spinops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ryd {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::CGOverflow: return "CGOverflow";
        case ErrorCode::InglisTellerExceeded: return "InglisTellerExceeded";
        case ErrorCode::BasisNotFull: return "BasisNotFull";
        case ErrorCode::PropagationTolerance: return "PropagationTolerance";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::EDBudgetExceeded: return "EDBudgetExceeded";
        case ErrorCode::FitFailure: return "FitFailure";
        case ErrorCode::OutsideMassivePhase: return "OutsideMassivePhase";
        case ErrorCode::Gapless: return "Gapless";
        case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::CoincidentAtoms: return "CoincidentAtoms";
        case ErrorCode::NonPlanarGeometry: return "NonPlanarGeometry";
        case ErrorCode::MismatchedWaist: return "MismatchedWaist";
        case ErrorCode::ResonanceCrossed: return "ResonanceCrossed";
        case ErrorCode::SubspaceTooLarge: return "SubspaceTooLarge";
        case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- SpinLength

SpinLength SpinLength::from_n(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    return SpinLength{n - 1};
}

SpinLength SpinLength::from_J(double J) {
    const double tj = 2.0 * J;
    const long r = std::lround(tj);
    if (J < 0 || std::abs(tj - static_cast<double>(r)) > 1e-12)
        throw Error(ErrorCode::InvalidArgument, "J must be a non-negative half-integer");
    return SpinLength{static_cast<int>(r)};
}

const char* manifold_kind_name(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::Full: return "Full";
        case ManifoldKind::Triangular: return "Triangular";
        case ManifoldKind::EdgeA: return "EdgeA";
        case ManifoldKind::EdgeB: return "EdgeB";
        case ManifoldKind::Vertical: return "Vertical";
    }
    return "?";
}

// ------------------------------------------------------------- ManifoldBasis

ManifoldBasis::ManifoldBasis(SpinLength s, ManifoldKind k, int lstar)
    : spin_(s), kind_(k), lstar_(lstar) {
    table_.assign(static_cast<std::size_t>(s.n()) * s.n(), -1);
}

template <class Pred>
void ManifoldBasis::fill(Pred keep) {
    const int tj = spin_.twoJ;
    for (int a = -tj; a <= tj; a += 2)
        for (int b = -tj; b <= tj; b += 2)
            if (keep(a, b)) {
                table_[static_cast<std::size_t>((a + tj) / 2) * spin_.n() + (b + tj) / 2] =
                    static_cast<long>(states_.size());
                states_.emplace_back(a, b);
            }
}

ManifoldBasis ManifoldBasis::full(SpinLength s) {
    ManifoldBasis b(s, ManifoldKind::Full, 0);
    b.fill([](int, int) { return true; });
    return b;
}

ManifoldBasis ManifoldBasis::triangular(SpinLength s, int lstar) {
    ManifoldBasis b(s, ManifoldKind::Triangular, lstar);
    b.fill([lstar](int a, int bb) { return a + bb >= 2 * lstar; });
    return b;
}

ManifoldBasis ManifoldBasis::edge_a(SpinLength s, int lstar) {
    ManifoldBasis b(s, ManifoldKind::EdgeA, lstar);
    const int tj = s.twoJ;
    b.fill([tj, lstar](int a, int bb) { return bb == tj && a + tj >= 2 * lstar; });
    return b;
}

ManifoldBasis ManifoldBasis::edge_b(SpinLength s, int lstar) {
    ManifoldBasis b(s, ManifoldKind::EdgeB, lstar);
    const int tj = s.twoJ;
    b.fill([tj, lstar](int a, int bb) { return a == tj && bb + tj >= 2 * lstar; });
    return b;
}

ManifoldBasis ManifoldBasis::vertical(SpinLength s, int lstar) {
    ManifoldBasis b(s, ManifoldKind::Vertical, lstar);
    b.fill([lstar](int a, int bb) { return a + bb == 2 * lstar; });
    return b;
}

long ManifoldBasis::index2(int two_ma, int two_mb) const {
    const int tj = spin_.twoJ;
    if (two_ma < -tj || two_ma > tj || two_mb < -tj || two_mb > tj) return -1;
    if (((two_ma + tj) & 1) || ((two_mb + tj) & 1)) return -1;
    return table_[static_cast<std::size_t>((two_ma + tj) / 2) * spin_.n() + (two_mb + tj) / 2];
}

long ManifoldBasis::index(double ma, double mb) const {
    return index2(static_cast<int>(std::lround(2 * ma)), static_cast<int>(std::lround(2 * mb)));
}

// ------------------------------------------------------------ SparseOperator

SparseOperator::SparseOperator(std::size_t dim) : dim_(dim), hermitian_(true) {
    rowptr_.assign(dim + 1, 0);
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> t,
                                             bool hermitian) {
    for (const auto& e : t)
        if (e.row < 0 || e.col < 0 || static_cast<std::size_t>(e.row) >= dim ||
            static_cast<std::size_t>(e.col) >= dim)
            throw Error(ErrorCode::DimensionMismatch, "triplet index out of range");
    std::sort(t.begin(), t.end(), [](const Triplet& x, const Triplet& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    SparseOperator op;
    op.dim_ = dim;
    op.hermitian_ = hermitian;
    op.rowptr_.assign(dim + 1, 0);
    op.col_.reserve(t.size());
    op.val_.reserve(t.size());
    std::size_t i = 0;
    while (i < t.size()) {
        std::size_t j = i;
        cplx s = 0.0;
        while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) s += t[j++].val;
        if (s != cplx(0.0)) {
            op.col_.push_back(static_cast<std::int32_t>(t[i].col));
            op.val_.push_back(s);
            op.rowptr_[t[i].row + 1]++;
        }
        i = j;
    }
    std::partial_sum(op.rowptr_.begin(), op.rowptr_.end(), op.rowptr_.begin());
    if (hermitian && op.nnz() < 4'000'000) {
        const double d = op.hermiticity_defect();
        if (d > 1e-12 * std::max(1.0, op.max_abs()))
            throw Error(ErrorCode::InvalidArgument,
                        "operator flagged hermitian has defect " + std::to_string(d));
    }
    return op;
}

SparseOperator SparseOperator::from_csr(std::size_t dim, std::vector<std::int64_t> rowptr,
                                        std::vector<std::int32_t> col, std::vector<cplx> val,
                                        bool hermitian) {
    if (rowptr.size() != dim + 1 || col.size() != val.size() ||
        static_cast<std::size_t>(rowptr.back()) != val.size())
        throw Error(ErrorCode::DimensionMismatch, "inconsistent CSR arrays");
    SparseOperator op;
    op.dim_ = dim;
    op.hermitian_ = hermitian;
    op.rowptr_ = std::move(rowptr);
    op.col_ = std::move(col);
    op.val_ = std::move(val);
    return op;
}

SparseOperator SparseOperator::identity(std::size_t dim) {
    return diagonal(std::vector<cplx>(dim, 1.0), true);
}

SparseOperator SparseOperator::diagonal(const std::vector<cplx>& d, bool hermitian) {
    std::vector<Triplet> t;
    t.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        t.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i), d[i]});
    return from_triplets(d.size(), std::move(t), hermitian);
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXcd& m, double drop_tol) {
    std::vector<Triplet> t;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (std::abs(m(r, c)) > drop_tol) t.push_back({r, c, m(r, c)});
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    return from_triplets(static_cast<std::size_t>(m.rows()), std::move(t),
                         herm <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()));
}

std::vector<Triplet> SparseOperator::triplets() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t r = 0; r < dim_; ++r)
        for (auto k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
            t.push_back({static_cast<std::int64_t>(r), col_[k], val_[k]});
    return t;
}

cplx SparseOperator::at(std::size_t r, std::size_t c) const {
    auto b = col_.begin() + rowptr_[r], e = col_.begin() + rowptr_[r + 1];
    auto it = std::lower_bound(b, e, static_cast<std::int32_t>(c));
    if (it != e && *it == static_cast<std::int32_t>(c)) return val_[it - col_.begin()];
    return 0.0;
}

kern::CsrView SparseOperator::view() const {
    return {dim_, rowptr_.data(), col_.data(), val_.data()};
}

void SparseOperator::apply(const cplx* x, cplx* y) const { kern::csr_matvec(view(), x, y); }

CVec SparseOperator::apply(const CVec& x) const {
    if (x.size() != dim_)
        throw Error(ErrorCode::DimensionMismatch,
                    "vector length " + std::to_string(x.size()) + " vs dim " + std::to_string(dim_));
    CVec y(dim_);
    apply(x.data(), y.data());
    return y;
}

SparseOperator SparseOperator::adjoint() const {
    std::vector<Triplet> t = triplets();
    for (auto& e : t) {
        std::swap(e.row, e.col);
        e.val = std::conj(e.val);
    }
    SparseOperator r = from_triplets(dim_, std::move(t), false);
    r.hermitian_ = hermitian_;
    return r;
}

SparseOperator SparseOperator::scaled(cplx s) const {
    SparseOperator o = *this;
    for (auto& v : o.val_) v *= s;
    o.hermitian_ = hermitian_ && s.imag() == 0.0;
    return o;
}

SparseOperator SparseOperator::plus(const SparseOperator& o, cplx s) const {
    if (o.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "operator sum");
    std::vector<std::int64_t> rp(dim_ + 1, 0);
    std::vector<std::int32_t> cc;
    std::vector<cplx> vv;
    cc.reserve(nnz() + o.nnz());
    vv.reserve(nnz() + o.nnz());
    for (std::size_t r = 0; r < dim_; ++r) {
        auto i = rowptr_[r], ie = rowptr_[r + 1];
        auto j = o.rowptr_[r], je = o.rowptr_[r + 1];
        while (i < ie || j < je) {
            std::int32_t c;
            cplx v;
            if (j >= je || (i < ie && col_[i] < o.col_[j])) {
                c = col_[i];
                v = val_[i++];
            } else if (i >= ie || o.col_[j] < col_[i]) {
                c = o.col_[j];
                v = s * o.val_[j++];
            } else {
                c = col_[i];
                v = val_[i++] + s * o.val_[j++];
            }
            if (v != cplx(0.0)) {
                cc.push_back(c);
                vv.push_back(v);
            }
        }
        rp[r + 1] = static_cast<std::int64_t>(vv.size());
    }
    return from_csr(dim_, std::move(rp), std::move(cc), std::move(vv),
                    hermitian_ && o.hermitian_ && s.imag() == 0.0);
}

SparseOperator SparseOperator::times(const SparseOperator& o) const {
    if (o.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "operator product");
    std::vector<cplx> acc(dim_, 0.0);
    std::vector<char> used(dim_, 0);
    std::vector<std::int32_t> touched;
    std::vector<std::int64_t> rp(dim_ + 1, 0);
    std::vector<std::int32_t> cc;
    std::vector<cplx> vv;
    for (std::size_t r = 0; r < dim_; ++r) {
        touched.clear();
        for (auto k = rowptr_[r]; k < rowptr_[r + 1]; ++k) {
            const auto mid = col_[k];
            for (auto q = o.rowptr_[mid]; q < o.rowptr_[mid + 1]; ++q) {
                const auto c = o.col_[q];
                if (!used[c]) {
                    used[c] = 1;
                    touched.push_back(c);
                }
                acc[c] += val_[k] * o.val_[q];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto c : touched) {
            if (acc[c] != cplx(0.0)) {
                cc.push_back(c);
                vv.push_back(acc[c]);
            }
            acc[c] = 0.0;
            used[c] = 0;
        }
        rp[r + 1] = static_cast<std::int64_t>(vv.size());
    }
    return from_csr(dim_, std::move(rp), std::move(cc), std::move(vv), false);
}

SparseOperator SparseOperator::power(int k) const {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative operator power");
    SparseOperator r = identity(dim_);
    for (int i = 0; i < k; ++i) r = r.times(*this);
    return r;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (auto k = rowptr_[r]; k < rowptr_[r + 1]; ++k) m(r, col_[k]) = val_[k];
    return m;
}

double SparseOperator::hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (auto k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
            d = std::max(d, std::abs(val_[k] - std::conj(at(col_[k], r))));
    return d;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& v : val_) m = std::max(m, std::abs(v));
    return m;
}

double SparseOperator::inf_norm() const {
    double m = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (auto k = rowptr_[r]; k < rowptr_[r + 1]; ++k) s += std::abs(val_[k]);
        m = std::max(m, s);
    }
    return m;
}

cplx SparseOperator::expectation(const CVec& psi) const {
    CVec h = apply(psi);
    return kern::dotc(dim_, psi.data(), h.data());
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) { return a.plus(b); }
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    return a.plus(b, -1.0);
}
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) { return a.times(b); }
SparseOperator operator*(cplx s, const SparseOperator& a) { return a.scaled(s); }
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
    return a.times(b) - b.times(a);
}

// ------------------------------------------------------------------ builders

double ladder_plus(int twoJ, int two_m) {
    // J(J+1) - m(m+1) = (J - m)(J + m + 1)
    const double v = 0.25 * (twoJ - two_m) * (twoJ + two_m + 2);
    return v > 0 ? std::sqrt(v) : 0.0;
}

SparseOperator build_jz(const ManifoldBasis& basis, Species which) {
    std::vector<cplx> d(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        d[i] = which == Species::a ? basis.ma(i) : basis.mb(i);
    return SparseOperator::diagonal(d, true);
}

SparseOperator build_jpm(const ManifoldBasis& basis, Species which, Ladder sign) {
    const int tj = basis.spin().twoJ;
    const int step = sign == Ladder::plus ? 2 : -2;
    std::vector<Triplet> t;
    t.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        int a = basis.two_ma(i), b = basis.two_mb(i);
        const int m = which == Species::a ? a : b;
        const double c = sign == Ladder::plus ? ladder_plus(tj, m) : ladder_plus(tj, m - 2);
        if (c == 0.0) continue;
        (which == Species::a ? a : b) += step;
        const long j = basis.index2(a, b);
        if (j < 0) continue;  // leaves the projected manifold
        t.push_back({j, static_cast<std::int64_t>(i), c});
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), false);
}

SparseOperator build_jx(const ManifoldBasis& basis, Species which) {
    return 0.5 * (build_jpm(basis, which, Ladder::plus) + build_jpm(basis, which, Ladder::minus));
}

SparseOperator build_jy(const ManifoldBasis& basis, Species which) {
    return cplx(0.0, -0.5) *
           (build_jpm(basis, which, Ladder::plus) - build_jpm(basis, which, Ladder::minus));
}

// -------------------------------------------------------------------- CGTable

double CGTable::coeff(int l, int two_ma, int two_mb) const {
    if (l < 0 || l > lmax()) return 0.0;
    const int two_ml = two_ma + two_mb;
    if (two_ml % 2 != 0) return 0.0;
    const int ml = two_ml / 2;
    if (ml < -l || ml > l) return 0.0;
    const auto& blk = blocks_[l][ml + l];
    const int k = (two_ma - lo_[l][ml + l]) / 2;
    if (k < 0 || k >= static_cast<int>(blk.size())) return 0.0;
    return blk[k];
}

CVec CGTable::state(const ManifoldBasis& basis, int l, int ml) const {
    if (basis.spin() != spin_) throw Error(ErrorCode::InvalidArgument, "CG table spin mismatch");
    CVec v(basis.size(), 0.0);
    const auto& blk = blocks_.at(l).at(ml + l);
    int a = lo_[l][ml + l];
    for (double c : blk) {
        const long i = basis.index2(a, 2 * ml - a);
        if (i < 0 && c != 0.0)
            throw Error(ErrorCode::BasisNotFull, "CG state needs states outside the basis");
        if (i >= 0) v[i] = c;
        a += 2;
    }
    return v;
}

double CGTable::orthonormality_defect() const {
    double d = 0.0;
    const int tj = spin_.twoJ;
    for (int ml = -tj; ml <= tj; ++ml) {
        for (int l1 = std::abs(ml); l1 <= tj; ++l1)
            for (int l2 = l1; l2 <= tj; ++l2) {
                double s = 0.0;
                const auto& b1 = blocks_[l1][ml + l1];
                const auto& b2 = blocks_[l2][ml + l2];
                for (std::size_t k = 0; k < b1.size() && k < b2.size(); ++k) s += b1[k] * b2[k];
                d = std::max(d, std::abs(s - (l1 == l2 ? 1.0 : 0.0)));
            }
    }
    return d;
}

CGTable cg_transform(SpinLength s, int n_limit) {
    if (s.n() > n_limit)
        throw Error(ErrorCode::InvalidArgument,
                    "n = " + std::to_string(s.n()) + " exceeds CG limit " + std::to_string(n_limit));
    const int tj = s.twoJ;
    CGTable t;
    t.spin_ = s;
    t.blocks_.resize(tj + 1);
    t.lo_.resize(tj + 1);
    for (int l = 0; l <= tj; ++l) {
        t.blocks_[l].resize(2 * l + 1);
        t.lo_[l].resize(2 * l + 1);
    }
    // Each m_l block of L^2 is tridiagonal in m_a with eigenvalues l(l+1); its
    // eigenvectors are the CG columns. Long lowering chains drift at n ~ 30, this does not.
    const double jj = s.casimir();
    for (int ml = 0; ml <= tj; ++ml) {
        const int lo = std::max(-tj, 2 * ml - tj), hi = std::min(tj, 2 * ml + tj);
        const int cnt = (hi - lo) / 2 + 1;
        Eigen::MatrixXd L2 = Eigen::MatrixXd::Zero(cnt, cnt);
        for (int k = 0; k < cnt; ++k) {
            const int a = lo + 2 * k, b = 2 * ml - a;
            L2(k, k) = 2.0 * jj + 0.5 * a * b;
            if (k + 1 < cnt) {
                // <m_a+1, m_b-1| J_a+ J_b- |m_a, m_b>
                const double v = ladder_plus(tj, a) * ladder_plus(tj, b - 2);
                L2(k + 1, k) = v;
                L2(k, k + 1) = v;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L2);
        for (int q = 0; q < cnt; ++q) {
            const int l = ml + q;  // eigenvalues ascend with l
            Eigen::VectorXd v = es.eigenvectors().col(q);
            // Condon-Shortley: component with m_a = J positive
            if (v(cnt - 1) < 0) v = -v;
            std::vector<double> c(v.data(), v.data() + cnt);
            t.blocks_[l][ml + l] = c;
            t.lo_[l][ml + l] = lo;
            if (ml > 0) {
                // <m_a m_b | l -m_l> = (-1)^{2J-l} <-m_a -m_b | l m_l>
                const double sg = ((tj - l) % 2 == 0) ? 1.0 : -1.0;
                std::vector<double> r(cnt);
                for (int k = 0; k < cnt; ++k) r[k] = sg * c[cnt - 1 - k];
                t.blocks_[l][-ml + l] = std::move(r);
                t.lo_[l][-ml + l] = -hi;
            }
        }
    }
    const double d = t.orthonormality_defect();
    if (d > 1e-9)
        throw Error(ErrorCode::CGOverflow, "CG recursion lost orthonormality: " + std::to_string(d));
    return t;
}

// ------------------------------------------------------------------ vectors

CVec apply(const SparseOperator& op, const CVec& v) { return op.apply(v); }

double norm(const CVec& v) { return kern::norm2(v.size(), v.data()); }

void normalize(CVec& v) {
    const double n = norm(v);
    if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize zero vector");
    kern::scale(v.size(), 1.0 / n, v.data());
}

cplx inner(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "inner product");
    return kern::dotc(a.size(), a.data(), b.data());
}

}  // namespace ryd
