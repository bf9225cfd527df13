#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/error.hpp"
#include "rydsim/kernels.hpp"

namespace ryd {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Half-integer spin stored as 2J. n = 2J + 1 is the principal quantum number.
struct SpinLength {
    int twoJ = 0;

    static SpinLength from_n(int n);
    static SpinLength from_J(double J);
    double J() const { return 0.5 * twoJ; }
    int n() const { return twoJ + 1; }
    double casimir() const { return J() * (J() + 1.0); }
    bool operator==(const SpinLength&) const = default;
};

enum class ManifoldKind { Full, Triangular, EdgeA, EdgeB, Vertical };
enum class Species { a, b };
enum class Ladder { plus, minus };

const char* manifold_kind_name(ManifoldKind k);

// States |J, m_a, m_b> of one atom, ordered lexicographically ascending in (m_a, m_b).
// Quantum numbers are kept doubled so half-integers stay exact.
class ManifoldBasis {
public:
    static ManifoldBasis full(SpinLength s);
    static ManifoldBasis triangular(SpinLength s, int lstar);
    static ManifoldBasis edge_a(SpinLength s, int lstar);
    static ManifoldBasis edge_b(SpinLength s, int lstar);
    static ManifoldBasis vertical(SpinLength s, int lstar);

    SpinLength spin() const { return spin_; }
    ManifoldKind kind() const { return kind_; }
    int lstar() const { return lstar_; }
    std::size_t size() const { return states_.size(); }

    int two_ma(std::size_t i) const { return states_[i].first; }
    int two_mb(std::size_t i) const { return states_[i].second; }
    double ma(std::size_t i) const { return 0.5 * states_[i].first; }
    double mb(std::size_t i) const { return 0.5 * states_[i].second; }
    // -1 when (m_a, m_b) is outside this basis.
    long index2(int two_ma, int two_mb) const;
    long index(double ma, double mb) const;

private:
    ManifoldBasis(SpinLength s, ManifoldKind k, int lstar);
    template <class Pred>
    void fill(Pred keep);

    SpinLength spin_;
    ManifoldKind kind_;
    int lstar_;
    std::vector<std::pair<int, int>> states_;
    std::vector<long> table_;  // n x n, row = m_a
};

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx val;
};

// Complex sparse matrix in compressed rows. Immutable once built.
class SparseOperator {
public:
    SparseOperator() = default;
    explicit SparseOperator(std::size_t dim);  // zero operator

    // Duplicates are summed, explicit zeros dropped. When `hermitian` is set the
    // claim is verified for operators small enough to check cheaply.
    static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> t, bool hermitian);
    static SparseOperator identity(std::size_t dim);
    static SparseOperator diagonal(const std::vector<cplx>& d, bool hermitian);
    static SparseOperator from_dense(const Eigen::MatrixXcd& m, double drop_tol = 0.0);
    // Takes ownership of already-sorted CSR arrays (no duplicate columns per row).
    static SparseOperator from_csr(std::size_t dim, std::vector<std::int64_t> rowptr,
                                   std::vector<std::int32_t> col, std::vector<cplx> val,
                                   bool hermitian);

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return val_.size(); }
    bool hermitian() const { return hermitian_; }

    std::vector<Triplet> triplets() const;
    cplx at(std::size_t r, std::size_t c) const;
    kern::CsrView view() const;

    void apply(const cplx* x, cplx* y) const;
    CVec apply(const CVec& x) const;

    SparseOperator adjoint() const;
    SparseOperator scaled(cplx s) const;
    SparseOperator plus(const SparseOperator& o, cplx s = 1.0) const;  // this + s*o
    SparseOperator times(const SparseOperator& o) const;               // this * o
    SparseOperator power(int k) const;

    Eigen::MatrixXcd to_dense() const;
    double hermiticity_defect() const;  // max |A - A^dagger|
    double max_abs() const;
    double inf_norm() const;            // max absolute row sum, bounds the spectral radius
    cplx expectation(const CVec& psi) const;

private:
    std::size_t dim_ = 0;
    bool hermitian_ = false;
    std::vector<std::int64_t> rowptr_{0};
    std::vector<std::int32_t> col_;
    std::vector<cplx> val_;
};

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(cplx s, const SparseOperator& a);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

SparseOperator build_jz(const ManifoldBasis& basis, Species which);
SparseOperator build_jpm(const ManifoldBasis& basis, Species which, Ladder sign);
// x and y components from the ladder pair; projected like the ladders themselves.
SparseOperator build_jx(const ManifoldBasis& basis, Species which);
SparseOperator build_jy(const ManifoldBasis& basis, Species which);

// sqrt(J(J+1) - m(m+1)), with doubled arguments.
double ladder_plus(int twoJ, int two_m);

// <J m_a; J m_b | l m_l>, Condon-Shortley phases.
class CGTable {
public:
    SpinLength spin() const { return spin_; }
    int lmax() const { return spin_.twoJ; }
    // Coefficient for doubled m_a, m_b; zero when selection rules fail.
    double coeff(int l, int two_ma, int two_mb) const;
    // |l, m_l> expanded over the given basis (which must contain every needed state).
    CVec state(const ManifoldBasis& basis, int l, int ml) const;
    double orthonormality_defect() const;

    friend CGTable cg_transform(SpinLength s, int n_limit);

private:
    SpinLength spin_;
    // blocks_[l][ml + l] holds coefficients for m_a from lo_[l][ml + l] upward (doubled step 2)
    std::vector<std::vector<std::vector<double>>> blocks_;
    std::vector<std::vector<int>> lo_;
};

CGTable cg_transform(SpinLength s, int n_limit = 61);

// Free-function form of SparseOperator::apply.
CVec apply(const SparseOperator& op, const CVec& v);

double norm(const CVec& v);
void normalize(CVec& v);
cplx inner(const CVec& a, const CVec& b);  // <a|b>

}  // namespace ryd
