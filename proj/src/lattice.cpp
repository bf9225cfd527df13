// SPDX-License-Identifier: Apache-2.0
#include "rydsim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstring>
#include <fstream>

#include "rydsim/constants.hpp"

namespace ryd {

double dipole_coupling(int n, double R) {
    if (!(R > 0)) throw Error(ErrorCode::CoincidentAtoms, "pair distance must be positive");
    const double d = 3.0 * n * phys::e * phys::a0;
    return d * d / (16.0 * phys::pi * phys::eps0 * R * R * R) / phys::hbar;
}

LatticeGeometry LatticeGeometry::chain(int N, double spacing, Boundary b, int n) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "chain needs at least one site");
    if (!(spacing > 0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
    LatticeGeometry g;
    for (int i = 0; i < N; ++i) g.positions.push_back({i * spacing, 0.0, 0.0});
    g.boundary = b;
    g.period = N * spacing;
    g.n = n;
    return g;
}

PairGeometry LatticeGeometry::pair(int i, int j) const {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "pair needs two distinct sites");
    std::array<double, 3> d;
    for (int k = 0; k < 3; ++k) d[k] = positions.at(j)[k] - positions.at(i)[k];
    if (boundary == Boundary::PeriodicRing) {
        if (!(period > 0)) throw Error(ErrorCode::InvalidArgument, "ring period must be positive");
        d[0] -= period * std::round(d[0] / period);
    }
    PairGeometry p;
    p.i = i;
    p.j = j;
    p.R = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (p.R < 1e-15) throw Error(ErrorCode::CoincidentAtoms, "atoms " + std::to_string(i) + " and " +
                                                                 std::to_string(j) + " coincide");
    p.theta = std::acos(std::clamp(d[2] / p.R, -1.0, 1.0));
    p.phi = std::atan2(d[1], d[0]);
    p.V = n > 0 ? dipole_coupling(n, p.R) : 0.0;
    return p;
}

namespace {

std::vector<PairGeometry> select(const LatticeGeometry& g, const InteractionRange& r) {
    std::vector<PairGeometry> all;
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j) all.push_back(g.pair(i, j));
    if (all.empty()) return all;
    double rmin = all[0].R;
    for (const auto& p : all) rmin = std::min(rmin, p.R);
    std::vector<PairGeometry> out;
    for (const auto& p : all) {
        if (r.kind == Truncation::NearestNeighbor && p.R > rmin * (1 + 1e-9)) continue;
        if (r.kind == Truncation::PowerLawCutoff && p.R > r.r_max * (1 + 1e-12)) continue;
        out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<PairGeometry> LatticeGeometry::pairs(const InteractionRange& r) const { return select(*this, r); }

std::vector<PairGeometry> LatticeGeometry::scaled_pairs(double V_ref, const InteractionRange& r) const {
    auto all = select(*this, {});
    double rmin = all.empty() ? 1.0 : all[0].R;
    for (const auto& p : all) rmin = std::min(rmin, p.R);
    auto out = select(*this, r);
    for (auto& p : out) p.V = V_ref * std::pow(rmin / p.R, 3);
    return out;
}

// ---------------------------------------------------------------- assembly

SiteOp SiteOp::from(const SparseOperator& op) {
    SiteOp s;
    s.dim = static_cast<int>(op.dim());
    s.rows.resize(op.dim());
    const auto v = op.view();
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (auto k = v.rowptr[r]; k < v.rowptr[r + 1]; ++k) s.rows[r].push_back({v.col[k], v.val[k]});
    return s;
}

std::size_t checked_dimension(int site_dim, int sites, std::size_t budget) {
    long double d = 1;
    for (int i = 0; i < sites; ++i) d *= site_dim;
    if (d > static_cast<long double>(budget))
        throw Error(ErrorCode::EDBudgetExceeded,
                    "dimension " + std::to_string(static_cast<double>(d)) + " exceeds budget " + std::to_string(budget));
    if (d > 2147483647.0L) throw Error(ErrorCode::EDBudgetExceeded, "dimension exceeds 32-bit column index");
    return static_cast<std::size_t>(d);
}

ManyBodyBuilder::ManyBodyBuilder(int sites, int site_dim) : sites_(sites), d_(site_dim) {
    if (sites < 1 || site_dim < 1) throw Error(ErrorCode::InvalidArgument, "empty register");
    dim_ = checked_dimension(site_dim, sites, static_cast<std::size_t>(-1));
    local_.assign(sites, SparseOperator(site_dim));
}

void ManyBodyBuilder::add_local(int site, const SparseOperator& op, cplx c) {
    if (site < 0 || site >= sites_) throw Error(ErrorCode::InvalidArgument, "site out of range");
    if (static_cast<int>(op.dim()) != d_) throw Error(ErrorCode::DimensionMismatch, "local operator");
    local_[site] = local_[site].plus(op, c);
}

void ManyBodyBuilder::add_pair(int i, const SparseOperator& A, int j, const SparseOperator& B, cplx c) {
    if (i == j || i < 0 || j < 0 || i >= sites_ || j >= sites_)
        throw Error(ErrorCode::InvalidArgument, "pair sites");
    if (static_cast<int>(A.dim()) != d_ || static_cast<int>(B.dim()) != d_)
        throw Error(ErrorCode::DimensionMismatch, "pair operator");
    pairs_.push_back({i, j, std::make_shared<SiteOp>(SiteOp::from(A)), std::make_shared<SiteOp>(SiteOp::from(B)), c});
}

SparseOperator ManyBodyBuilder::build(bool hermitian) const {
    std::vector<std::int64_t> stride(sites_);
    stride[sites_ - 1] = 1;
    for (int s = sites_ - 2; s >= 0; --s) stride[s] = stride[s + 1] * d_;
    std::vector<SiteOp> loc;
    for (const auto& l : local_) loc.push_back(SiteOp::from(l));

    std::vector<std::int64_t> rowptr(dim_ + 1, 0);
    std::vector<std::int32_t> col;
    std::vector<cplx> val;
    std::vector<int> digit(sites_, 0);
    std::vector<std::pair<std::int64_t, cplx>> row;
    for (std::size_t R = 0; R < dim_; ++R) {
        row.clear();
        const std::int64_t r = static_cast<std::int64_t>(R);
        for (int s = 0; s < sites_; ++s)
            for (const auto& [c, v] : loc[s].rows[digit[s]]) row.push_back({r + (c - digit[s]) * stride[s], v});
        for (const auto& p : pairs_) {
            const int di = digit[p.i], dj = digit[p.j];
            for (const auto& [ci, vi] : p.A->rows[di])
                for (const auto& [cj, vj] : p.B->rows[dj])
                    row.push_back({r + (ci - di) * stride[p.i] + (cj - dj) * stride[p.j], p.c * vi * vj});
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < row.size();) {
            std::size_t q = k;
            cplx acc = 0.0;
            while (q < row.size() && row[q].first == row[k].first) acc += row[q++].second;
            if (acc != cplx(0.0)) {
                col.push_back(static_cast<std::int32_t>(row[k].first));
                val.push_back(acc);
            }
            k = q;
        }
        rowptr[R + 1] = static_cast<std::int64_t>(val.size());
        for (int s = sites_ - 1; s >= 0; --s) {
            if (++digit[s] < d_) break;
            digit[s] = 0;
        }
    }
    SparseOperator H = SparseOperator::from_csr(dim_, std::move(rowptr), std::move(col), std::move(val), hermitian);
    if (hermitian && dim_ <= 4096 && H.hermiticity_defect() > 1e-12 * std::max(1.0, H.max_abs()))
        throw Error(ErrorCode::InvalidArgument, "assembled operator is not hermitian");
    return H;
}

SparseOperator embed(const SparseOperator& op, int site, int sites) {
    ManyBodyBuilder b(sites, static_cast<int>(op.dim()));
    b.add_local(site, op);
    return b.build(op.hermitian());
}

// ------------------------------------------------------------ dipole-dipole

namespace {

struct SpinSet {
    SparseOperator x, y, z, p, m;
};

SpinSet spin_set(const ManifoldBasis& basis, Species s) {
    return {build_jx(basis, s), build_jy(basis, s), build_jz(basis, s), build_jpm(basis, s, Ladder::plus),
            build_jpm(basis, s, Ladder::minus)};
}

void check_planar(const PairGeometry& p) {
    if (std::abs(std::cos(p.theta)) > 1e-9)
        throw Error(ErrorCode::NonPlanarGeometry, "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                                      ") is not perpendicular to the field axis");
}

}  // namespace

SparseOperator build_dd_pair(const ManifoldBasis& basis, const PairGeometry& p) {
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    const double e[3] = {st * std::cos(p.phi), st * std::sin(p.phi), ct};
    const SpinSet a = spin_set(basis, Species::a), b = spin_set(basis, Species::b);
    ManyBodyBuilder mb(2, static_cast<int>(basis.size()));
    auto comp = [](const SpinSet& s, int k) -> const SparseOperator& { return k == 0 ? s.x : (k == 1 ? s.y : s.z); };
    // sign of each (species_i, species_j) block
    const struct {
        const SpinSet* u;
        const SpinSet* v;
        double sign;
    } blocks[4] = {{&a, &a, 1.0}, {&b, &b, 1.0}, {&a, &b, -1.0}, {&b, &a, -1.0}};
    for (const auto& blk : blocks)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                const double c = blk.sign * p.V * ((k == l ? 1.0 : 0.0) - 3.0 * e[k] * e[l]);
                if (std::abs(c) < 1e-300) continue;
                mb.add_pair(0, comp(*blk.u, k), 1, comp(*blk.v, l), c);
            }
    return mb.build(true);
}

SparseOperator build_dd(const LatticeGeometry& g, const ManifoldBasis& basis, int i, int j) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "build_dd needs i != j");
    return build_dd_pair(basis, g.pair(i, j));
}

// ------------------------------------------------------------ triangular model

SparseOperator build_Ht_pairs(int sites, const ManifoldBasis& basis, const std::vector<SiteDrive>& drives,
                              const std::vector<PairGeometry>& pairs) {
    if (!(drives.size() == 1 || static_cast<int>(drives.size()) == sites))
        throw Error(ErrorCode::InvalidArgument, "need one drive or one per site");
    ManyBodyBuilder mb(sites, static_cast<int>(basis.size()));
    for (int s = 0; s < sites; ++s) {
        const SiteDrive& d = drives.size() == 1 ? drives[0] : drives[s];
        SparseOperator h = build_mw(basis, d.mw);
        if (!d.pondero.empty()) h = h + build_pondero(basis, d.pondero);
        mb.add_local(s, h);
    }
    const SpinSet a = spin_set(basis, Species::a), b = spin_set(basis, Species::b);
    const SparseOperator dz = a.z - b.z;
    for (const auto& p : pairs) {
        check_planar(p);
        mb.add_pair(p.i, dz, p.j, dz, p.V);
        for (const SpinSet* s : {&a, &b}) {
            mb.add_pair(p.i, s->p, p.j, s->m, -0.25 * p.V);
            mb.add_pair(p.i, s->m, p.j, s->p, -0.25 * p.V);
        }
        // half of 3/2 per ordered pair, both orderings
        const cplx ph = 0.75 * p.V * std::exp(cplx(0, 2 * p.phi));
        mb.add_pair(p.i, a.p, p.j, b.p, ph);
        mb.add_pair(p.i, b.p, p.j, a.p, ph);
        mb.add_pair(p.i, a.m, p.j, b.m, std::conj(ph));
        mb.add_pair(p.i, b.m, p.j, a.m, std::conj(ph));
    }
    return mb.build(true);
}

SparseOperator build_Ht(const LatticeGeometry& g, const ManifoldBasis& basis, const std::vector<SiteDrive>& drives,
                        const InteractionRange& range) {
    return build_Ht_pairs(g.size(), basis, drives, g.pairs(range));
}

// ------------------------------------------------------------ edge model

SparseOperator edge_single_site(const ManifoldBasis& basis, const EdgeSiteTerms& t) {
    const SparseOperator jz = build_jz(basis, Species::a);
    SparseOperator h = jz.scaled(-t.delta_a);
    if (t.chi != 0.0) h = h.plus(jz.times(jz), t.chi);
    if (!t.pondero.empty()) {
        std::vector<PonderoTerm> pa;
        for (auto p : t.pondero) {
            p.kappa_b = 0;
            pa.push_back(p);
        }
        h = h + build_pondero(basis, pa);
    }
    return SparseOperator::from_triplets(h.dim(), h.triplets(), true);
}

SparseOperator build_Ha_pairs(int sites, const ManifoldBasis& basis, const SparseOperator& single_site,
                              const std::vector<PairGeometry>& pairs, bool ising) {
    ManyBodyBuilder mb(sites, static_cast<int>(basis.size()));
    for (int s = 0; s < sites; ++s) mb.add_local(s, single_site);
    const SparseOperator jz = build_jz(basis, Species::a);
    const SparseOperator jp = build_jpm(basis, Species::a, Ladder::plus);
    const SparseOperator jm = build_jpm(basis, Species::a, Ladder::minus);
    for (const auto& p : pairs) {
        if (ising) mb.add_pair(p.i, jz, p.j, jz, p.V);
        mb.add_pair(p.i, jp, p.j, jm, -0.25 * p.V);
        mb.add_pair(p.i, jm, p.j, jp, -0.25 * p.V);
    }
    return mb.build(true);
}

SparseOperator build_Ha(const LatticeGeometry& g, const ManifoldBasis& basis, const EdgeSiteTerms& site,
                        const InteractionRange& range) {
    if (basis.kind() != ManifoldKind::EdgeA) throw Error(ErrorCode::InvalidArgument, "build_Ha needs an EdgeA basis");
    auto pairs = g.pairs(range);
    for (const auto& p : pairs) check_planar(p);
    return build_Ha_pairs(g.size(), basis, edge_single_site(basis, site), pairs, true);
}

// ------------------------------------------------------------ HP bosons

HPCoupling hp_from_spin(double J, const PairGeometry& p) {
    return {p.i, p.j, 0.5 * J * p.V, 3.0 * J * p.V * std::exp(cplx(0, -2 * p.phi)), p.V};
}

namespace {

struct BosonOps {
    SparseOperator ca, cb, na, nb;
};

BosonOps boson_ops(int nmax) {
    const int q = nmax + 1, d = q * q;
    std::vector<Triplet> ta, tb;
    std::vector<cplx> na(d), nb(d);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
            const int i = a * q + b;
            na[i] = a;
            nb[i] = b;
            if (a > 0) ta.push_back({(a - 1) * q + b, i, std::sqrt(static_cast<double>(a))});
            if (b > 0) tb.push_back({a * q + b - 1, i, std::sqrt(static_cast<double>(b))});
        }
    return {SparseOperator::from_triplets(d, ta, false), SparseOperator::from_triplets(d, tb, false),
            SparseOperator::diagonal(na, true), SparseOperator::diagonal(nb, true)};
}

}  // namespace

SparseOperator build_hp(const HPModel& m) {
    if (m.nmax < 1) throw Error(ErrorCode::InvalidArgument, "boson cutoff must be >= 1");
    const BosonOps o = boson_ops(m.nmax);
    const SparseOperator cad = o.ca.adjoint(), cbd = o.cb.adjoint();
    const SparseOperator dn = o.na - o.nb;
    ManyBodyBuilder mb(m.sites, static_cast<int>(o.na.dim()));
    SparseOperator loc = o.na.scaled(-m.delta_a).plus(o.nb, -m.delta_b);
    for (int s = 0; s < m.sites; ++s) mb.add_local(s, loc);
    for (const auto& c : m.couplings) {
        for (const auto* pr : {&o.ca, &o.cb}) {
            const SparseOperator dag = pr->adjoint();
            mb.add_pair(c.i, dag, c.j, *pr, -c.h);
            mb.add_pair(c.j, dag, c.i, *pr, -c.h);
        }
        if (m.pair_terms && c.w != 0.0) {
            // (1/2) sum_{i != j}: both orderings, each with w/2
            mb.add_pair(c.i, cad, c.j, cbd, 0.5 * c.w);
            mb.add_pair(c.j, cad, c.i, cbd, 0.5 * c.w);
            mb.add_pair(c.i, o.ca, c.j, o.cb, 0.5 * std::conj(c.w));
            mb.add_pair(c.j, o.ca, c.i, o.cb, 0.5 * std::conj(c.w));
        }
        if (m.density_terms && c.U != 0.0) mb.add_pair(c.i, dn, c.j, dn, c.U);
    }
    return mb.build(true);
}

SparseOperator build_hp(const LatticeGeometry& g, double J, double delta_a, double delta_b, int nmax,
                        const InteractionRange& range) {
    HPModel m;
    m.sites = g.size();
    m.nmax = nmax;
    m.delta_a = delta_a;
    m.delta_b = delta_b;
    for (const auto& p : g.pairs(range)) m.couplings.push_back(hp_from_spin(J, p));
    return build_hp(m);
}

SparseOperator hp_number(const HPModel& m, int site, Species s) {
    const BosonOps o = boson_ops(m.nmax);
    return embed(s == Species::a ? o.na : o.nb, site, m.sites);
}

// ------------------------------------------------------------ sectors

bool conserves(const SparseOperator& H, const std::vector<double>& q, double tol) {
    if (q.size() != H.dim()) throw Error(ErrorCode::DimensionMismatch, "charge vector");
    const auto v = H.view();
    for (std::size_t r = 0; r < H.dim(); ++r)
        for (auto k = v.rowptr[r]; k < v.rowptr[r + 1]; ++k)
            if (std::abs(q[r] - q[v.col[k]]) > tol && std::abs(v.val[k]) > 0.0) return false;
    return true;
}

Sector restrict_to_sector(const SparseOperator& H, const std::vector<double>& q, double value) {
    if (!conserves(H, q)) throw Error(ErrorCode::InvalidArgument, "operator does not conserve the charge");
    Sector s;
    std::vector<std::int64_t> map(H.dim(), -1);
    for (std::size_t i = 0; i < H.dim(); ++i)
        if (std::abs(q[i] - value) < 1e-9) {
            map[i] = static_cast<std::int64_t>(s.states.size());
            s.states.push_back(static_cast<std::int64_t>(i));
        }
    const auto v = H.view();
    std::vector<std::int64_t> rp{0};
    std::vector<std::int32_t> col;
    std::vector<cplx> val;
    for (auto r : s.states) {
        for (auto k = v.rowptr[r]; k < v.rowptr[r + 1]; ++k) {
            col.push_back(static_cast<std::int32_t>(map[v.col[k]]));
            val.push_back(v.val[k]);
        }
        rp.push_back(static_cast<std::int64_t>(val.size()));
    }
    s.H = SparseOperator::from_csr(s.states.size(), std::move(rp), std::move(col), std::move(val), H.hermitian());
    return s;
}

std::vector<double> total_charge(const std::vector<double>& site, int sites) {
    const std::size_t d = site.size();
    const std::size_t dim = checked_dimension(static_cast<int>(d), sites, static_cast<std::size_t>(-1));
    std::vector<double> q(dim, 0.0);
    for (std::size_t R = 0; R < dim; ++R) {
        std::size_t x = R;
        double s = 0.0;
        for (int k = 0; k < sites; ++k) {
            s += site[x % d];
            x /= d;
        }
        q[R] = s;
    }
    return q;
}

// ------------------------------------------------------------ state dumps

namespace {
constexpr char kMagic[8] = {'R', 'Y', 'D', 'S', 'T', 'A', 'T', 'E'};

template <class T>
void put_le(std::ofstream& f, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    f.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::ifstream& f) {
    unsigned char b[sizeof(T)];
    f.read(reinterpret_cast<char*>(b), sizeof(T));
    if (!f) throw Error(ErrorCode::InvalidArgument, "truncated state file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}
}  // namespace

void save_state(const std::string& path, const CVec& psi, const std::string& tag) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    f.write(kMagic, 8);
    put_le<std::uint32_t>(f, 1);
    put_le<std::uint64_t>(f, psi.size());
    put_le<std::uint32_t>(f, static_cast<std::uint32_t>(tag.size()));
    f.write(tag.data(), static_cast<std::streamsize>(tag.size()));
    for (const auto& z : psi) {
        put_le<double>(f, z.real());
        put_le<double>(f, z.imag());
    }
}

CVec load_state(const std::string& path, std::string* tag) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
    char m[8];
    f.read(m, 8);
    if (!f || std::memcmp(m, kMagic, 8) != 0) throw Error(ErrorCode::InvalidArgument, "not a state file");
    if (get_le<std::uint32_t>(f) != 1) throw Error(ErrorCode::InvalidArgument, "unknown state file version");
    const auto dim = get_le<std::uint64_t>(f);
    const auto tl = get_le<std::uint32_t>(f);
    std::string t(tl, '\0');
    f.read(t.data(), tl);
    if (tag) *tag = t;
    CVec psi(dim);
    for (auto& z : psi) {
        const double re = get_le<double>(f);
        const double im = get_le<double>(f);
        z = cplx(re, im);
    }
    return psi;
}

}  // namespace ryd
