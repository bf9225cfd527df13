#pragma once
// SPDX-License-Identifier: Apache-2.0
// Tweezer geometries and many-body Hamiltonian assembly.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "rydsim/drive.hpp"
#include "rydsim/manifold.hpp"
#include "rydsim/spinops.hpp"

namespace ryd {

enum class Boundary { Open, PeriodicRing };
enum class Truncation { NearestNeighbor, PowerLawCutoff, Full };

struct InteractionRange {
    Truncation kind = Truncation::Full;
    double r_max = 0.0;  // PowerLawCutoff: keep pairs with R <= r_max (same length unit as positions)
};

struct PairGeometry {
    int i = 0, j = 0;
    double R = 0.0;
    double theta = 0.0;  // angle to the field axis z
    double phi = 0.0;    // azimuth in the x-y plane
    double V = 0.0;      // rad/s, or scaled units when built from a reference coupling
};

// (3 n e a0)^2 / (16 pi eps0 R^3) / hbar, R in metres.
double dipole_coupling(int n, double R);

struct LatticeGeometry {
    std::vector<std::array<double, 3>> positions;  // m
    Boundary boundary = Boundary::Open;
    double period = 0.0;  // ring length along x for PeriodicRing
    int n = 0;            // principal quantum number entering V_ij

    static LatticeGeometry chain(int N, double spacing, Boundary b, int n = 0);
    int size() const { return static_cast<int>(positions.size()); }
    PairGeometry pair(int i, int j) const;  // minimum image for rings; throws CoincidentAtoms
    // Pairs i < j, V from the principal number n.
    std::vector<PairGeometry> pairs(const InteractionRange& r = {}) const;
    // Same, with V_ij = V_ref (R_min / R_ij)^3 where R_min is the shortest pair distance.
    std::vector<PairGeometry> scaled_pairs(double V_ref, const InteractionRange& r = {}) const;
};

// Row-compressed local operator, cheap to index by row during assembly.
struct SiteOp {
    int dim = 0;
    std::vector<std::vector<std::pair<int, cplx>>> rows;
    static SiteOp from(const SparseOperator& op);
};

// Assembles operators on (site dim)^N directly in compressed rows, site 0 most significant.
class ManyBodyBuilder {
public:
    ManyBodyBuilder(int sites, int site_dim);
    int sites() const { return sites_; }
    int site_dim() const { return d_; }
    std::size_t dim() const { return dim_; }

    void add_local(int site, const SparseOperator& op, cplx c = 1.0);
    void add_pair(int i, const SparseOperator& A, int j, const SparseOperator& B, cplx c = 1.0);
    SparseOperator build(bool hermitian) const;

private:
    struct PairTerm {
        int i, j;
        std::shared_ptr<SiteOp> A, B;
        cplx c;
    };
    int sites_, d_;
    std::size_t dim_;
    std::vector<SparseOperator> local_;  // summed per site
    std::vector<PairTerm> pairs_;
};

// Single operator on one site of an N-site register.
SparseOperator embed(const SparseOperator& op, int site, int sites);

std::size_t checked_dimension(int site_dim, int sites, std::size_t budget = 20000000);

// Two-atom dipole-dipole operator on basis (x) basis (all four blocks, full angular form).
SparseOperator build_dd(const LatticeGeometry& g, const ManifoldBasis& basis, int i, int j);
SparseOperator build_dd_pair(const ManifoldBasis& basis, const PairGeometry& p);

struct SiteDrive {
    MWDrive mw;
    std::vector<PonderoTerm> pondero;
};

// Triangular-manifold model; one SiteDrive for all sites or one per site.
SparseOperator build_Ht(const LatticeGeometry& g, const ManifoldBasis& basis, const std::vector<SiteDrive>& drives,
                        const InteractionRange& range = {});
SparseOperator build_Ht_pairs(int sites, const ManifoldBasis& basis, const std::vector<SiteDrive>& drives,
                              const std::vector<PairGeometry>& pairs);

struct EdgeSiteTerms {
    double delta_a = 0.0;
    double chi = 0.0;
    std::vector<PonderoTerm> pondero;  // kappa_b ignored (b is frozen at J)
};

// Edge-manifold XXZ model with couplings from geometry.
SparseOperator build_Ha(const LatticeGeometry& g, const ManifoldBasis& basis, const EdgeSiteTerms& site,
                        const InteractionRange& range = {});
// Same, with explicit pair couplings (scaled units). `ising` toggles the J_z J_z part.
SparseOperator build_Ha_pairs(int sites, const ManifoldBasis& basis, const SparseOperator& single_site,
                              const std::vector<PairGeometry>& pairs, bool ising = true);
SparseOperator edge_single_site(const ManifoldBasis& basis, const EdgeSiteTerms& site);

struct HPCoupling {
    int i = 0, j = 0;
    double h = 0.0;  // hopping
    cplx w = 0.0;    // pair gain/loss
    double U = 0.0;  // density-density
};

// Expansion of the triangular model around the circular state:
// h = J V / 2, w = 3 J V e^{-2 i phi}, U = V.
HPCoupling hp_from_spin(double J, const PairGeometry& p);

struct HPModel {
    int sites = 2;
    int nmax = 2;  // per mode
    double delta_a = 0.0, delta_b = 0.0;
    std::vector<HPCoupling> couplings;
    bool pair_terms = true;
    bool density_terms = true;
};

// Sites are (a, b) mode pairs; local index = n_a * (nmax+1) + n_b.
SparseOperator build_hp(const HPModel& m);
SparseOperator build_hp(const LatticeGeometry& g, double J, double delta_a, double delta_b, int nmax,
                        const InteractionRange& range = {});
// Number operators on the HP register.
SparseOperator hp_number(const HPModel& m, int site, Species s);

// --- symmetry sectors

// True when H only connects states with equal charge.
bool conserves(const SparseOperator& H, const std::vector<double>& charge, double tol = 1e-12);
struct Sector {
    std::vector<std::int64_t> states;  // indices into the full space
    SparseOperator H;
};
Sector restrict_to_sector(const SparseOperator& H, const std::vector<double>& charge, double value);
// Sum over sites of a diagonal site operator, as a vector over the product space.
std::vector<double> total_charge(const std::vector<double>& site_values, int sites);

// --- state dumps: "RYDSTATE" magic, u32 version, u64 dim, u32 tag length, tag bytes,
// then dim pairs of little-endian doubles (re, im).
void save_state(const std::string& path, const CVec& psi, const std::string& ordering_tag);
CVec load_state(const std::string& path, std::string* ordering_tag = nullptr);

}  // namespace ryd
