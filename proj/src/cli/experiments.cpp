// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <random>

#include "rydsim/cli.hpp"
#include "rydsim/constants.hpp"
#include "rydsim/cv.hpp"
#include "rydsim/drive.hpp"
#include "rydsim/gates.hpp"
#include "rydsim/manifold.hpp"
#include "rydsim/qft.hpp"

namespace ryd::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double num(const RunContext& c, const char* k, double def = kNaN) {
    return c.d.params.contains(k) ? c.d.params[k].get<double>() : def;
}
int integer(const RunContext& c, const char* k, int def = 0) {
    return c.d.params.contains(k) ? c.d.params[k].get<int>() : def;
}
bool flag(const RunContext& c, const char* k, bool def = false) {
    return c.d.params.contains(k) ? c.d.params[k].get<bool>() : def;
}
std::vector<double> nums(const RunContext& c, const char* k) {
    return c.d.params.contains(k) ? c.d.params[k].get<std::vector<double>>() : std::vector<double>{};
}
std::vector<int> ints(const RunContext& c, const char* k) {
    return c.d.params.contains(k) ? c.d.params[k].get<std::vector<int>>() : std::vector<int>{};
}

std::vector<double> time_grid(double tmax, int steps) {
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) t[i] = tmax * i / steps;
    return t;
}

ParamSpec P(const char* k, ParamSpec::Kind kind, bool req, double lo = -1e300, double hi = 1e300) {
    return {k, kind, req, lo, hi};
}
constexpr auto Num = ParamSpec::Number;
constexpr auto Int = ParamSpec::Integer;
constexpr auto Bool = ParamSpec::Boolean;
constexpr auto Nums = ParamSpec::NumberList;
constexpr auto Ints = ParamSpec::IntegerList;

// --- single rotor -------------------------------------------------------

void cv_convergence(RunContext& c) {
    RingParticleParams p{num(c, "chi", 1.0), num(c, "omega"), num(c, "lambda", 0.0), integer(c, "kappa", 1),
                         num(c, "theta", 0.0)};
    const int levels = integer(c, "levels", 6);
    const auto cont = continuum_spectrum(p);
    const int nb = bound_state_count(p);
    const double spacing = std::sqrt(2.0 * p.chi * p.omega);
    std::vector<std::vector<double>> rows;
    json per_J = json::array();
    for (double J : nums(c, "J_list")) {
        const auto spin = spin_spectrum(p, SpinLength::from_J(J));
        double lowest = kNaN, worst = 0.0;
        for (int k = 0; k < levels && k < static_cast<int>(spin.size()); ++k) {
            const double dev = std::abs(spin[k] - cont.values[k]) / spacing;
            rows.push_back({J, double(k), spin[k], cont.values[k], dev});
            if (k == 0) lowest = dev;
            if (k < nb) worst = std::max(worst, dev);
        }
        per_J.push_back({{"J", J}, {"lowest_dev_over_spacing", lowest}, {"max_bound_dev_over_spacing", worst}});
    }
    c.write_csv(".csv", {"J", "level", "spin", "continuum", "dev_over_spacing"}, rows);
    c.summary["bound_states"] = nb;
    c.summary["continuum_cutoff"] = cont.m_cut;
    c.summary["per_J"] = per_J;
}

void cv_lambda_scan(RunContext& c) {
    const SpinLength s = SpinLength::from_J(num(c, "J"));
    const int levels = integer(c, "levels", 6);
    std::vector<std::vector<double>> rows;
    for (double lam : nums(c, "lambda_list")) {
        RingParticleParams p{num(c, "chi", 1.0), num(c, "omega", 0.0), lam, integer(c, "kappa", 1),
                             num(c, "theta", 0.0)};
        const auto spin = spin_spectrum(p, s);
        const auto cont = continuum_spectrum(p);
        for (int k = 0; k < levels && k < static_cast<int>(spin.size()); ++k)
            rows.push_back({lam, double(k), spin[k], cont.values[k]});
    }
    c.write_csv(".csv", {"lambda", "level", "spin", "continuum"}, rows);
}

// --- sine-Gordon ------------------------------------------------------------

void sg_gap_scaling(RunContext& c) {
    std::vector<SpinLength> Js;
    for (double J : nums(c, "J_list")) Js.push_back(SpinLength::from_J(J));
    const int N = integer(c, "N", 5), kappa = integer(c, "kappa", 1);
    const double chi = num(c, "chi", 1.0), V = num(c, "Vnn"), lam = num(c, "lambda");
    const auto with = sg_gap_benchmark(N, Js, chi, V, lam, kappa, true, c.opt.ed_budget);
    const auto without = sg_gap_benchmark(N, Js, chi, V, lam, kappa, false, c.opt.ed_budget);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < Js.size(); ++i) rows.push_back({with[i].J, with[i].gap, without[i].gap, with[i].oracle});
    c.write_csv(".csv", {"J", "gap_with_ising", "gap_without", "oracle"}, rows);
    c.summary["oracle"] = with.empty() ? kNaN : with.front().oracle;
    c.summary["final_rel_dev_without"] = without.empty() ? kNaN : without.back().gap / without.back().oracle - 1.0;
}

void sg_dispersion(RunContext& c) {
    const double chi = num(c, "chi", 1.0), lam = num(c, "lambda"), V = num(c, "Vnn");
    const int pts = integer(c, "points", 64);
    const double e0 = ewald_epsilon(0.0);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= pts; ++i) {
        const double q = phys::pi * i / pts;
        const double lr = std::sqrt(2.0 * chi * (lam + V * (e0 - ewald_epsilon(q))));
        rows.push_back({q, dispersion_nn(chi, lam, V, q), lr});
    }
    c.write_csv(".csv", {"q", "omega_nn", "omega_lr"}, rows);
}

ChainModel chain_from(const RunContext& c) {
    ChainModel m;
    m.N = integer(c, "N", 5);
    m.J = SpinLength::from_J(num(c, "J"));
    m.p.chi = num(c, "chi", 1.0);
    m.p.Vnn = num(c, "Vnn");
    m.p.omega = num(c, "omega", 0.0);
    m.p.kappa = integer(c, "kappa", 1);
    m.ising = flag(c, "ising", false);
    return m;
}

void sg_quench(RunContext& c) {
    ChainModel m = chain_from(c);
    const double alpha = num(c, "alpha");
    const auto times = time_grid(num(c, "t_max"), integer(c, "steps"));
    std::vector<std::vector<double>> series, fits;
    for (double lam : nums(c, "lambda_list")) {
        m.p.lambda = lam;
        const auto r = quench_gap(m, alpha, times, c.opt.ed_budget, true);
        for (std::size_t i = 0; i < r.t.size(); ++i) series.push_back({lam, r.t[i], r.jy[i]});
        const double w = r.fit ? r.fit->omega : kNaN;
        fits.push_back({lam, w, r.ed_gap, w / r.ed_gap - 1.0, r.fit ? r.fit->gamma : kNaN});
    }
    c.write_csv(".csv", {"lambda", "t", "jy"}, series);
    c.write_csv(".fit.csv", {"lambda", "fit_omega", "ed_gap", "rel_dev", "fit_gamma"}, fits);
}

void sg_vertex(RunContext& c) {
    const double chi = num(c, "chi", 1.0), V = num(c, "Vnn");
    const int N = integer(c, "N", 0);
    std::vector<std::vector<double>> rows;
    for (double lam : nums(c, "lambda_list"))
        rows.push_back({lam, vertex_expectation(chi, lam, V, N), std::exp(-0.5 * std::sqrt(chi / (2.0 * lam)))});
    c.write_csv(".csv", {"lambda", "vertex", "large_lambda_limit"}, rows);
}

void sg_masses(RunContext& c) {
    const double M0 = num(c, "M0", 1.0);
    std::vector<std::vector<double>> rows;
    for (double b2 : nums(c, "beta2_list")) {
        const auto m = sg_exact_masses(b2, M0);
        std::vector<double> r{b2, m.xi, m.soliton, double(m.breathers.size())};
        for (int k = 0; k < 3; ++k) r.push_back(k < static_cast<int>(m.breathers.size()) ? m.breathers[k] : kNaN);
        rows.push_back(r);
    }
    c.write_csv(".csv", {"beta2", "xi", "soliton", "n_breathers", "m1", "m2", "m3"}, rows);
}

void ewald_check(RunContext& c) {
    const auto fit = fit_ewald_constants(num(c, "qmin", 0.01), num(c, "qmax", 0.2), integer(c, "points", 40));
    EwaldOptions trunc;
    trunc.real_terms_cap = 1;
    const auto fit1 = fit_ewald_constants(num(c, "qmin", 0.01), num(c, "qmax", 0.2), integer(c, "points", 40), trunc);
    std::mt19937_64 rng(c.d.seed);
    std::uniform_real_distribution<double> U(0.0, 2.0 * phys::pi);
    const long jmax = static_cast<long>(num(c, "jmax", 1e6));
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (int i = 0; i < integer(c, "random_q", 20); ++i) {
        const double q = U(rng);
        const double e = ewald_epsilon(q);
        const auto d = ewald_direct(q, jmax);
        rows.push_back({q, e, d.value, d.tail_bound, e - d.value});
        worst = std::max(worst, std::abs(e - d.value));
    }
    c.write_csv(".csv", {"q", "ewald", "direct", "tail_bound", "diff"}, rows);
    c.summary["c2"] = fit.c2;
    c.summary["c2_prime"] = fit.c2p;
    c.summary["fit_rms"] = fit.rms;
    c.summary["c2_single_shell"] = fit1.c2;
    c.summary["max_abs_diff"] = worst;
}

// --- lattice gauge ---------------------------------------------------------------

void capacitor(RunContext& c) {
    CapacitorSpec s;
    s.N = integer(c, "N", 5);
    s.J = SpinLength::from_J(num(c, "J"));
    s.kappa = integer(c, "kappa", 4);
    s.chi = num(c, "chi", 1.0);
    s.Vnn = num(c, "Vnn");
    s.omega = num(c, "omega");
    s.lambda_from = num(c, "lambda_from");
    s.lambda_to = num(c, "lambda_to");
    s.theta_from = num(c, "theta_from", 0.0);
    s.theta_to = num(c, "theta_to", 0.0);
    const auto r = schwinger_capacitor(s, time_grid(num(c, "t_max"), integer(c, "steps")), c.opt.ed_budget);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        for (std::size_t i = 0; i < r.site_label.size(); ++i)
            rows.push_back({r.t[k], double(r.site_label[i]), r.jy[k][i], r.rho[k][i]});
    c.write_csv(".csv", {"t", "site", "jy", "rho"}, rows);
    const auto sp = map_schwinger(s.chi, s.Vnn, s.omega, std::max(s.lambda_from, s.lambda_to), s.kappa);
    c.summary["e_over_m"] = sp.e_over_m;
    c.summary["e_over_Lambda"] = sp.e_over_Lambda;
    c.summary["m_over_Lambda"] = sp.m_over_Lambda;
    c.summary["max_imag"] = r.max_imag;
    c.summary["warnings"] = r.warnings;
}

// --- gates ----------------------------------------------------------------------

void state_transfer(RunContext& c) {
    const int nmax = integer(c, "n_max", 3);
    const double V = num(c, "V", 1.0);
    std::vector<std::vector<double>> rows;
    double worst = 1.0;
    for (double J : nums(c, "J_list"))
        for (int ising = 0; ising <= 1; ++ising)
            for (int ni = 0; ni <= nmax; ++ni)
                for (int nj = 0; nj <= nmax; ++nj) {
                    TransferSpec t;
                    t.n_i = ni;
                    t.n_j = nj;
                    t.V = V;
                    const auto r = transfer_fidelity(SpinLength::from_J(J), t, ising == 1);
                    rows.push_back({J, double(ni), double(nj), double(ising), r.F, r.T});
                    if (ising) worst = std::min(worst, r.F);
                }
    c.write_csv(".csv", {"J", "n_i", "n_j", "ising", "F", "T"}, rows);
    c.summary["min_F_with_ising"] = worst;
}

// --- single atom --------------------------------------------------------------

void arp(RunContext& c) {
    const int n = integer(c, "n");
    const auto f = FieldConfig::from_ratios(n, num(c, "F_over_FIT"), num(c, "omegaZ_over_omegaS"));
    const auto basis = ManifoldBasis::full(SpinLength::from_n(n));
    const double O = num(c, "omega0_MHz") * 2.0 * phys::pi * 1e6;
    const auto proto = SweepProtocol::standard(num(c, "T_us") * 1e-6, num(c, "delta0_over_omega0", 1.0) * O, O);
    SweepOptions o;
    o.tol = num(c, "tol", 1e-8);
    const auto r = arp_sweep_vertical(basis, f, DefectModel::rb_defaults(), proto, ints(c, "two_ma"), o);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.two_ma.size(); ++i) rows.push_back({0.5 * r.two_ma[i], r.fidelity[i]});
    c.write_csv(".csv", {"m_a", "fidelity"}, rows);
    c.summary["steps"] = r.steps;
    c.summary["norm_drift"] = r.norm_drift;
    c.summary["warnings"] = r.warnings;
}

void pondero_oracle(RunContext& c) {
    std::vector<std::vector<double>> rows;
    for (int n : ints(c, "n_list")) {
        const auto r = pondero_oracle_smalln(n, integer(c, "kappa_a", 2), integer(c, "kappa_b", 0), integer(c, "eta", 0));
        rows.push_back({double(n), r.ratio, r.max_rel_dev, r.convergence});
    }
    c.write_csv(".csv", {"n", "W_over_M", "max_rel_dev", "convergence"}, rows);
}

std::map<std::string, Experiment> make_registry() {
    std::map<std::string, Experiment> r;
    r["cv_convergence"] = {"cv_convergence", "spin vs continuum rotor levels over J",
                           {P("chi", Num, false, 1e-12), P("omega", Num, true, 0), P("lambda", Num, false, 0),
                            P("kappa", Int, false, 1, 16), P("theta", Num, false), P("J_list", Nums, true, 0.5, 200),
                            P("levels", Int, false, 1, 100)},
                           cv_convergence};
    r["cv_lambda_scan"] = {"cv_lambda_scan", "rotor levels against the harmonic drive strength",
                           {P("chi", Num, false, 1e-12), P("omega", Num, false, 0), P("lambda_list", Nums, true, 0),
                            P("kappa", Int, false, 1, 16), P("theta", Num, false), P("J", Num, true, 0.5, 200),
                            P("levels", Int, false, 1, 100)},
                           cv_lambda_scan};
    r["sg_gap_scaling"] = {"sg_gap_scaling", "chain gap over J, with and without the Ising term",
                           {P("N", Int, false, 2, 12), P("J_list", Nums, true, 0.5, 30), P("chi", Num, false, 1e-12),
                            P("Vnn", Num, true), P("lambda", Num, true, 0), P("kappa", Int, false, 1, 8)},
                           sg_gap_scaling};
    r["sg_dispersion"] = {"sg_dispersion", "nearest-neighbour and dipolar dispersion",
                          {P("chi", Num, false, 1e-12), P("lambda", Num, true, 0), P("Vnn", Num, true),
                           P("points", Int, false, 2, 100000)},
                          sg_dispersion};
    r["sg_quench"] = {"sg_quench", "phase-tilt quench, fitted frequency vs Lanczos gap",
                      {P("N", Int, false, 2, 12), P("J", Num, true, 0.5, 30), P("chi", Num, false, 1e-12),
                       P("Vnn", Num, true), P("omega", Num, false), P("kappa", Int, false, 1, 8),
                       P("lambda_list", Nums, true, 0), P("alpha", Num, true), P("t_max", Num, true, 1e-12),
                       P("steps", Int, true, 4, 100000), P("ising", Bool, false)},
                      sg_quench};
    r["sg_vertex"] = {"sg_vertex", "free-theory vertex expectation",
                      {P("chi", Num, false, 1e-12), P("Vnn", Num, true), P("lambda_list", Nums, true, 1e-12),
                       P("N", Int, false, 0, 1000000)},
                      sg_vertex};
    r["sg_masses"] = {"sg_masses", "exact soliton and breather masses",
                      {P("beta2_list", Nums, true, 0), P("M0", Num, false, 1e-300)}, sg_masses};
    r["ewald_check"] = {"ewald_check", "Ewald sum against direct sums and small-q constants",
                        {P("qmin", Num, false, 1e-6, 1), P("qmax", Num, false, 1e-6, 3), P("points", Int, false, 4, 10000),
                         P("random_q", Int, false, 1, 10000), P("jmax", Num, false, 10, 1e9)},
                        ewald_check};
    r["schwinger_capacitor"] = {"schwinger_capacitor", "open-chain quench of the kappa-harmonic drive",
                                {P("N", Int, false, 2, 12), P("J", Num, true, 0.5, 30), P("kappa", Int, false, 1, 8),
                                 P("chi", Num, false, 1e-12), P("Vnn", Num, true), P("omega", Num, true),
                                 P("lambda_from", Num, true), P("lambda_to", Num, true), P("theta_from", Num, false),
                                 P("theta_to", Num, false), P("t_max", Num, true, 1e-12), P("steps", Int, true, 4, 100000)},
                                capacitor};
    r["state_transfer"] = {"state_transfer", "two-atom excitation transfer fidelities",
                           {P("J_list", Nums, true, 0.5, 500), P("n_max", Int, false, 0, 10), P("V", Num, false)},
                           state_transfer};
    r["arp_sweep"] = {"arp_sweep", "swept transfer to the edge states",
                      {P("n", Int, true, 2, 200), P("F_over_FIT", Num, true, 0, 1), P("omegaZ_over_omegaS", Num, true),
                       P("T_us", Num, true, 1e-6), P("omega0_MHz", Num, true, 1e-9), P("delta0_over_omega0", Num, false),
                       P("two_ma", Ints, true, -400, 400), P("tol", Num, false, 1e-14, 1)},
                      arp};
    r["pondero_oracle"] = {"pondero_oracle", "position-space check of ponderomotive elements",
                           {P("n_list", Ints, true, 2, 10), P("kappa_a", Int, false, -8, 8), P("kappa_b", Int, false, -8, 8),
                            P("eta", Int, false, 0, 4)},
                           pondero_oracle};
    return r;
}

}  // namespace

const std::map<std::string, Experiment>& registry() {
    static const std::map<std::string, Experiment> r = make_registry();
    return r;
}

}  // namespace ryd::cli
