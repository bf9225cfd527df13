// SPDX-License-Identifier: Apache-2.0
#include "rydsim/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ryd {

namespace {

using Mat = Eigen::MatrixXcd;

void random_fill(CVec& v, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    for (auto& x : v) x = cplx(g(rng), g(rng));
}

// Two passes of classical Gram-Schmidt. Coefficients accumulate into `coef` when given.
void orthogonalize(const std::vector<CVec>& basis, std::size_t count, CVec& w, cplx* coef) {
    const std::size_t n = w.size();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < count; ++i) {
            cplx h = kern::dotc(n, basis[i].data(), w.data());
            if (coef) coef[i] += h;
            kern::axpy(n, -h, basis[i].data(), w.data());
        }
    }
}

// Replaces V[0..p) by V[0..m) * S[:, 0..p), row block by row block.
void rotate_basis(std::vector<CVec>& V, std::size_t m, const Mat& S, std::size_t p) {
    const std::size_t n = V[0].size();
    constexpr std::size_t chunk = 2048;
    std::vector<cplx> buf(chunk * p);
    for (std::size_t r0 = 0; r0 < n; r0 += chunk) {
        const std::size_t r1 = std::min(n, r0 + chunk);
        std::fill(buf.begin(), buf.end(), cplx(0));
        for (std::size_t l = 0; l < m; ++l) {
            const cplx* src = V[l].data();
            for (std::size_t i = 0; i < p; ++i) {
                const cplx s = S(l, i);
                cplx* dst = buf.data() + i * chunk;
                for (std::size_t r = r0; r < r1; ++r) dst[r - r0] += src[r] * s;
            }
        }
        for (std::size_t i = 0; i < p; ++i)
            std::copy(buf.begin() + i * chunk, buf.begin() + i * chunk + (r1 - r0), V[i].begin() + r0);
    }
}

EigenResult dense_lowest(const SparseOperator& H, int k, bool want_vectors) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H.to_dense());
    EigenResult r;
    const int n = static_cast<int>(H.dim());
    k = std::min(k, n);
    for (int i = 0; i < k; ++i) {
        r.values.push_back(es.eigenvalues()(i));
        if (want_vectors) {
            CVec v(n);
            for (int j = 0; j < n; ++j) v[j] = es.eigenvectors()(j, i);
            r.vectors.push_back(std::move(v));
        }
    }
    r.norm_estimate = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    return r;
}

EigenResult krylov_schur(const SparseOperator& H, int k, const LanczosOptions& opt,
                         const std::vector<CVec>& locked, std::uint64_t seed) {
    const std::size_t n = H.dim();
    const std::size_t free_dim = n - locked.size();
    std::size_t m = std::min<std::size_t>(std::max(opt.max_basis, 2 * k + 8), free_dim);
    if (m <= static_cast<std::size_t>(k)) throw Error(ErrorCode::NoConvergence, "basis too small for requested pairs");

    std::mt19937_64 rng(seed);
    std::vector<CVec> V(m, CVec(n));
    Mat T = Mat::Zero(m, m);
    CVec w(n);

    random_fill(V[0], rng);
    orthogonalize(locked, locked.size(), V[0], nullptr);
    normalize(V[0]);

    EigenResult out;
    std::size_t p = 0;
    double beta = 0.0;
    std::vector<cplx> coef(m);
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        for (std::size_t j = p; j < m; ++j) {
            H.apply(V[j].data(), w.data());
            ++out.matvecs;
            orthogonalize(locked, locked.size(), w, nullptr);
            std::fill(coef.begin(), coef.end(), cplx(0));
            orthogonalize(V, j + 1, w, coef.data());
            for (std::size_t i = 0; i < j; ++i) {
                T(i, j) = coef[i];
                T(j, i) = std::conj(coef[i]);
            }
            T(j, j) = coef[j].real();
            beta = norm(w);
            const double scale = std::max(1.0, std::abs(T(j, j)));
            if (beta < 1e-13 * scale) {
                // invariant subspace; continue with a fresh direction
                random_fill(w, rng);
                orthogonalize(locked, locked.size(), w, nullptr);
                orthogonalize(V, j + 1, w, nullptr);
                beta = 0.0;
                if (j + 1 < m) {
                    V[j + 1] = w;
                    normalize(V[j + 1]);
                }
                continue;
            }
            if (j + 1 < m) {
                V[j + 1] = w;
                kern::scale(n, 1.0 / beta, V[j + 1].data());
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(T);
        const auto& theta = es.eigenvalues();
        const Mat& S = es.eigenvectors();
        const double norm_est = std::max(std::abs(theta(0)), std::abs(theta(m - 1)));
        out.norm_estimate = std::max(out.norm_estimate, norm_est);
        bool ok = true;
        for (int i = 0; i < k; ++i)
            if (beta * std::abs(S(m - 1, i)) > opt.tol * std::max(norm_est, 1e-300)) ok = false;
        if (ok || restart == opt.max_restarts) {
            if (!ok) throw Error(ErrorCode::NoConvergence, "Lanczos did not converge within restart budget");
            rotate_basis(V, m, S, k);
            for (int i = 0; i < k; ++i) {
                out.values.push_back(theta(i));
                normalize(V[i]);
            }
            for (int i = 0; i < k; ++i) out.vectors.push_back(std::move(V[i]));
            return out;
        }
        p = std::min<std::size_t>(m - 1, std::max<std::size_t>(k + 1, k + (m - k) / 2));
        rotate_basis(V, m, S, p);
        T.setZero();
        for (std::size_t i = 0; i < p; ++i) T(i, i) = theta(i);
        V[p] = w;
        if (beta > 0.0)
            kern::scale(n, 1.0 / beta, V[p].data());
        else
            normalize(V[p]);
    }
    throw Error(ErrorCode::NoConvergence, "unreachable");
}

double residual_of(const SparseOperator& H, const CVec& v, double e) {
    CVec hv = H.apply(v);
    kern::axpy(v.size(), -e, v.data(), hv.data());
    return norm(hv);
}

}  // namespace

EigenResult ground_state(const SparseOperator& H, int k, const LanczosOptions& opt) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    if (H.dim() == 0) throw Error(ErrorCode::InvalidArgument, "empty operator");
    if (static_cast<std::size_t>(k) > H.dim()) throw Error(ErrorCode::InvalidArgument, "k exceeds dimension");
    EigenResult r;
    if (H.dim() <= 320 && opt.locked.empty()) {
        r = dense_lowest(H, k, true);
    } else {
        r = krylov_schur(H, k, opt, opt.locked, opt.seed);
        int passes = opt.degeneracy_passes;
        if (passes < 0) passes = H.dim() <= 200000 ? k : 0;
        for (int pass = 0; pass < passes; ++pass) {
            std::vector<CVec> lock = opt.locked;
            lock.insert(lock.end(), r.vectors.begin(), r.vectors.end());
            if (lock.size() + 2 >= H.dim()) break;
            EigenResult extra = krylov_schur(H, 1, opt, lock, opt.seed + 977 * (pass + 1));
            r.matvecs += extra.matvecs;
            const double dtol = 1e-9 * std::max(r.norm_estimate, 1e-300);
            if (!(extra.values[0] < r.values.back() - dtol)) break;
            r.values.push_back(extra.values[0]);
            r.vectors.push_back(std::move(extra.vectors[0]));
            std::vector<std::size_t> order(r.values.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.values[a] < r.values[b]; });
            EigenResult s;
            s.norm_estimate = r.norm_estimate;
            s.matvecs = r.matvecs;
            for (int i = 0; i < k; ++i) {
                s.values.push_back(r.values[order[i]]);
                s.vectors.push_back(std::move(r.vectors[order[i]]));
            }
            r = std::move(s);
        }
    }
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.residual = std::max(r.residual, residual_of(H, r.vectors[i], r.values[i]));
    if (!opt.want_vectors) r.vectors.clear();
    return r;
}

double lanczos_gap(const EigenResult& r) {
    if (r.values.empty()) throw Error(ErrorCode::InvalidArgument, "no eigenvalues");
    const double tol = 1e-9 * std::max(r.norm_estimate, std::abs(r.values[0]));
    for (std::size_t i = 1; i < r.values.size(); ++i)
        if (r.values[i] - r.values[0] > tol) return r.values[i] - r.values[0];
    throw Error(ErrorCode::NoConvergence, "ground level degenerate across all computed pairs; request more");
}

std::pair<double, double> spectral_bounds(const SparseOperator& H, int steps, std::uint64_t seed) {
    const std::size_t n = H.dim();
    if (n <= 320) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H.to_dense(), Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(n - 1);
        const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1.0});
        return {lo - pad, hi + pad};
    }
    const std::size_t m = std::min<std::size_t>(steps, n);
    std::mt19937_64 rng(seed);
    std::vector<CVec> V(m, CVec(n));
    random_fill(V[0], rng);
    normalize(V[0]);
    Mat T = Mat::Zero(m, m);
    CVec w(n);
    std::vector<cplx> coef(m);
    double beta = 0.0;
    std::size_t used = m;
    for (std::size_t j = 0; j < m; ++j) {
        H.apply(V[j].data(), w.data());
        std::fill(coef.begin(), coef.end(), cplx(0));
        orthogonalize(V, j + 1, w, coef.data());
        for (std::size_t i = 0; i <= j; ++i) {
            T(i, j) = coef[i];
            T(j, i) = std::conj(coef[i]);
        }
        beta = norm(w);
        if (beta < 1e-12 * std::max(1.0, std::abs(T(j, j)))) {
            used = j + 1;
            beta = 0.0;
            break;
        }
        if (j + 1 < m) {
            V[j + 1] = w;
            kern::scale(n, 1.0 / beta, V[j + 1].data());
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(T.topLeftCorner(used, used));
    const auto& th = es.eigenvalues();
    const auto& S = es.eigenvectors();
    double lo = th(0) - beta * std::abs(S(used - 1, 0));
    double hi = th(used - 1) + beta * std::abs(S(used - 1, used - 1));
    const double width = hi - lo;
    return {lo - 0.02 * width - 1e-12, hi + 0.02 * width + 1e-12};
}

int expv(const SparseOperator& H, double dt, CVec& psi, const KrylovOptions& opt) {
    const std::size_t n = psi.size();
    if (H.dim() != n) throw Error(ErrorCode::DimensionMismatch, "expv: state length");
    if (dt == 0.0) return 0;
    const int mmax = static_cast<int>(std::min<std::size_t>(opt.max_dim, n));
    std::vector<CVec> V(mmax + 1, CVec(n));
    CVec w(n);
    int matvecs = 0;
    double remaining = dt;
    double h = dt;
    const double sgn = dt > 0 ? 1.0 : -1.0;
    int guard = 0;
    while (std::abs(remaining) > 0.0) {
        if (++guard > 1000000) throw Error(ErrorCode::PropagationTolerance, "expv: step underflow");
        const double beta0 = norm(psi);
        if (beta0 == 0.0) return matvecs;
        V[0] = psi;
        kern::scale(n, 1.0 / beta0, V[0].data());
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(mmax, mmax);
        int m = mmax;
        double beta_last = 0.0;
        std::vector<cplx> coef(mmax);
        for (int j = 0; j < mmax; ++j) {
            H.apply(V[j].data(), w.data());
            ++matvecs;
            std::fill(coef.begin(), coef.end(), cplx(0));
            orthogonalize(V, j + 1, w, coef.data());
            Tm(j, j) = coef[j].real();
            if (j > 0) {
                // hermitian: only the tridiagonal part survives
                Tm(j - 1, j) = Tm(j, j - 1);
            }
            double b = norm(w);
            if (b < 1e-14 * std::max(1.0, std::abs(Tm(j, j)))) {
                m = j + 1;
                beta_last = 0.0;
                break;
            }
            beta_last = b;
            if (j + 1 < mmax) Tm(j + 1, j) = b;
            V[j + 1] = w;
            kern::scale(n, 1.0 / b, V[j + 1].data());
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm.topLeftCorner(m, m));
        const auto& ev = es.eigenvalues();
        const auto& U = es.eigenvectors();
        Eigen::VectorXcd c(m);
        for (;;) {
            h = sgn * std::min(std::abs(h), std::abs(remaining));
            Eigen::VectorXcd d(m);
            for (int i = 0; i < m; ++i) d(i) = std::exp(cplx(0, -ev(i) * h)) * U(0, i);
            c = U.cast<cplx>() * d;
            const double err = beta0 * beta_last * std::abs(c(m - 1));
            if (err <= opt.tol || beta_last == 0.0) break;
            h *= 0.5;
            if (std::abs(h) < 1e-300) throw Error(ErrorCode::PropagationTolerance, "expv: step collapsed");
        }
        std::fill(psi.begin(), psi.end(), cplx(0));
        for (int i = 0; i < m; ++i) kern::axpy(n, beta0 * c(i), V[i].data(), psi.data());
        remaining -= h;
        if (std::abs(remaining) < 1e-15 * std::abs(dt)) remaining = 0.0;
        h *= 2.0;
    }
    return matvecs;
}

namespace {

// J_0..J_K(x) by Miller's backward recurrence, normalised with J_0 + 2 sum J_2k = 1.
std::vector<double> bessel_series(double x, double tol) {
    if (x == 0.0) return {1.0};
    const int kneed = static_cast<int>(std::ceil(x + 12.0 * std::cbrt(x) + 30.0));
    const int start = kneed + 40;
    std::vector<double> j(start + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-280;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (int q = k - 1; q <= start + 1; ++q) j[q] *= 1e-250;
        }
    }
    double s = j[0];
    for (int k = 2; k <= start; k += 2) s += 2.0 * j[k];
    for (auto& v : j) v /= s;
    int last = start;
    while (last > 0 && last > x && std::abs(j[last]) < tol * 1e-3) --last;
    j.resize(last + 1);
    return j;
}

}  // namespace

int chebyshev_step(const SparseOperator& H, double dt, CVec& psi, double emin, double emax, double tol) {
    const std::size_t n = psi.size();
    if (H.dim() != n) throw Error(ErrorCode::DimensionMismatch, "chebyshev_step: state length");
    if (!(emax > emin)) throw Error(ErrorCode::InvalidArgument, "chebyshev_step: empty interval");
    const double a = 0.5 * (emax + emin), b = 0.5 * (emax - emin);
    const auto jb = bessel_series(b * std::abs(dt), tol);
    const double sgn = dt >= 0 ? 1.0 : -1.0;
    const int K = static_cast<int>(jb.size());
    // (-i sgn)^k
    auto coef = [&](int k) {
        static const cplx ph[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};
        cplx p = ph[k & 3];
        if (sgn < 0 && (k & 1)) p = -p;
        return (k == 0 ? 1.0 : 2.0) * jb[k] * p;
    };
    CVec prev = psi, cur(n), next(n), out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = coef(0) * prev[i];
    int mv = 0;
    if (K > 1) {
        H.apply(prev.data(), cur.data());
        ++mv;
        for (std::size_t i = 0; i < n; ++i) {
            cur[i] = (cur[i] - a * prev[i]) / b;
            out[i] += coef(1) * cur[i];
        }
    }
    const double two_over_b = 2.0 / b;
    for (int k = 2; k < K; ++k) {
        H.apply(cur.data(), next.data());
        ++mv;
        const cplx ck = coef(k);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = two_over_b * (next[i] - a * cur[i]) - prev[i];
            out[i] += ck * next[i];
        }
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    const cplx g = std::exp(cplx(0, -a * dt));
    for (std::size_t i = 0; i < n; ++i) psi[i] = g * out[i];
    return mv;
}

namespace {

void record(TimeSeries& ts, const Propagation& prop, const CVec& psi) {
    for (std::size_t o = 0; o < prop.observables.size(); ++o)
        ts.values[o].push_back(prop.observables[o].op.expectation(psi));
}

void check_times(const Propagation& prop, std::size_t dim, const CVec& psi0) {
    if (prop.times.empty()) throw Error(ErrorCode::InvalidArgument, "evolve: empty time grid");
    for (std::size_t i = 1; i < prop.times.size(); ++i)
        if (!(prop.times[i] > prop.times[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "evolve: times must increase strictly");
    if (psi0.size() != dim) throw Error(ErrorCode::DimensionMismatch, "evolve: state length");
    for (const auto& o : prop.observables)
        if (o.op.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "evolve: observable " + o.name);
}

}  // namespace

TimeSeries evolve(const SparseOperator& H, const CVec& psi0, const Propagation& prop) {
    check_times(prop, H.dim(), psi0);
    TimeSeries ts;
    ts.times = prop.times;
    for (const auto& o : prop.observables) ts.names.push_back(o.name);
    ts.values.resize(prop.observables.size());
    CVec psi = psi0;
    const double n0 = norm(psi0);
    record(ts, prop, psi);
    for (std::size_t i = 1; i < prop.times.size(); ++i) {
        expv(H, prop.times[i] - prop.times[i - 1], psi, prop.krylov);
        ts.norm_drift = std::max(ts.norm_drift, std::abs(norm(psi) - n0));
        record(ts, prop, psi);
    }
    if (ts.norm_drift > prop.norm_drift_tol)
        throw Error(ErrorCode::PropagationTolerance, "norm drift " + std::to_string(ts.norm_drift));
    ts.final_state = std::move(psi);
    return ts;
}

TimeSeries evolve_td(const HamiltonianFn& H, const CVec& psi0, const Propagation& prop, double max_step) {
    if (!(max_step > 0)) throw Error(ErrorCode::InvalidArgument, "evolve_td: max_step must be positive");
    if (prop.times.empty()) throw Error(ErrorCode::InvalidArgument, "evolve: empty time grid");
    TimeSeries ts;
    ts.times = prop.times;
    for (const auto& o : prop.observables) ts.names.push_back(o.name);
    ts.values.resize(prop.observables.size());
    CVec psi = psi0;
    const double n0 = norm(psi0);
    record(ts, prop, psi);
    for (std::size_t i = 1; i < prop.times.size(); ++i) {
        const double t0 = prop.times[i - 1], t1 = prop.times[i];
        if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "evolve: times must increase strictly");
        const int steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / max_step)));
        const double dt = (t1 - t0) / steps;
        for (int s = 0; s < steps; ++s) expv(H(t0 + (s + 0.5) * dt), dt, psi, prop.krylov);
        ts.norm_drift = std::max(ts.norm_drift, std::abs(norm(psi) - n0));
        record(ts, prop, psi);
    }
    if (ts.norm_drift > prop.norm_drift_tol)
        throw Error(ErrorCode::PropagationTolerance, "norm drift " + std::to_string(ts.norm_drift));
    ts.final_state = std::move(psi);
    return ts;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXcd d(H.rows());
    for (Eigen::Index i = 0; i < H.rows(); ++i) d(i) = std::exp(cplx(0, -es.eigenvalues()(i) * t));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace ryd
