// SPDX-License-Identifier: Apache-2.0
#include "rydsim/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydsim/error.hpp"

namespace ryd {

std::vector<double> linfit(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
    if (cols.empty()) throw Error(ErrorCode::InvalidArgument, "no basis columns");
    const Eigen::Index m = static_cast<Eigen::Index>(y.size()), k = static_cast<Eigen::Index>(cols.size());
    if (m < k) throw Error(ErrorCode::FitFailure, "fewer samples than parameters");
    Eigen::MatrixXd A(m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (cols[j].size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "fit column");
        for (Eigen::Index i = 0; i < m; ++i) A(i, j) = cols[j][i];
    }
    // column scaling keeps the QR well conditioned for monomials of very different size
    Eigen::VectorXd s(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        s(j) = A.col(j).norm();
        if (s(j) == 0) s(j) = 1;
        A.col(j) /= s(j);
    }
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), m);
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    std::vector<double> out(k);
    for (Eigen::Index j = 0; j < k; ++j) out[j] = c(j) / s(j);
    return out;
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "polyfit");
    std::vector<std::vector<double>> cols(degree + 1, std::vector<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1;
        for (int d = 0; d <= degree; ++d, p *= x[i]) cols[d][i] = p;
    }
    return linfit(cols, y);
}

double spectral_peak(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 4) throw Error(ErrorCode::FitFailure, "too few samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    const std::size_t pad = 8 * n;
    std::vector<double> p(pad / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= pad / 2; ++k) {
        double re = 0, im = 0;
        const double w = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(pad);
        for (std::size_t i = 0; i < n; ++i) {
            re += (y[i] - mean) * std::cos(w * static_cast<double>(i));
            im -= (y[i] - mean) * std::sin(w * static_cast<double>(i));
        }
        p[k] = re * re + im * im;
    }
    std::size_t best = 1;
    for (std::size_t k = 1; k < p.size(); ++k)
        if (p[k] > p[best]) best = k;
    double kk = static_cast<double>(best);
    if (best > 1 && best + 1 < p.size()) {
        const double a = p[best - 1], b = p[best], c = p[best + 1];
        const double den = a - 2 * b + c;
        if (den != 0) kk += 0.5 * (a - c) / den;
    }
    return 2 * std::numbers::pi * kk / (static_cast<double>(pad) * dt);
}

namespace {

double model(const double* q, double t) { return q[0] * std::exp(-q[1] * t) * std::cos(q[2] * t + q[3]) + q[4]; }

double sse(const double* q, const std::vector<double>& t, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - model(q, t[i]);
        s += r * r;
    }
    return s;
}

}  // namespace

std::optional<DampedSine> fit_damped_sine(const std::vector<double>& t, const std::vector<double>& y,
                                          double flat_tol) {
    if (t.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "fit_damped_sine");
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*hi - *lo < flat_tol) return std::nullopt;
    const double w0 = spectral_peak(t, y);
    const double t0 = t.front();
    std::vector<double> ts(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ts[i] = t[i] - t0;

    // linear seed for amplitude and phase at fixed omega, gamma = 0
    std::vector<std::vector<double>> cols(3, std::vector<double>(ts.size()));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        cols[0][i] = std::cos(w0 * ts[i]);
        cols[1][i] = std::sin(w0 * ts[i]);
        cols[2][i] = 1.0;
    }
    const auto l = linfit(cols, y);
    double q[5] = {std::hypot(l[0], l[1]), 0.0, w0, std::atan2(-l[1], l[0]), l[2]};

    double lambda = 1e-3;
    double cur = sse(q, ts, y);
    int it = 0;
    for (; it < 500; ++it) {
        Eigen::MatrixXd Jm(static_cast<Eigen::Index>(ts.size()), 5);
        Eigen::VectorXd r(static_cast<Eigen::Index>(ts.size()));
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double e = std::exp(-q[1] * ts[i]);
            const double c = std::cos(q[2] * ts[i] + q[3]), s = std::sin(q[2] * ts[i] + q[3]);
            const Eigen::Index ii = static_cast<Eigen::Index>(i);
            Jm(ii, 0) = e * c;
            Jm(ii, 1) = -ts[i] * q[0] * e * c;
            Jm(ii, 2) = -ts[i] * q[0] * e * s;
            Jm(ii, 3) = -q[0] * e * s;
            Jm(ii, 4) = 1.0;
            r(ii) = y[i] - model(q, ts[i]);
        }
        const Eigen::MatrixXd JtJ = Jm.transpose() * Jm;
        const Eigen::VectorXd g = Jm.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            Eigen::MatrixXd Aug = JtJ;
            for (int k = 0; k < 5; ++k) Aug(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
            const Eigen::VectorXd d = Aug.ldlt().solve(g);
            double qn[5];
            for (int k = 0; k < 5; ++k) qn[k] = q[k] + d(k);
            const double s = sse(qn, ts, y);
            if (std::isfinite(s) && s < cur) {
                const double rel = (cur - s) / std::max(cur, 1e-300);
                std::copy(qn, qn + 5, q);
                cur = s;
                lambda = std::max(lambda / 3, 1e-12);
                improved = true;
                if (rel < 1e-14) it = 1 << 20;
            } else {
                lambda *= 4;
            }
        }
        if (!improved) break;
    }
    if (!std::isfinite(cur)) throw Error(ErrorCode::FitFailure, "damped-sinusoid fit diverged");
    DampedSine out;
    out.A = q[0] * std::exp(q[1] * t0);
    out.gamma = q[1];
    out.omega = q[2];
    out.phi = q[3] - q[2] * t0;
    out.C = q[4];
    if (out.A < 0) {
        out.A = -out.A;
        out.phi += std::numbers::pi;
    }
    if (out.omega < 0) {
        out.omega = -out.omega;
        out.phi = -out.phi;
    }
    out.rms = std::sqrt(cur / static_cast<double>(ts.size()));
    out.seed_omega = w0;
    out.iterations = std::min(it, 500);
    return out;
}

}  // namespace ryd
