#pragma once
// SPDX-License-Identifier: Apache-2.0
// Least-squares helpers: polynomial fits and a damped-sinusoid fit.

#include <optional>
#include <vector>

namespace ryd {

// Coefficients c_k of sum_k c_k x^k, k = 0..degree.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);
// General linear least squares on given basis columns (rows = samples).
std::vector<double> linfit(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

struct DampedSine {
    double A = 0.0, gamma = 0.0, omega = 0.0, phi = 0.0, C = 0.0;
    double rms = 0.0;        // residual rms
    double seed_omega = 0.0; // spectral peak used as starting point
    int iterations = 0;
};

// y ~ A e^{-gamma t} cos(omega t + phi) + C on a uniform grid. Returns nullopt for a flat
// signal (peak-to-peak below flat_tol). Throws FitFailure when the optimiser diverges.
std::optional<DampedSine> fit_damped_sine(const std::vector<double>& t, const std::vector<double>& y,
                                          double flat_tol = 1e-10);

// Peak angular frequency of the mean-removed signal (zero-padded DFT with parabolic refinement).
double spectral_peak(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace ryd
