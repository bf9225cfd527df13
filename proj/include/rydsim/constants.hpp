#pragma once

// CODATA 2018, SI units.
namespace ryd::phys {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / two_pi;
inline constexpr double e = 1.602176634e-19;
inline constexpr double a0 = 5.29177210903e-11;
inline constexpr double me = 9.1093837015e-31;
inline constexpr double c = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double muB = 9.2740100783e-24;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double rydberg_hz = 3.2898419602508e15;  // Ry / h
inline constexpr double rydberg_J = rydberg_hz * h;
inline constexpr double rydberg_rad = rydberg_hz * two_pi;  // Ry / hbar
inline constexpr double euler_gamma = 0.57721566490153286061;

}  // namespace ryd::phys
