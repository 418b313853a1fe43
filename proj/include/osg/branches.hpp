#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "constants.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace osg {

// Classical center of one branch in phase space.
struct BranchCenters {
  double x_c = 0.0;
  double p_c = 0.0;
};

// Magnitude of the branch center displacement from x0. Quadratic while the
// linear potential acts, ballistic afterwards; C^1 at the transit time.
inline double branch_displacement(const ModelParams& p, double t) {
  detail::require_time(t);
  const double a = detail::acceleration(p);
  const double T = p.transit_time;
  return t <= T ? 0.5 * a * t * t : a * T * (t - 0.5 * T);
}

// Magnitude of the branch center momentum, m*a*min(t, T).
inline double branch_momentum(const ModelParams& p, double t) {
  detail::require_time(t);
  return p.mass * detail::acceleration(p) * std::min(t, p.transit_time);
}

inline BranchCenters branch_centers(const ModelParams& p, BranchSign s, double t) {
  const double sg = sign_of(s);
  return {p.x0 - sg * branch_displacement(p, t), -sg * branch_momentum(p, t)};
}

// beta(t) = delta_x0^2 + i hbar t / (2m), the complex squared width of a
// freely spreading Gaussian. |2 beta|^(1/2) recovers sqrt(2) packet_spread.
inline Complex complex_width_sq(const ModelParams& p, double t) {
  return {p.delta_x0 * p.delta_x0, hbar * t / (2.0 * p.mass)};
}

namespace detail {

// Gaussian riding the classical trajectory (x_c, p_c):
//
//   phi(x) = sqrt(delta_x0 / (sqrt(2 pi) beta)) e^{i p_c x / hbar} e^{-(x-x_c)^2 / (4 beta)}
//
// Substituting into the branch Schroedinger equation with V = s m a x leaves
// only a residual p_c(t)^2/(2m) energy term, and p_c^2 is the same for both
// branches. So the template is exact up to a branch independent time phase:
// every inter-branch quantity (overlap, interference, conditioned densities)
// built from it is exact, and single-branch moduli are exact outright.
inline Complex gaussian_on_trajectory(const ModelParams& P, double t, double x, double x_c,
                                      double p_c) {
  const Complex beta = complex_width_sq(P, t);
  const Complex pref = std::sqrt(P.delta_x0 / (std::sqrt(2.0 * std::numbers::pi) * beta));
  const double u = x - x_c;
  return pref * std::exp(Complex(0.0, p_c * x / hbar)) * std::exp(-u * u / (4.0 * beta));
}

inline Complex branch_x_cavity(const ModelParams& P, BranchSign s, double t, double x) {
  const double sg = sign_of(s);
  const double a = acceleration(P);
  return gaussian_on_trajectory(P, t, x, P.x0 - sg * 0.5 * a * t * t, -sg * P.mass * a * t);
}

inline Complex branch_x_flight(const ModelParams& P, BranchSign s, double t, double x) {
  const double sg = sign_of(s);
  const double a = acceleration(P);
  const double T = P.transit_time;
  return gaussian_on_trajectory(P, t, x, P.x0 - sg * a * T * (t - 0.5 * T), -sg * P.mass * a * T);
}

// Momentum wavefunction of the initial packet in the convention
// phi(p) = (2 pi hbar)^{-1/2} Integral psi(x) e^{-i p x / hbar} dx.
inline Complex initial_p_form(const ModelParams& P, double q) {
  const double dp0 = momentum_width(P);
  const double pref = std::pow(2.0 * std::numbers::pi * dp0 * dp0, -0.25);
  return pref * std::exp(Complex(-q * q / (4.0 * dp0 * dp0), -q * P.x0 / hbar));
}

inline Complex branch_p_cavity(const ModelParams& P, BranchSign s, double t, double p) {
  const double sg = sign_of(s);
  const double a = acceleration(P);
  const double p_c = -sg * P.mass * a * t;
  const double phase = -(p * t / (2.0 * hbar)) * (p / P.mass + sg * a * t);
  return initial_p_form(P, p - p_c) * std::exp(Complex(0.0, phase));
}

// The (t - T) term is the constant branch energy accumulated in the cavity;
// dropping it would break the Fourier pairing with branch_x_flight.
inline Complex branch_p_flight(const ModelParams& P, BranchSign s, double t, double p) {
  const double sg = sign_of(s);
  const double a = acceleration(P);
  const double T = P.transit_time;
  const double p_c = -sg * P.mass * a * T;
  const double phase = -(p * p * t / (2.0 * P.mass) + sg * a * p * T * T / 2.0 -
                         P.mass * a * a * T * T * (t - T) / 2.0) /
                       hbar;
  return initial_p_form(P, p - p_c) * std::exp(Complex(0.0, phase));
}

}  // namespace detail

// Position amplitude of one branch. The cavity and flight expressions are
// literally equal at t = T, so the dispatch is continuous.
inline Complex branch_x_amplitude(const ModelParams& p, BranchSign s, double t, double x) {
  detail::require_time(t);
  return t <= p.transit_time ? detail::branch_x_cavity(p, s, t, x)
                             : detail::branch_x_flight(p, s, t, x);
}

// Momentum amplitude of one branch; the exact Fourier transform of
// branch_x_amplitude in the e^{-i p x / hbar} convention.
inline Complex branch_p_amplitude(const ModelParams& p, BranchSign s, double t, double p_arg) {
  detail::require_time(t);
  return t <= p.transit_time ? detail::branch_p_cavity(p, s, t, p_arg)
                             : detail::branch_p_flight(p, s, t, p_arg);
}

// <phi^+|phi^->(t). Magnitude decays with the phase-space separation of the
// centers; the phase 2 mu x0 / hbar comes from the momentum kick acting
// about x = 0 rather than about the packet center.
inline Complex branch_overlap(const ModelParams& p, double t) {
  detail::require_time(t);
  const double d = branch_displacement(p, t);
  const double mu = branch_momentum(p, t);
  const double var = packet_spread(p, t) * packet_spread(p, t);
  const double c = packet_covariance(p, t);
  const double phi1 = (2.0 / hbar) * (mu - d * c / var);
  const double mag = std::exp(-d * d / (2.0 * var) - var * phi1 * phi1 / 2.0);
  return std::polar(mag, 2.0 * mu * p.x0 / hbar);
}

inline ComplexSampleArray sample_x_amplitudes(const ModelParams& p, BranchSign s, double t,
                                              const Grid1D& grid) {
  ComplexSampleArray out(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) out[i] = branch_x_amplitude(p, s, t, grid.node(i));
  return out;
}

inline ComplexSampleArray sample_p_amplitudes(const ModelParams& p, BranchSign s, double t,
                                              const Grid1D& grid) {
  ComplexSampleArray out(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) out[i] = branch_p_amplitude(p, s, t, grid.node(i));
  return out;
}

}  // namespace osg
