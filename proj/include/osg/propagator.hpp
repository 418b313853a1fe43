#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"

// Grid propagator for one dressed branch. Deliberately knows nothing about
// the closed-form amplitudes: everything here is generic split-operator
// machinery, so agreement with the analytic layer is a genuine cross-check
// rather than a tautology.

namespace osg {

enum class PropagationPhase { in_cavity, free_flight };

struct NumericState {
  Grid1D grid;
  ComplexSampleArray amplitudes;
  double time = 0.0;
  BranchSign sign = BranchSign::plus;

  // Discrete l2 norm, sqrt(sum |psi_i|^2 dx). This is the quantity the
  // spectral steps preserve exactly (Parseval), so drift measures only
  // floating-point error, not quadrature error.
  double norm() const {
    double s = 0.0;
    for (const Complex& c : amplitudes) s += std::norm(c);
    return std::sqrt(s * grid.dx());
  }
};

namespace detail {

struct MomentumStats {
  double mean = 0.0;
  double sd = 0.0;
};

inline MomentumStats momentum_stats(const NumericState& state, Dft& dft) {
  ComplexSampleArray spec;
  dft.forward(state.amplitudes, spec);
  const auto p = dft_momenta(spec.size(), state.grid.dx());
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double w = std::norm(spec[j]);
    mass += w;
    m1 += w * p[j];
    m2 += w * p[j] * p[j];
  }
  m1 /= mass;
  m2 /= mass;
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

}  // namespace detail

// Branch wavepacket at t = 0: a real Gaussian of width delta_x0 at x0. The
// grid must hold at least eight widths on both sides or the evolution would
// start already clipped.
inline NumericState initial_state(const ModelParams& p, const Grid1D& grid,
                                  BranchSign sign = BranchSign::plus) {
  validate(p);
  grid.validate();
  if (!grid.covers(p.x0 - 8.0 * p.delta_x0, p.x0 + 8.0 * p.delta_x0))
    throw GridTooNarrow("initial grid must cover x0 +/- 8 delta_x0");
  NumericState state{grid, ComplexSampleArray(grid.points), 0.0, sign};
  const double pref = std::pow(2.0 * std::numbers::pi * p.delta_x0 * p.delta_x0, -0.25);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double u = grid.node(i) - p.x0;
    state.amplitudes[i] = pref * std::exp(-u * u / (4.0 * p.delta_x0 * p.delta_x0));
  }
  return state;
}

// Advances the state by `duration`. Free flight is a single exact spectral
// step (the kinetic term is diagonal in p), so `steps` only matters in the
// cavity, where the Strang splitting
//   e^{-i K dt/2} e^{-i V dt} e^{-i K dt/2}
// carries an O(dt^2) local error per step. Before stepping, the momentum
// reach the evolution will need is checked against the grid Nyquist band;
// afterwards, mass near the grid edges is checked so wraparound cannot pass
// silently.
inline void propagate(NumericState& state, const ModelParams& p, double duration,
                      std::size_t steps, PropagationPhase phase) {
  validate(p);
  if (steps < 1) throw InvalidParameter("steps", "must be at least 1");
  if (!(duration >= 0.0)) throw NegativeTime(duration);
  if (duration == 0.0) return;

  const std::size_t n = state.grid.points;
  const double dx = state.grid.dx();
  Dft dft;

  const auto stats = detail::momentum_stats(state, dft);
  const DerivedScales sc = derive_scales(p);
  double reach = std::abs(stats.mean) + 8.0 * std::max(stats.sd, sc.delta_p0);
  if (phase == PropagationPhase::in_cavity) reach += p.mass * sc.a * duration;
  const double band = std::numbers::pi * hbar / dx;
  if (reach > 0.9 * band)
    throw NyquistOverflow("momentum reach " + std::to_string(reach) + " exceeds 90% of grid band " +
                          std::to_string(band));

  const auto mom = dft_momenta(n, dx);
  ComplexSampleArray spec(n);

  if (phase == PropagationPhase::free_flight) {
    dft.forward(state.amplitudes, spec);
    for (std::size_t j = 0; j < n; ++j)
      spec[j] *= std::exp(Complex(0.0, -mom[j] * mom[j] * duration / (2.0 * p.mass * hbar)));
    dft.inverse(spec, state.amplitudes);
  } else {
    const double dt = duration / static_cast<double>(steps);
    ComplexSampleArray half_kin(n), pot(n);
    for (std::size_t j = 0; j < n; ++j)
      half_kin[j] = std::exp(Complex(0.0, -mom[j] * mom[j] * dt / (4.0 * p.mass * hbar)));
    const double sg = sign_of(state.sign);
    for (std::size_t i = 0; i < n; ++i)
      pot[i] = std::exp(Complex(0.0, -sg * p.epsilon * sc.k * state.grid.node(i) * dt));
    for (std::size_t step = 0; step < steps; ++step) {
      dft.forward(state.amplitudes, spec);
      for (std::size_t j = 0; j < n; ++j) spec[j] *= half_kin[j];
      dft.inverse(spec, state.amplitudes);
      for (std::size_t i = 0; i < n; ++i) state.amplitudes[i] *= pot[i];
      dft.forward(state.amplitudes, spec);
      for (std::size_t j = 0; j < n; ++j) spec[j] *= half_kin[j];
      dft.inverse(spec, state.amplitudes);
    }
  }
  state.time += duration;

  double edge = 0.0;
  for (std::size_t i = 0; i < 4 && i < n; ++i)
    edge += std::norm(state.amplitudes[i]) + std::norm(state.amplitudes[n - 1 - i]);
  if (edge * dx > 1e-8)
    throw GridTooNarrow("state reached the grid boundary during propagation");
}

// Discrete Wigner transform of the state samples,
//   W(x_i, p) = (dx / pi hbar) [ |psi_i|^2
//             + sum_m 2 Re( psi*_{i+m} psi_{i-m} e^{2 i p m dx / hbar} ) ],
// the midpoint-exact discretization of the continuum integral. It is alias
// free only on the half band |p| <= pi hbar / (2 dx), so the momentum grid
// must stay inside it.
inline WignerField wigner_transform(const NumericState& state, const Grid1D& p_grid) {
  p_grid.validate("p_grid");
  const double dx = state.grid.dx();
  const double half_band = std::numbers::pi * hbar / (2.0 * dx);
  if (std::max(std::abs(p_grid.x_min), std::abs(p_grid.x_max)) > half_band)
    throw NyquistOverflow("momentum grid leaves the alias-free Wigner band");

  const std::size_t nx = state.grid.points, np = p_grid.points;
  WignerField field{{state.grid, p_grid}, std::vector<double>(nx * np, 0.0)};
  const double scale = dx / (std::numbers::pi * hbar);
  std::vector<Complex> corr;
  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t reach = std::min(i, nx - 1 - i);
    corr.assign(reach, Complex(0.0, 0.0));
    for (std::size_t m = 1; m <= reach; ++m)
      corr[m - 1] = std::conj(state.amplitudes[i + m]) * state.amplitudes[i - m];
    const double base = std::norm(state.amplitudes[i]);
    for (std::size_t j = 0; j < np; ++j) {
      const Complex rot = std::exp(Complex(0.0, 2.0 * p_grid.node(j) * dx / hbar));
      Complex zm = rot;
      double acc = base;
      for (std::size_t m = 1; m <= reach; ++m) {
        acc += 2.0 * std::real(corr[m - 1] * zm);
        zm *= rot;
      }
      field.value(i, j) = scale * acc;
    }
  }
  return field;
}

inline double mean_position(const NumericState& state) {
  double mass = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < state.grid.points; ++i) {
    const double w = std::norm(state.amplitudes[i]);
    mass += w;
    m1 += w * state.grid.node(i);
  }
  return m1 / mass;
}

inline double mean_momentum(const NumericState& state) {
  Dft dft;
  return detail::momentum_stats(state, dft).mean;
}

// Second moments straight from the samples: position moments by quadrature,
// momentum moments from the spectrum (Parseval weights |F_j|^2 dx / N), and
// the symmetrized cross moment from Re <psi| x p |psi>.
inline CovarianceSummary moments(const NumericState& state) {
  const std::size_t n = state.grid.points;
  const double dx = state.grid.dx();
  Dft dft;

  double mass = 0.0, mx = 0.0, mxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::norm(state.amplitudes[i]);
    const double x = state.grid.node(i);
    mass += w;
    mx += w * x;
    mxx += w * x * x;
  }
  mx /= mass;
  mxx /= mass;

  ComplexSampleArray spec;
  dft.forward(state.amplitudes, spec);
  const auto p = dft_momenta(n, dx);
  double pmass = 0.0, mp = 0.0, mpp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(spec[j]);
    pmass += w;
    mp += w * p[j];
    mpp += w * p[j] * p[j];
  }
  mp /= pmass;
  mpp /= pmass;

  ComplexSampleArray pspec = spec, papplied;
  for (std::size_t j = 0; j < n; ++j) pspec[j] *= p[j];
  dft.inverse(pspec, papplied);
  double mxp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    mxp += std::real(std::conj(state.amplitudes[i]) * state.grid.node(i) * papplied[i]);
  mxp /= mass;

  return covariance_from_moments(mxx - mx * mx, mpp - mp * mp, mxp - mx * mp);
}

}  // namespace osg
