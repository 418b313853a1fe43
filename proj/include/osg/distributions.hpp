#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "branches.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace osg {

// Probability that a photon-number measurement on the exit field yields the
// given outcome if performed at time t: (1 +/- Re<phi^+|phi^->)/2. Valid at
// any t >= 0; inside the cavity it refers to the instantaneous dressed
// decomposition. Unconditioned carries the whole ensemble.
inline double ensemble_fraction(const ModelParams& p, MeasurementOutcome outcome, double t) {
  detail::require_time(t);
  if (outcome == MeasurementOutcome::unconditioned) return 1.0;
  const double sg = outcome == MeasurementOutcome::zero_photons ? 1.0 : -1.0;
  return 0.5 * (1.0 + sg * branch_overlap(p, t).real());
}

namespace detail {

// Densities are meaningful only when the grid holds the state. The deficit
// threshold is loose against quadrature error but tight against a clipped
// tail, which loses mass at the 1e-3 level long before it is visible.
inline void check_captured_mass(const DensityProfile& profile, double expected) {
  if (expected < 1e-12) return;
  if (profile.integral() < (1.0 - 1e-6) * expected)
    throw GridTooNarrow("density grid clips the state: captured " +
                        std::to_string(profile.integral()) + " of " + std::to_string(expected));
}

}  // namespace detail

// Position density with the field traced out: the equal-weight branch
// mixture (|phi^+|^2 + |phi^-|^2)/2. No fringes at any time.
inline DensityProfile density_unconditioned(const ModelParams& p, const Grid1D& grid, double t) {
  detail::require_time(t);
  grid.validate();
  DensityProfile out{grid, std::vector<double>(grid.points)};
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.node(i);
    out.values[i] = 0.5 * (std::norm(branch_x_amplitude(p, BranchSign::plus, t, x)) +
                           std::norm(branch_x_amplitude(p, BranchSign::minus, t, x)));
  }
  detail::check_captured_mass(out, 1.0);
  return out;
}

// Joint density of arriving at x and the measurement giving the outcome:
// |phi^+ +/- phi^-|^2 / 4. Not renormalized, so the two outcomes partition
// density_unconditioned pointwise and integrate to the ensemble fractions.
inline DensityProfile density_conditioned(const ModelParams& p, const Grid1D& grid,
                                          MeasurementOutcome outcome, double t) {
  detail::require_time(t);
  if (outcome == MeasurementOutcome::unconditioned) throw UnconditionedOutcome();
  grid.validate();
  const double sg = outcome == MeasurementOutcome::zero_photons ? 1.0 : -1.0;
  DensityProfile out{grid, std::vector<double>(grid.points)};
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.node(i);
    out.values[i] = 0.25 * std::norm(branch_x_amplitude(p, BranchSign::plus, t, x) +
                                     sg * branch_x_amplitude(p, BranchSign::minus, t, x));
  }
  detail::check_captured_mass(out, ensemble_fraction(p, outcome, t));
  return out;
}

// Cross term 2 Re[phi^+* phi^-] evaluated from the amplitudes. Defined at
// every t; this is what the conditioned densities add to or subtract from
// the unconditioned one.
inline DensityProfile interference_cross_term(const ModelParams& p, const Grid1D& grid, double t) {
  detail::require_time(t);
  grid.validate();
  DensityProfile out{grid, std::vector<double>(grid.points)};
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.node(i);
    out.values[i] = 2.0 * std::real(std::conj(branch_x_amplitude(p, BranchSign::plus, t, x)) *
                                    branch_x_amplitude(p, BranchSign::minus, t, x));
  }
  return out;
}

// Closed-form cross term for the flight regime:
//
//   I(x) = 2 (2 pi)^{-1/2} / spread * e^{-((x-x0)^2 + d^2)/(2 spread^2)}
//          * cos(2 eps k T (x - (x - x0) eta)),
//   eta  = delta_p0^2 t (t - T/2) / (m spread)^2.
//
// Identical to interference_cross_term for t >= T; kept separate so the two
// routes can be checked against each other.
inline DensityProfile interference_term(const ModelParams& p, const Grid1D& grid, double t) {
  detail::require_time(t);
  if (t < p.transit_time) throw TimeBeforeExit(t, p.transit_time);
  grid.validate();
  const DerivedScales sc = derive_scales(p);
  const double T = p.transit_time;
  const double spread = packet_spread(p, t);
  const double d = branch_displacement(p, t);
  const double eta =
      sc.delta_p0 * sc.delta_p0 * t * (t - T / 2.0) / (p.mass * p.mass * spread * spread);
  const double amp = 2.0 / (std::sqrt(2.0 * std::numbers::pi) * spread);
  DensityProfile out{grid, std::vector<double>(grid.points)};
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.node(i);
    const double u = x - p.x0;
    out.values[i] = amp * std::exp(-(u * u + d * d) / (2.0 * spread * spread)) *
                    std::cos(2.0 * p.epsilon * sc.k * T * (x - u * eta));
  }
  return out;
}

// Visibility of the conditioned fringes with the Gaussian envelope divided
// out: q(x) = 1 + Re[phi^+* phi^-]/(|phi^+||phi^-|) sampled across one
// spread around the packet center, V = (max - min)/(max + min). Dividing by
// the envelope isolates what the measurement controls; the raw density
// contrast would also decay with the ordinary spreading of the packet.
inline double fringe_visibility(const ModelParams& p, double t) {
  detail::require_time(t);
  if (t < p.transit_time) throw TimeBeforeExit(t, p.transit_time);
  const double spread = packet_spread(p, t);
  constexpr std::size_t n = 8192;
  const double lo = p.x0 - spread;
  const double step = 2.0 * spread / static_cast<double>(n - 1);
  double qmin = 0.0, qmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const Complex plus = branch_x_amplitude(p, BranchSign::plus, t, x);
    const Complex minus = branch_x_amplitude(p, BranchSign::minus, t, x);
    const double q = 1.0 + std::real(std::conj(plus) * minus) / (std::abs(plus) * std::abs(minus));
    if (i == 0) {
      qmin = qmax = q;
    } else {
      qmin = std::min(qmin, q);
      qmax = std::max(qmax, q);
    }
  }
  return (qmax - qmin) / (qmax + qmin);
}

// Where the envelope-normalized fringe contrast comes from, term by term.
// factor < 1 means the fringes are still essentially fully visible; the
// contrast falls off as 1/factor once factor is large.
struct DampingReport {
  double factor = 0.0;         // 0.5 / (position_term + momentum_term)
  double position_term = 0.0;  // (delta_x0 / (a t T))^2
  double momentum_term = 0.0;  // (delta_p0 / (m a T))^2, time independent
};

inline DampingReport damping_factor(const ModelParams& p, double t) {
  detail::require_time(t);
  if (t <= p.transit_time) throw TimeBeforeExit(t, p.transit_time);
  const DerivedScales sc = derive_scales(p);
  const double T = p.transit_time;
  const double pos = std::pow(p.delta_x0 / (sc.a * t * T), 2);
  const double mom = std::pow(sc.delta_p0 / (p.mass * sc.a * T), 2);
  return {0.5 / (pos + mom), pos, mom};
}

// Which-way quality of the field record: the branch momentum separation
// acquired over the transit, in units of the packet momentum width.
struct DistinguishabilityReport {
  double epsilon_T = 0.0;
  double momentum_separation_over_width = 0.0;  // m a T / delta_p0
  bool distinguishable = false;                 // separation exceeds the width
  bool distinguishable_nominal = false;         // coarse epsilon_T > 1 reading
};

inline DistinguishabilityReport distinguishability_report(const ModelParams& p) {
  const DerivedScales sc = derive_scales(p);
  const double ratio = p.mass * sc.a * p.transit_time / sc.delta_p0;
  return {sc.epsilon_T, ratio, ratio > 1.0, sc.epsilon_T > 1.0};
}

}  // namespace osg
