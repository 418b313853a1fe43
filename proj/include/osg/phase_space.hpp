#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "branches.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "propagator.hpp"

namespace osg {

// Dimensionless phase-space separation of the branch centers, combining the
// position split (in spreads acquired by the kick) and the momentum split
// (in initial widths). exp(-D^2/8) reproduces |<phi^+|phi^->| exactly, at
// every time, which is what makes D the natural distinguishability scale.
inline double phase_space_distance(const ModelParams& p, double t) {
  detail::require_time(t);
  const double tau = std::min(t, p.transit_time);
  const double a = detail::acceleration(p);
  return 2.0 * std::hypot(a * tau * tau / (2.0 * p.delta_x0),
                          p.mass * a * tau / detail::momentum_width(p));
}

// Normalization constants of the two conditioned superpositions
// phi^+ +/- phi^-: N = 2 (1 +/- Re<phi^+|phi^->), so N/4 is the outcome
// probability.
struct Normalizations {
  double zero = 0.0;
  double one = 0.0;
};

inline Normalizations normalizations(const ModelParams& p, double t) {
  detail::require_time(t);
  const double re = branch_overlap(p, t).real();
  return {2.0 * (1.0 + re), 2.0 * (1.0 - re)};
}

namespace detail {

// Correlated Gaussian envelope common to every phase-space expression here,
// with (ux, up) the offsets in units of the current spread and the (time
// independent) momentum width.
inline double correlated_envelope(double ux, double up, double rho) {
  return std::exp(-(ux * ux - 2.0 * rho * ux * up + up * up) / (2.0 * (1.0 - rho * rho)));
}

}  // namespace detail

// Wigner function of one branch, carrying its ensemble weight 1/2. Peak
// value 1/(2 pi hbar): the branch alone is pure, and stays Gaussian with
// the free-spreading covariance because the potential is linear.
inline double wigner_branch(const ModelParams& p, BranchSign s, double t, double x, double p_arg) {
  detail::require_time(t);
  const BranchCenters c = branch_centers(p, s, t);
  const double ux = (x - c.x_c) / packet_spread(p, t);
  const double up = (p_arg - c.p_c) / detail::momentum_width(p);
  return detail::correlated_envelope(ux, up, correlation_coefficient(p, t)) /
         (2.0 * std::numbers::pi * hbar);
}

// Field traced out: the branch mixture. Nonnegative everywhere, interference
// completely absent.
inline double wigner_reduced(const ModelParams& p, double t, double x, double p_arg) {
  return wigner_branch(p, BranchSign::plus, t, x, p_arg) +
         wigner_branch(p, BranchSign::minus, t, x, p_arg);
}

// Oscillatory cross term between the branches, centered at the midpoint of
// the two branch centers. The cosine argument uses the absolute position:
// the measurement-restored fringes know where the field node is, not just
// where the packet started. Integrates to Re<phi^+|phi^->. Flight form only.
inline double wigner_interference(const ModelParams& p, double t, double x, double p_arg) {
  detail::require_time(t);
  if (t < p.transit_time) throw TimeBeforeExit(t, p.transit_time);
  const DerivedScales sc = derive_scales(p);
  const double T = p.transit_time;
  const double ux = (x - p.x0) / packet_spread(p, t);
  const double up = p_arg / sc.delta_p0;
  const double envelope = detail::correlated_envelope(ux, up, correlation_coefficient(p, t));
  const double theta = 2.0 * p.epsilon * sc.k * T * (x - (p_arg / p.mass) * (t - T / 2.0));
  return envelope * std::cos(theta) / (std::numbers::pi * hbar);
}

// Wigner function of the normalized post-measurement state,
// (2/N)(W^+ + W^- +/- W^q). Zero photons add the fringes, one photon
// subtracts them; weighted by the outcome probabilities the fringes cancel
// and the reduced mixture is recovered.
inline double wigner_conditioned(const ModelParams& p, MeasurementOutcome outcome, double t,
                                 double x, double p_arg) {
  detail::require_time(t);
  if (outcome == MeasurementOutcome::unconditioned) throw UnconditionedOutcome();
  if (t < p.transit_time) throw TimeBeforeExit(t, p.transit_time);
  const Normalizations n = normalizations(p, t);
  const double sg = outcome == MeasurementOutcome::zero_photons ? 1.0 : -1.0;
  const double norm = outcome == MeasurementOutcome::zero_photons ? n.zero : n.one;
  return (2.0 / norm) * (wigner_reduced(p, t, x, p_arg) +
                         sg * wigner_interference(p, t, x, p_arg));
}

inline WignerField sample_wigner(const ModelParams& p, const Grid2D& grid, double t,
                                 WignerKind kind) {
  grid.validate();
  WignerField field{grid, std::vector<double>(grid.size())};
  auto eval = [&](double x, double pp) {
    switch (kind) {
      case WignerKind::reduced: return wigner_reduced(p, t, x, pp);
      case WignerKind::conditioned_zero:
        return wigner_conditioned(p, MeasurementOutcome::zero_photons, t, x, pp);
      case WignerKind::conditioned_one:
        return wigner_conditioned(p, MeasurementOutcome::one_photon, t, x, pp);
      case WignerKind::branch_plus: return wigner_branch(p, BranchSign::plus, t, x, pp);
      case WignerKind::branch_minus: return wigner_branch(p, BranchSign::minus, t, x, pp);
      case WignerKind::interference_only: return wigner_interference(p, t, x, pp);
    }
    throw InvalidParameter("kind", "unknown Wigner kind");
  };
  for (std::size_t i = 0; i < grid.x.points; ++i)
    for (std::size_t j = 0; j < grid.p.points; ++j)
      field.value(i, j) = eval(grid.x.node(i), grid.p.node(j));
  return field;
}

// Second moments of the reduced (branch mixture) state. The mixture inherits
// the common packet covariance plus the center split contributions, and its
// determinant (hbar^2/4)(1 + D^2/4) freezes once the kick stops: free flight
// is a symplectic shear.
inline CovarianceSummary uncertainty_area_reduced(const ModelParams& p, double t) {
  detail::require_time(t);
  const double spread = packet_spread(p, t);
  const double d = branch_displacement(p, t);
  const double mu = branch_momentum(p, t);
  const double dp0 = detail::momentum_width(p);
  return covariance_from_moments(spread * spread + d * d, dp0 * dp0 + mu * mu,
                                 packet_covariance(p, t) + d * mu);
}

namespace detail {

// Closed-form second moments of (phi^+ +/- phi^-)/sqrt(N). Requires x0 = 0,
// where the overlap is real and the cross moments collapse to the kappa
// terms below; A1 and A2 are the first-moment-like integrals the cross term
// contributes.
inline CovarianceSummary conditioned_moments_closed(const ModelParams& p,
                                                    MeasurementOutcome outcome, double t) {
  const double sg = outcome == MeasurementOutcome::zero_photons ? 1.0 : -1.0;
  const double var = packet_spread(p, t) * packet_spread(p, t);
  const double c = packet_covariance(p, t);
  const double d = branch_displacement(p, t);
  const double mu = branch_momentum(p, t);
  const double dp0 = momentum_width(p);
  const double kappa = std::exp(-std::pow(phase_space_distance(p, t), 2) / 8.0);
  const double a1 = (2.0 / hbar) * (var * mu - c * d);
  const double a2 = (2.0 / hbar) * (c * mu - dp0 * dp0 * d);
  const double n = 2.0 * (1.0 + sg * kappa);
  return covariance_from_moments(
      (2.0 / n) * (var + d * d + sg * kappa * (var - a1 * a1)),
      (2.0 / n) * (dp0 * dp0 + mu * mu + sg * kappa * (dp0 * dp0 - a2 * a2)),
      (2.0 / n) * (c + d * mu + sg * kappa * (c - a1 * a2)));
}

// General-x0 fallback: sample the conditioned superposition on a grid wide
// enough for both displaced branches and take discrete moments. The grid is
// widened in momentum until the FFT band holds the kicked spectrum.
inline CovarianceSummary conditioned_moments_numeric(const ModelParams& p,
                                                     MeasurementOutcome outcome, double t) {
  const double sg = outcome == MeasurementOutcome::zero_photons ? 1.0 : -1.0;
  const double half = branch_displacement(p, t) + 12.0 * packet_spread(p, t);
  const double preach = 2.0 * (branch_momentum(p, t) + 8.0 * momentum_width(p));
  std::size_t points = 8192;
  while (std::numbers::pi * hbar * static_cast<double>(points) / (2.0 * half) < preach)
    points *= 2;
  Grid1D grid{p.x0 - half, p.x0 + half, points};
  NumericState state{grid, ComplexSampleArray(points), t, BranchSign::plus};
  for (std::size_t i = 0; i < points; ++i) {
    const double x = grid.node(i);
    state.amplitudes[i] = branch_x_amplitude(p, BranchSign::plus, t, x) +
                          sg * branch_x_amplitude(p, BranchSign::minus, t, x);
  }
  return moments(state);
}

}  // namespace detail

// Second moments of the state conditioned on the measurement outcome. At
// x0 = 0 the closed form applies; off the node the overlap phase makes the
// cross moments x0 dependent and the grid route is used instead.
inline CovarianceSummary uncertainty_area_conditioned(const ModelParams& p,
                                                      MeasurementOutcome outcome, double t) {
  detail::require_time(t);
  if (outcome == MeasurementOutcome::unconditioned) throw UnconditionedOutcome();
  validate(p);
  return p.x0 == 0.0 ? detail::conditioned_moments_closed(p, outcome, t)
                     : detail::conditioned_moments_numeric(p, outcome, t);
}

}  // namespace osg
