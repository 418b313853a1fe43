#pragma once

#include <cmath>
#include <numbers>

#include "constants.hpp"
#include "errors.hpp"

namespace osg {

// Which dressed path the translational packet follows. Near a field node the
// +1 branch sees the rising potential and is pushed toward negative x; the
// -1 branch is its mirror image.
enum class BranchSign : int { plus = +1, minus = -1 };

inline double sign_of(BranchSign s) { return s == BranchSign::plus ? 1.0 : -1.0; }

// Result of the photon-number measurement on the exit field. Unconditioned
// means no measurement was made: the which-way record stays in the field.
enum class MeasurementOutcome { zero_photons, one_photon, unconditioned };

// Physical configuration. SI units throughout; the CLI layer converts
// wavelength-relative conveniences at the boundary.
struct ModelParams {
  double mass = 0.0;          // atomic mass, kg
  double epsilon = 0.0;       // atom-field coupling rate, 1/s
  double lambda = 0.0;        // mode wavelength, m
  double omega = 0.0;         // mode angular frequency, 1/s; a dropped global phase, never enters dynamics
  double delta_x0 = 0.0;      // initial packet width (position standard deviation), m
  double x0 = 0.0;            // initial packet center, m
  double transit_time = 0.0;  // cavity crossing time, s
};

// Scalars derived from ModelParams that every other module consumes.
struct DerivedScales {
  double k = 0.0;          // mode wavenumber 2*pi/lambda, 1/m
  double a = 0.0;          // branch acceleration hbar*epsilon*k/mass, m/s^2
  double delta_p0 = 0.0;   // initial momentum width hbar/(2*delta_x0), kg m/s
  double epsilon_T = 0.0;  // dimensionless coupling-time product
};

namespace detail {

inline double wavenumber(const ModelParams& p) { return 2.0 * std::numbers::pi / p.lambda; }

inline double acceleration(const ModelParams& p) {
  return hbar * p.epsilon * wavenumber(p) / p.mass;
}

inline double momentum_width(const ModelParams& p) { return hbar / (2.0 * p.delta_x0); }

inline void require_time(double t) {
  if (!(t >= 0.0)) throw NegativeTime(t);
}

}  // namespace detail

// Returns its argument when every invariant holds, otherwise throws
// InvalidParameter naming the offending field. The width and center bounds
// keep the packet inside the region where the mode gradient at a node is
// effectively linear, which is what the closed forms assume.
inline const ModelParams& validate(const ModelParams& p) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(p.mass)) throw InvalidParameter("mass", "must be positive");
  if (!positive(p.epsilon)) throw InvalidParameter("epsilon", "must be positive");
  if (!positive(p.lambda)) throw InvalidParameter("lambda", "must be positive");
  if (!positive(p.transit_time)) throw InvalidParameter("transit_time", "must be positive");
  if (!std::isfinite(p.omega)) throw InvalidParameter("omega", "must be finite");
  if (!positive(p.delta_x0) || !(p.delta_x0 < p.lambda / 4.0))
    throw InvalidParameter("delta_x0", "must satisfy 0 < delta_x0 < lambda/4 "
                                       "(packet narrow against the wavelength)");
  if (!std::isfinite(p.x0) || !(std::abs(p.x0) <= p.lambda / 4.0))
    throw InvalidParameter("x0", "must satisfy |x0| <= lambda/4 (packet near a node)");
  return p;
}

inline DerivedScales derive_scales(const ModelParams& p) {
  validate(p);
  return {detail::wavenumber(p), detail::acceleration(p), detail::momentum_width(p),
          p.epsilon * p.transit_time};
}

// Width of the freely spreading packet at time t. The linear branch
// potentials shift centers but never widths, so this is the width of every
// branch at every time.
inline double packet_spread(const ModelParams& p, double t) {
  detail::require_time(t);
  return std::hypot(p.delta_x0, detail::momentum_width(p) * t / p.mass);
}

// Position-momentum correlation of the spreading packet: 0 at t = 0 and
// approaching 1 from below as the packet becomes momentum dominated.
inline double correlation_coefficient(const ModelParams& p, double t) {
  detail::require_time(t);
  return detail::momentum_width(p) * t / (p.mass * packet_spread(p, t));
}

// Symmetrized x-p covariance of the spreading packet, delta_p0^2 t / m.
// Together with the spread and correlation it satisfies
// spread^2 * delta_p0^2 * (1 - rho^2) = hbar^2/4 identically.
inline double packet_covariance(const ModelParams& p, double t) {
  detail::require_time(t);
  const double dp0 = detail::momentum_width(p);
  return dp0 * dp0 * t / p.mass;
}

// Second-moment bundle of a phase-space distribution.
struct CovarianceSummary {
  double var_x = 0.0;   // m^2
  double var_p = 0.0;   // (kg m/s)^2
  double cov_xp = 0.0;  // J s
  double det = 0.0;     // (J s)^2, var_x*var_p - cov_xp^2
  double rho = 0.0;     // dimensionless correlation
};

inline CovarianceSummary covariance_from_moments(double var_x, double var_p, double cov_xp) {
  return {var_x, var_p, cov_xp, var_x * var_p - cov_xp * cov_xp,
          cov_xp / std::sqrt(var_x * var_p)};
}

}  // namespace osg
