#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <osg/distributions.hpp>
#include <osg/grid.hpp>
#include <osg/model.hpp>
#include <osg/scenario.hpp>

namespace {

osg::ModelParams params_for(double eps_T, double x0 = 0.0) {
  osg::ModelParams p;
  p.mass = 1e-26;
  p.epsilon = 1e8;
  p.lambda = 1e-5;
  p.omega = 0.0;
  p.delta_x0 = 1e-5 / 10.0;
  p.x0 = x0;
  p.transit_time = eps_T / 1e8;
  return p;
}

}  // namespace

TEST_CASE("ensemble fractions follow the overlap and sum to one", "[distributions]") {
  const osg::ModelParams p = params_for(0.3, 1e-5 / 100.0);
  for (const double t : {0.0, 0.5 * p.transit_time, 3.0 * p.transit_time}) {
    const double zero = osg::ensemble_fraction(p, osg::MeasurementOutcome::zero_photons, t);
    const double one = osg::ensemble_fraction(p, osg::MeasurementOutcome::one_photon, t);
    CHECK(zero + one == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(zero == Catch::Approx(0.5 * (1.0 + osg::branch_overlap(p, t).real())).epsilon(1e-15));
    CHECK(osg::ensemble_fraction(p, osg::MeasurementOutcome::unconditioned, t) == 1.0);
  }
  // Before anything happens the branches coincide and zero photons is certain.
  CHECK(osg::ensemble_fraction(p, osg::MeasurementOutcome::zero_photons, 0.0) == 1.0);
}

TEST_CASE("densities integrate to their fractions and partition pointwise", "[distributions]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  // Conditioned densities are meaningful at any time, including mid-cavity.
  for (const double t : {0.5 * p.transit_time, 10.0 * p.transit_time}) {
    const osg::Grid1D g = osg::auto_grid(p, t);
    const osg::DensityProfile unc = osg::density_unconditioned(p, g, t);
    const osg::DensityProfile zero =
        osg::density_conditioned(p, g, osg::MeasurementOutcome::zero_photons, t);
    const osg::DensityProfile one =
        osg::density_conditioned(p, g, osg::MeasurementOutcome::one_photon, t);

    CHECK(unc.integral() == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(zero.integral() ==
          Catch::Approx(osg::ensemble_fraction(p, osg::MeasurementOutcome::zero_photons, t))
              .epsilon(1e-10));
    CHECK(one.integral() ==
          Catch::Approx(osg::ensemble_fraction(p, osg::MeasurementOutcome::one_photon, t))
              .epsilon(1e-10));

    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
      peak = std::max(peak, unc.values[i]);
      worst = std::max(worst, std::abs(zero.values[i] + one.values[i] - unc.values[i]));
    }
    CHECK(worst / peak <= 1e-14);
  }
  CHECK_THROWS_AS(
      osg::density_conditioned(p, osg::auto_grid(p, 0.0), osg::MeasurementOutcome::unconditioned,
                               0.0),
      osg::UnconditionedOutcome);
}

TEST_CASE("a grid that clips the packet is rejected, not integrated", "[distributions]") {
  const osg::ModelParams p = params_for(3.0);
  const osg::Grid1D narrow{-2.0 * p.delta_x0, 2.0 * p.delta_x0, 256};
  CHECK_THROWS_AS(osg::density_unconditioned(p, narrow, 0.0), osg::GridTooNarrow);
}

TEST_CASE("closed-form interference equals the amplitude cross term in flight",
          "[distributions]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  for (const double t : {p.transit_time, 4.0 * p.transit_time, 10.0 * p.transit_time}) {
    const osg::Grid1D g = osg::auto_grid(p, t);
    const osg::DensityProfile closed = osg::interference_term(p, g, t);
    const osg::DensityProfile direct = osg::interference_cross_term(p, g, t);
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
      scale = std::max(scale, std::abs(direct.values[i]));
      worst = std::max(worst, std::abs(closed.values[i] - direct.values[i]));
    }
    CHECK(worst / scale <= 1e-10);
  }
  // The closed form is a flight-regime expression; the amplitude route keeps
  // working inside the cavity.
  CHECK_THROWS_AS(osg::interference_term(p, osg::auto_grid(p, 0.5 * p.transit_time),
                                         0.5 * p.transit_time),
                  osg::TimeBeforeExit);
  CHECK_NOTHROW(osg::interference_cross_term(p, osg::auto_grid(p, 0.5 * p.transit_time),
                                             0.5 * p.transit_time));
}

TEST_CASE("interference cross term integrates to twice the real overlap", "[distributions]") {
  const osg::ModelParams p = params_for(0.3, 1e-5 / 100.0);
  const double t = 2.0 * p.transit_time;
  const osg::DensityProfile cross = osg::interference_cross_term(p, osg::auto_grid(p, t), t);
  CHECK(cross.integral() ==
        Catch::Approx(2.0 * osg::branch_overlap(p, t).real()).epsilon(1e-10));
}

TEST_CASE("fringe visibility matches the frozen references", "[distributions]") {
  const osg::ModelParams strong = params_for(3.0);
  CHECK(osg::fringe_visibility(strong, 10.0 * strong.transit_time) ==
        Catch::Approx(0.9999999250848912).epsilon(1e-9));
  CHECK(osg::fringe_visibility(strong, 1e5 * strong.transit_time) ==
        Catch::Approx(0.007105799163044919).epsilon(1e-9));

  const osg::ModelParams weak = params_for(0.3);
  CHECK(osg::fringe_visibility(weak, 10.0 * weak.transit_time) ==
        Catch::Approx(0.017869594297049204).epsilon(1e-9));

  CHECK_THROWS_AS(osg::fringe_visibility(strong, 0.9 * strong.transit_time),
                  osg::TimeBeforeExit);
}

TEST_CASE("damping report separates the position and momentum contributions",
          "[distributions]") {
  const osg::ModelParams strong = params_for(3.0);
  const double T = strong.transit_time;

  const osg::DampingReport at10 = osg::damping_factor(strong, 10.0 * T);
  CHECK(at10.position_term == Catch::Approx(28119.197544684434).epsilon(1e-9));
  CHECK(at10.factor ==
        Catch::Approx(0.5 / (at10.position_term + at10.momentum_term)).epsilon(1e-15));

  // The momentum term never changes once the transit is over.
  const osg::DampingReport late = osg::damping_factor(strong, 1e4 * T);
  CHECK(late.momentum_term == at10.momentum_term);

  CHECK(osg::damping_factor(strong, 6321.6 * T).factor ==
        Catch::Approx(3.553012033021074).epsilon(1e-9));

  const osg::DampingReport weak = osg::damping_factor(params_for(0.3), 10.0 * 0.3 / 1e8);
  CHECK(weak.momentum_term == Catch::Approx(7.036193308495677).epsilon(1e-9));

  // Defined strictly after the exit; the boundary itself has a 1/t*T pole
  // structure that only makes sense for t > T.
  CHECK_THROWS_AS(osg::damping_factor(strong, T), osg::TimeBeforeExit);
}

TEST_CASE("distinguishability compares the kick to the momentum width", "[distributions]") {
  const osg::DistinguishabilityReport strong = osg::distinguishability_report(params_for(3.0));
  CHECK(strong.momentum_separation_over_width ==
        Catch::Approx(3.0 * 1.2566370614359175).epsilon(1e-12));
  CHECK(strong.distinguishable);
  CHECK(strong.distinguishable_nominal);

  // The kick-to-width ratio crosses one earlier than the nominal product
  // does: between them the coarse reading disagrees with the sharp one.
  const osg::DistinguishabilityReport below = osg::distinguishability_report(params_for(0.79));
  CHECK_FALSE(below.distinguishable);
  CHECK_FALSE(below.distinguishable_nominal);

  const osg::DistinguishabilityReport between = osg::distinguishability_report(params_for(0.8));
  CHECK(between.distinguishable);
  CHECK_FALSE(between.distinguishable_nominal);

  const osg::DistinguishabilityReport weak = osg::distinguishability_report(params_for(0.3));
  CHECK_FALSE(weak.distinguishable);
  CHECK(weak.epsilon_T == Catch::Approx(0.3).epsilon(1e-15));
}
