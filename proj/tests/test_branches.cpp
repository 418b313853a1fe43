#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <osg/branches.hpp>
#include <osg/fft.hpp>
#include <osg/grid.hpp>
#include <osg/model.hpp>

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

// Wide enough for the displaced branch plus ten spreads of tail.
osg::Grid1D branch_grid(const osg::ModelParams& p, double t, std::size_t points = 4096) {
  const double half =
      osg::branch_displacement(p, t) + 10.0 * osg::packet_spread(p, t) + std::abs(p.x0);
  return {p.x0 - half, p.x0 + half, points};
}

}  // namespace

TEST_CASE("center displacement is quadratic then ballistic and C1 at the exit", "[branches]") {
  const osg::ModelParams p = params_for(3.0);
  const double T = p.transit_time;
  const osg::DerivedScales sc = osg::derive_scales(p);

  CHECK(osg::branch_displacement(p, 0.0) == 0.0);
  CHECK(osg::branch_displacement(p, T) ==
        Catch::Approx(2.981731565673035e-10).epsilon(1e-12));
  CHECK(osg::branch_momentum(p, T) ==
        Catch::Approx(1.9878210437820234e-28).epsilon(1e-12));

  // Same value and same slope on both sides of the dispatch point.
  const double h = 1e-6 * T;
  const double left = (osg::branch_displacement(p, T) - osg::branch_displacement(p, T - h)) / h;
  const double right = (osg::branch_displacement(p, T + h) - osg::branch_displacement(p, T)) / h;
  CHECK(left == Catch::Approx(sc.a * T).epsilon(1e-5));
  CHECK(right == Catch::Approx(sc.a * T).epsilon(1e-5));
  CHECK(osg::branch_momentum(p, 5.0 * T) == osg::branch_momentum(p, T));

  const osg::BranchCenters plus = osg::branch_centers(p, osg::BranchSign::plus, 2.0 * T);
  const osg::BranchCenters minus = osg::branch_centers(p, osg::BranchSign::minus, 2.0 * T);
  CHECK(plus.x_c == Catch::Approx(-minus.x_c).epsilon(1e-15));
  CHECK(plus.p_c == Catch::Approx(-minus.p_c).epsilon(1e-15));
  CHECK(plus.x_c < 0.0);  // the +1 branch is pushed toward negative x
}

TEST_CASE("cavity and flight amplitude forms agree at the transit time", "[branches]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  const double T = p.transit_time;
  for (const osg::BranchSign s : {osg::BranchSign::plus, osg::BranchSign::minus}) {
    for (const double x : {-2e-6, -3e-7, 0.0, 5e-7, 1.5e-6}) {
      const osg::Complex cav = osg::detail::branch_x_cavity(p, s, T, x);
      const osg::Complex fli = osg::detail::branch_x_flight(p, s, T, x);
      CHECK(std::abs(cav - fli) <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(cav));

      const double q = 3.0 * osg::detail::momentum_width(p) * (x / 2e-6);
      const osg::Complex pcav = osg::detail::branch_p_cavity(p, s, T, q);
      const osg::Complex pfli = osg::detail::branch_p_flight(p, s, T, q);
      CHECK(std::abs(pcav - pfli) <=
            16.0 * std::numeric_limits<double>::epsilon() * std::abs(pcav));
    }
  }
}

TEST_CASE("branch amplitudes stay unit normalized in both regimes", "[branches]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  for (const double t : {0.0, 0.4 * p.transit_time, p.transit_time, 7.0 * p.transit_time}) {
    const osg::Grid1D g = branch_grid(p, t);
    const osg::ComplexSampleArray amps =
        osg::sample_x_amplitudes(p, osg::BranchSign::plus, t, g);
    std::vector<double> dens(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) dens[i] = std::norm(amps[i]);
    CHECK(osg::trapezoid(dens, g.dx()) == Catch::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("momentum amplitudes are the Fourier transform of the position ones", "[branches]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  osg::Dft dft;
  // One time inside the cavity and one in flight; both branches.
  for (const double t : {0.6 * p.transit_time, 1.7 * p.transit_time}) {
    for (const osg::BranchSign s : {osg::BranchSign::plus, osg::BranchSign::minus}) {
      const osg::Grid1D g = branch_grid(p, t);
      const osg::ComplexSampleArray amps = osg::sample_x_amplitudes(p, s, t, g);
      const osg::ComplexSampleArray spec = osg::continuum_p_amplitudes(amps, g, dft);
      const std::vector<double> momenta = osg::dft_momenta(g.points, g.dx());
      const double root_dp = std::sqrt(2.0 * std::numbers::pi * osg::hbar /
                                       (static_cast<double>(g.points) * g.dx()));
      double err = 0.0;
      for (std::size_t j = 0; j < g.points; ++j)
        err = std::max(err, std::abs(spec[j] - osg::branch_p_amplitude(p, s, t, momenta[j])));
      CHECK(err * root_dp <= 1e-8);
    }
  }
}

TEST_CASE("branch overlap matches direct quadrature, inside the cavity and out", "[branches]") {
  const osg::ModelParams p = params_for(0.3, 1e-5 / 100.0);
  for (const double t : {0.37 * p.transit_time, 4.0 * p.transit_time}) {
    const osg::Grid1D g = branch_grid(p, t, 8192);
    const osg::ComplexSampleArray plus = osg::sample_x_amplitudes(p, osg::BranchSign::plus, t, g);
    const osg::ComplexSampleArray minus =
        osg::sample_x_amplitudes(p, osg::BranchSign::minus, t, g);
    osg::ComplexSampleArray prod(g.points);
    for (std::size_t i = 0; i < g.points; ++i) prod[i] = std::conj(plus[i]) * minus[i];
    const osg::Complex quad = osg::trapezoid(prod, g.dx());
    CHECK(std::abs(quad - osg::branch_overlap(p, t)) <= 1e-10);
  }
}

TEST_CASE("overlap magnitude hits the frozen plateau values after the exit", "[branches]") {
  CHECK(std::abs(osg::branch_overlap(params_for(0.3), 10.0 * 0.3 / 1e8)) ==
        Catch::Approx(0.9314049333981651).epsilon(1e-9));
  CHECK(std::abs(osg::branch_overlap(params_for(3.0), 10.0 * 3.0 / 1e8)) ==
        Catch::Approx(0.0008200746270594265).epsilon(1e-9));
  // Once the kick stops the overlap magnitude is frozen for good.
  const osg::ModelParams p = params_for(3.0);
  CHECK(std::abs(osg::branch_overlap(p, p.transit_time)) ==
        Catch::Approx(std::abs(osg::branch_overlap(p, 50.0 * p.transit_time))).epsilon(1e-12));
}

TEST_CASE("overlap phase rotates with the packet center offset", "[branches]") {
  const double x0 = 1e-5 / 100.0;
  const osg::ModelParams p = params_for(0.3, x0);
  const double t = 2.0 * p.transit_time;
  const double mu = osg::branch_momentum(p, t);
  CHECK(std::arg(osg::branch_overlap(p, t)) ==
        Catch::Approx(std::remainder(2.0 * mu * x0 / osg::hbar, 2.0 * std::numbers::pi))
            .epsilon(1e-12));
  // At a node the overlap is purely real.
  CHECK(osg::branch_overlap(params_for(0.3), t).imag() == 0.0);
}

TEST_CASE("sampled branch mean follows the classical center", "[branches]") {
  const osg::ModelParams p = params_for(3.0, 1e-5 / 100.0);
  const double t = 5.0 * p.transit_time;
  const osg::Grid1D g = branch_grid(p, t);
  const osg::ComplexSampleArray amps =
      osg::sample_x_amplitudes(p, osg::BranchSign::minus, t, g);
  double mass = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < g.points; ++i) {
    const double w = std::norm(amps[i]);
    mass += w;
    mean += w * g.node(i);
  }
  mean /= mass;
  const osg::BranchCenters c = osg::branch_centers(p, osg::BranchSign::minus, t);
  CHECK(mean == Catch::Approx(c.x_c).epsilon(1e-9));
}
