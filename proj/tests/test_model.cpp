#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <osg/errors.hpp>
#include <osg/grid.hpp>
#include <osg/model.hpp>

namespace {

osg::ModelParams good_params() {
  osg::ModelParams p;
  p.mass = 1e-26;
  p.epsilon = 1e8;
  p.lambda = 1e-5;
  p.omega = 0.0;
  p.delta_x0 = 1e-5 / 10.0;
  p.x0 = 0.0;
  p.transit_time = 3.0 / 1e8;
  return p;
}

}  // namespace

TEST_CASE("parameter validation accepts the reference configuration", "[model]") {
  CHECK_NOTHROW(osg::validate(good_params()));
}

TEST_CASE("parameter validation names the offending field", "[model]") {
  auto field_of = [](osg::ModelParams p) -> std::string {
    try {
      osg::validate(p);
    } catch (const osg::InvalidParameter& e) {
      return e.field();
    }
    return "";
  };

  osg::ModelParams p = good_params();
  p.mass = 0.0;
  CHECK(field_of(p) == "mass");

  p = good_params();
  p.epsilon = -1e8;
  CHECK(field_of(p) == "epsilon");

  p = good_params();
  p.lambda = std::numeric_limits<double>::infinity();
  CHECK(field_of(p) == "lambda");

  p = good_params();
  p.transit_time = 0.0;
  CHECK(field_of(p) == "transit_time");

  p = good_params();
  p.omega = std::numeric_limits<double>::quiet_NaN();
  CHECK(field_of(p) == "omega");

  // The width must stay well under a quarter wavelength for the node-linear
  // field approximation to make sense, and the center must sit near a node.
  p = good_params();
  p.delta_x0 = 0.3 * p.lambda;
  CHECK(field_of(p) == "delta_x0");

  p = good_params();
  p.x0 = 0.3 * p.lambda;
  CHECK(field_of(p) == "x0");

  p = good_params();
  p.x0 = -0.3 * p.lambda;
  CHECK(field_of(p) == "x0");
}

TEST_CASE("derived scales match the frozen reference values", "[model]") {
  const osg::DerivedScales sc = osg::derive_scales(good_params());
  CHECK(sc.k == Catch::Approx(2.0 * std::numbers::pi / 1e-5).epsilon(1e-15));
  CHECK(sc.a == Catch::Approx(662607.0145940079).epsilon(1e-12));
  CHECK(sc.delta_p0 == Catch::Approx(5.272859084999999e-29).epsilon(1e-12));
  CHECK(sc.epsilon_T == Catch::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("packet spread starts at the initial width and grows as a hypotenuse", "[model]") {
  const osg::ModelParams p = good_params();
  CHECK(osg::packet_spread(p, 0.0) == p.delta_x0);

  const double t = 3e-7;
  const double dp0 = osg::derive_scales(p).delta_p0;
  const double expected = std::sqrt(p.delta_x0 * p.delta_x0 +
                                    std::pow(dp0 * t / p.mass, 2));
  CHECK(osg::packet_spread(p, t) == Catch::Approx(expected).epsilon(1e-15));
  CHECK(osg::packet_spread(p, t) / p.delta_x0 - 1.0 ==
        Catch::Approx(1.2511361491274187e-06).epsilon(1e-9));

  CHECK_THROWS_AS(osg::packet_spread(p, -1e-9), osg::NegativeTime);
}

TEST_CASE("correlation coefficient matches the frozen value and stays below one", "[model]") {
  const osg::ModelParams p = good_params();
  CHECK(osg::correlation_coefficient(p, 0.0) == 0.0);
  CHECK(osg::correlation_coefficient(p, 3e-7) ==
        Catch::Approx(0.0015818557463830923).epsilon(1e-12));
  CHECK(osg::correlation_coefficient(p, 1e-2) < 1.0);  // momentum dominated, still below one
}

TEST_CASE("spread, width, and correlation preserve the pure-state area", "[model]") {
  const osg::ModelParams p = good_params();
  const double dp0 = osg::derive_scales(p).delta_p0;
  // Largest time keeps rho moderate; near rho -> 1 the identity is still true
  // but 1 - rho^2 cancels catastrophically and would test rounding, not code.
  for (const double t : {0.0, 1e-9, 3e-8, 3e-7, 1e-4}) {
    const double s = osg::packet_spread(p, t);
    const double rho = osg::correlation_coefficient(p, t);
    const double area = s * s * dp0 * dp0 * (1.0 - rho * rho);
    CHECK(area == Catch::Approx(osg::hbar * osg::hbar / 4.0).epsilon(1e-12));
    // and the covariance is consistent with rho by construction
    CHECK(osg::packet_covariance(p, t) ==
          Catch::Approx(rho * s * dp0).epsilon(1e-12).margin(1e-300));
  }
}

TEST_CASE("covariance summary reports determinant and correlation consistently", "[model]") {
  const osg::CovarianceSummary c = osg::covariance_from_moments(4.0, 9.0, 3.0);
  CHECK(c.det == Catch::Approx(4.0 * 9.0 - 9.0).epsilon(1e-15));
  CHECK(c.rho == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("grids expose exact nodes and reject unusable shapes", "[model]") {
  const osg::Grid1D g{-2.0, 2.0, 128};
  CHECK(g.dx() == Catch::Approx(4.0 / 128.0).epsilon(1e-16));
  CHECK(g.node(0) == -2.0);
  CHECK(g.node(64) == Catch::Approx(0.0).margin(1e-15));
  CHECK(g.nodes().size() == 128);
  CHECK(g.covers(-1.5, 1.5));
  CHECK_FALSE(g.covers(-3.0, 1.0));
  CHECK_NOTHROW(g.validate());

  CHECK_THROWS_AS((osg::Grid1D{0.0, 1.0, 100}.validate()), osg::InvalidParameter);  // not 2^k
  CHECK_THROWS_AS((osg::Grid1D{0.0, 1.0, 32}.validate()), osg::InvalidParameter);   // too few
  CHECK_THROWS_AS((osg::Grid1D{1.0, 1.0, 128}.validate()), osg::InvalidParameter);  // empty span
  CHECK_THROWS_AS((osg::Grid2D{{0.0, 1.0, 128}, {0.0, 1.0, 8}}.validate()),
                  osg::InvalidParameter);
}

TEST_CASE("trapezoid quadrature is exact for linear samples", "[model]") {
  std::vector<double> f(65);
  const double dx = 0.25;
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 3.0 + 2.0 * static_cast<double>(i) * dx;
  const double span = static_cast<double>(f.size() - 1) * dx;
  CHECK(osg::trapezoid(f, dx) == Catch::Approx(3.0 * span + span * span).epsilon(1e-14));
}
