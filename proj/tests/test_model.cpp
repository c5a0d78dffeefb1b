#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lsv/errors.hpp"
#include "lsv/model.hpp"
#include "lsv/model_io.hpp"

using namespace lsv;

namespace {
// Fig 1 parameter set
constexpr double kKappa = 1.15, kTheta0 = 0.06, kTheta1 = -0.08;
constexpr double kDelta0 = 0.0625, kDelta1 = -0.16;
constexpr double kRho0 = -0.125, kRho1 = 0.32;
const double kYbar = std::log(0.05);

ModelClosures heston_closures() {
  ModelClosures f;
  f.a = [](double, double, double y) { return 0.5 * std::exp(y); };
  f.b = [](double t, double, double y) {
    return 0.5 * (kDelta0 + kDelta1 * t) * std::exp(-y);
  };
  f.c = [](double t, double, double) { return kRho0 + kRho1 * t; };
  f.alpha = [](double t, double, double y) {
    return (kKappa * (kTheta0 + kTheta1 * t) -
            0.5 * (kDelta0 + kDelta1 * t)) *
               std::exp(-y) -
           kKappa;
  };
  return f;
}
}  // namespace

TEST_CASE("model: TimeCoeff evaluation and integration") {
  const TimeCoeff f({0.25, -0.1, 0.06});
  CHECK(f.eval(0.5) == doctest::Approx(0.25 - 0.05 + 0.015).epsilon(1e-15));
  // exact antiderivative 0.25 t - 0.05 t^2 + 0.02 t^3
  const double expected = (0.25 * 1.0 - 0.05 + 0.02) - 0.0;
  CHECK(f.integral(0.0, 1.0) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(TimeCoeff({0.0, 0.0}).is_zero());
}

TEST_CASE("model: heston_td zoo tables") {
  const ModelSpec m =
      zoo_heston_td(kKappa, kTheta0, kTheta1, kDelta0, kDelta1, kRho0, kRho1,
                    0.0, kYbar, 2);

  SUBCASE("a00 = e^ybar/2 = 0.025") {
    CHECK(m.a(0, 0).eval(0.0) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(m.a(0, 1).eval(0.7) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(m.a(0, 2).eval(0.7) == doctest::Approx(0.0125).epsilon(1e-15));
    CHECK(m.a(1, 0).is_zero());
  }
  SUBCASE("c00(t) = rho0 + rho1 t") {
    CHECK(m.c(0, 0).eval(0.0) == doctest::Approx(kRho0).epsilon(1e-15));
    CHECK(m.c(0, 0).eval(0.25) ==
          doctest::Approx(kRho0 + 0.25 * kRho1).epsilon(1e-15));
    CHECK(m.c(0, 1).is_zero());
  }
  SUBCASE("b00(t) and the y-slope") {
    const double Ei = std::exp(-kYbar);
    CHECK(m.b(0, 0).eval(0.1) ==
          doctest::Approx(0.5 * (kDelta0 + 0.1 * kDelta1) * Ei)
              .epsilon(1e-15));
    CHECK(m.b(0, 1).eval(0.1) ==
          doctest::Approx(-0.5 * (kDelta0 + 0.1 * kDelta1) * Ei)
              .epsilon(1e-15));
  }
  SUBCASE("degenerate time parameters reduce to constant Heston") {
    const ModelSpec c0 =
        zoo_heston_td(kKappa, kTheta0, 0.0, kDelta0, 0.0, kRho0, 0.0, 0.0,
                      kYbar, 2);
    CHECK(c0.b(0, 0).degree() == 0);
    CHECK(c0.c(0, 0).degree() == 0);
    CHECK(c0.alpha(0, 0).degree() == 0);
  }
  SUBCASE("not one-dimensional, no default") {
    CHECK(!m.one_dimensional());
    CHECK(!m.has_default());
  }
}

TEST_CASE("model: three_halves zoo tables") {
  const double kap = 22.84, theta = 0.4669 * 0.4669, del = 8.56, rho = -0.99;
  const double ybar = std::log(0.245 * 0.245);
  const ModelSpec m = zoo_three_halves(kap, theta, del, rho, 0.0, ybar, 2);
  const double E = std::exp(ybar);
  CHECK(m.a(0, 1).eval(0.0) == doctest::Approx(0.5 * E).epsilon(1e-15));
  CHECK(m.b(0, 0).eval(0.0) ==
        doctest::Approx(0.5 * del * del * E).epsilon(1e-15));
  CHECK(m.c(0, 1).eval(0.0) == doctest::Approx(rho * del * E).epsilon(1e-15));
  // alpha_{0,1} = -(kappa + delta^2/2) e^ybar
  CHECK(m.alpha(0, 1).eval(0.0) ==
        doctest::Approx(-(kap + 0.5 * del * del) * E).epsilon(1e-12));
  CHECK_THROWS_AS(zoo_three_halves(kap, theta, del, 1.0, 0.0, ybar, 2),
                  ModelError);
}

TEST_CASE("model: jdcev and cev zoo tables") {
  const double del = 0.2, beta = -0.4, b = 0.04, c = 1.5, xbar = 0.3;
  const ModelSpec m = zoo_jdcev(del, beta, b, c, xbar, 2);
  const double sig2 = del * del * std::exp(2.0 * beta * xbar);

  CHECK(m.a(1, 0).eval(0.0) == doctest::Approx(beta * sig2).epsilon(1e-15));
  CHECK(m.gamma(0, 0).eval(0.0) ==
        doctest::Approx(b + c * sig2).epsilon(1e-15));
  CHECK(m.gamma(1, 0).eval(0.0) ==
        doctest::Approx(2.0 * beta * c * sig2).epsilon(1e-15));
  CHECK(m.one_dimensional());
  CHECK(m.has_default());

  const ModelSpec cev = zoo_cev(del, beta, xbar, 2);
  CHECK(cev.gamma_table().all_zero());
  CHECK(!cev.has_default());

  CHECK_THROWS_AS(zoo_jdcev(del, beta, -0.1, c, xbar, 2), ModelError);
}

TEST_CASE("model: closures reproduce the heston zoo tables to 1e-6") {
  const ModelSpec zoo =
      zoo_heston_td(kKappa, kTheta0, kTheta1, kDelta0, kDelta1, kRho0, kRho1,
                    0.0, kYbar, 3);
  const ModelSpec fd =
      taylor_table_from_closures(heston_closures(), 0.0, kYbar, 3, 1);
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; i + j <= 3; ++j) {
      for (double t : {0.0, 0.25}) {
        CHECK(std::fabs(fd.a(i, j).eval(t) - zoo.a(i, j).eval(t)) <= 1e-6);
        CHECK(std::fabs(fd.b(i, j).eval(t) - zoo.b(i, j).eval(t)) <= 1e-6);
        CHECK(std::fabs(fd.c(i, j).eval(t) - zoo.c(i, j).eval(t)) <= 1e-6);
        CHECK(std::fabs(fd.alpha(i, j).eval(t) - zoo.alpha(i, j).eval(t)) <=
              1e-6 * std::max(1.0, std::fabs(zoo.alpha(i, j).eval(t))));
      }
    }
  }
}

TEST_CASE("model: three-halves alpha slope via finite differences") {
  // cross-check of the hand derivative at ybar = log(0.245^2)
  const double kap = 22.84, del = 8.56;
  const double ybar = std::log(0.245 * 0.245);
  ModelClosures f;
  f.alpha = [=](double, double, double y) {
    return kap * (0.4669 * 0.4669 - std::exp(y)) -
           0.5 * del * del * std::exp(y);
  };
  f.a = [](double, double, double y) { return 0.5 * std::exp(y); };
  const ModelSpec m = taylor_table_from_closures(f, 0.0, ybar, 1, 0);
  const double expected = -(kap + 0.5 * del * del) * std::exp(ybar);
  CHECK(std::fabs(m.alpha(0, 1).eval(0.0) - expected) <=
        1e-6 * std::fabs(expected));
}

TEST_CASE("model: parabolicity checks") {
  SUBCASE("Fig 1 and Fig 2 parameter sets are accepted") {
    const ModelSpec heston =
        zoo_heston_td(kKappa, kTheta0, kTheta1, kDelta0, kDelta1, kRho0,
                      kRho1, 0.0, kYbar, 2);
    CHECK_NOTHROW(heston.validate_on(0.0, 0.25));
    const ModelSpec th =
        zoo_three_halves(22.84, 0.4669 * 0.4669, 8.56, -0.99, 0.0,
                         std::log(0.245 * 0.245), 2);
    CHECK_NOTHROW(th.validate_on(0.0, 0.25));
  }
  SUBCASE("|rho| >= 1 is rejected on the grid") {
    // c00 grows until c^2 >= 4ab inside [0, 1]
    CoeffTable a(1), b(1), c(1), alpha(1), gamma(1);
    a.set(0, 0, TimeCoeff({0.02}));
    b.set(0, 0, TimeCoeff({0.02}));
    c.set(0, 0, TimeCoeff({0.0, 0.05}));
    alpha.set(0, 0, TimeCoeff({0.1}));
    const ModelSpec m(1, 0.0, 0.0, a, b, c, alpha, gamma);
    CHECK_THROWS_AS(m.validate_on(0.0, 1.0), ModelError);
    CHECK_NOTHROW(m.validate_on(0.0, 0.5));
  }
  SUBCASE("vanishing vol-of-vol square is rejected") {
    // delta(t)^2 = 0.0625 - 0.16 t hits zero at t ~ 0.39
    const ModelSpec heston =
        zoo_heston_td(kKappa, kTheta0, kTheta1, kDelta0, kDelta1, kRho0,
                      kRho1, 0.0, kYbar, 2);
    CHECK_THROWS_AS(heston.validate_on(0.0, 0.5), ModelError);
  }
}

TEST_CASE("model: config files round-trip exactly") {
  ModelConfig cfg;
  cfg.kind = "heston_td";
  cfg.order = 2;
  cfg.x0 = 0.0;
  cfg.y0 = kYbar;
  cfg.params = {{"kappa", kKappa},   {"theta0", kTheta0}, {"theta1", kTheta1},
                {"delta0", kDelta0}, {"delta1", kDelta1}, {"rho0", kRho0},
                {"rho1", kRho1}};

  std::ostringstream out;
  cfg.write(out);
  std::istringstream in(out.str());
  const ModelConfig back = ModelConfig::parse(in);
  CHECK(back == cfg);

  std::ostringstream out2;
  back.write(out2);
  CHECK(out2.str() == out.str());

  const ModelSpec m = back.build();
  CHECK(m.a(0, 0).eval(0.0) == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("model: config rejects unknown and missing keys") {
  {
    std::istringstream in(
        "kind = bs_const\norder = 2\nsigma = 0.2\nbogus = 1\n");
    const ModelConfig cfg = ModelConfig::parse(in);
    CHECK_THROWS_AS(cfg.build(), std::invalid_argument);
  }
  {
    std::istringstream in("kind = bs_const\norder = 2\n");
    const ModelConfig cfg = ModelConfig::parse(in);
    CHECK_THROWS_AS(cfg.build(), std::invalid_argument);
  }
  {
    std::istringstream in("kind = bs_const\nsigma = 0.2\n");
    CHECK_THROWS_AS(ModelConfig::parse(in), std::invalid_argument);
  }
}

TEST_CASE("model: custom table config") {
  std::istringstream in(
      "kind = custom\n"
      "order = 1\n"
      "x0 = 0\n"
      "y0 = 0\n"
      "a_0_0 = 0.02 0.01\n"
      "gamma_0_0 = 0.03\n"
      "a_1_0 = 0.005\n");
  const ModelConfig cfg = ModelConfig::parse(in);
  const ModelSpec m = cfg.build();
  CHECK(m.a(0, 0).eval(2.0) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(m.gamma(0, 0).eval(0.0) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(m.one_dimensional());
  CHECK(m.has_default());

  std::ostringstream out;
  cfg.write(out);
  std::istringstream in2(out.str());
  CHECK(ModelConfig::parse(in2) == cfg);
}

TEST_CASE("model: order cap is enforced") {
  CHECK_THROWS_AS(zoo_bs_const(0.2, 0.0, 5), CapabilityError);
}
