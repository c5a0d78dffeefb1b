#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <functional>
#include <random>
#include <vector>

#include "lsv/timepoly.hpp"

using namespace lsv;

namespace {

// deterministic random polynomial over the given universe
TimePoly random_poly(std::mt19937_64& rng, const TimeUniverse& u,
                     int max_terms = 4, int max_deg = 2) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  TimePoly p(u);
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    TimePoly::Key key{};
    for (int s = 0; s < u.size(); ++s) {
      key[s] = std::uint8_t(deg(rng));
    }
    p.add_term(key, coeff(rng));
  }
  return p;
}

// 8-point Gauss-Legendre on [a, b]; exact for the degrees used here
double quad(const std::function<double(double)>& f, double a, double b) {
  static const double xs[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double ws[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += ws[i] * f(0.5 * (b - a) * xs[i] + 0.5 * (a + b));
  }
  return 0.5 * (b - a) * sum;
}

}  // namespace

TEST_CASE("timealg: addition") {
  TimeUniverse u(2);
  const TimePoly q = TimePoly::monomial(u, u.s(1), 1);

  SUBCASE("additive inverse cancels exactly") {
    CHECK((q + (-q)).is_zero());
  }
  SUBCASE("disjoint supports") {
    const TimePoly one = TimePoly::constant(u, 1.0);
    const TimePoly q2 = TimePoly::monomial(u, u.s(1), 2);
    const TimePoly sum = (one + q) + q2;
    CHECK(sum.term_count() == 3);
    const std::vector<double> vals = {0.0, 0.7, 0.0, 0.0};
    CHECK(sum.eval(vals) == doctest::Approx(1.0 + 0.7 + 0.49).epsilon(1e-15));
  }
  SUBCASE("affine vol-of-vol coefficients") {
    // delta0 = 0.0625, delta1 = -0.16
    const TimePoly p1 = TimePoly::constant(u, 0.0625) +
                        TimePoly::monomial(u, u.s(1), 1, -0.16);
    const TimePoly p2 = TimePoly::constant(u, 0.0625);
    const TimePoly sum = p1 + p2;
    const std::vector<double> vals = {0.0, 1.0, 0.0, 0.0};
    CHECK(sum.eval(vals) == doctest::Approx(0.125 - 0.16).epsilon(1e-15));
    const std::vector<double> vals0 = {0.0, 0.0, 0.0, 0.0};
    CHECK(sum.eval(vals0) == doctest::Approx(0.125).epsilon(1e-15));
  }
}

TEST_CASE("timealg: multiplication") {
  TimeUniverse u(2);
  const TimePoly q = TimePoly::monomial(u, u.s(1), 1);
  const TimePoly one = TimePoly::constant(u, 1.0);

  CHECK(q * one == q);
  CHECK(q * q == TimePoly::monomial(u, u.s(1), 2));
  const TimePoly prod = (one + q) * (one - q);
  CHECK(prod == one - TimePoly::monomial(u, u.s(1), 2));
}

TEST_CASE("timealg: universe mismatch is a usage error") {
  TimeUniverse u2(2), u3(3);
  const TimePoly p = TimePoly::constant(u2, 1.0);
  const TimePoly q = TimePoly::constant(u3, 1.0);
  CHECK_THROWS_AS(p + q, std::invalid_argument);
  CHECK_THROWS_AS(p * q, std::invalid_argument);
}

TEST_CASE("timealg: definite integration") {
  TimeUniverse u(2);

  SUBCASE("constant over [t, s1]") {
    const TimePoly one = TimePoly::constant(u, 1.0);
    const TimePoly r = integrate(one, u.s(2), u.t(), u.s(1));
    CHECK(r.degree(u.s(2)) == 0);  // integrated variable is gone
    CHECK(r == TimePoly::monomial(u, u.s(1), 1) -
                   TimePoly::monomial(u, u.t(), 1));
  }
  SUBCASE("simplex volume") {
    const TimePoly one = TimePoly::constant(u, 1.0);
    const TimePoly inner = integrate(one, u.s(2), u.s(1), u.T());
    const TimePoly outer = integrate(inner, u.s(1), u.t(), u.T());
    const std::vector<double> vals = {0.25, 0.0, 0.0, 1.0};
    CHECK(outer.eval(vals) ==
          doctest::Approx(0.75 * 0.75 / 2.0).epsilon(1e-15));
  }
  SUBCASE("affine integrand against hand antiderivative and quadrature") {
    const double d0 = 0.0625, d1 = -0.16;
    const TimePoly f = TimePoly::constant(u, d0) +
                       TimePoly::monomial(u, u.s(2), 1, d1);
    const TimePoly r = integrate(f, u.s(2), u.t(), u.s(1));
    const double t = 0.1, s = 0.8;
    const std::vector<double> vals = {t, s, 0.0, 0.0};
    const double hand = d0 * (s - t) + 0.5 * d1 * (s * s - t * t);
    CHECK(r.eval(vals) == doctest::Approx(hand).epsilon(1e-15));
    const double numeric = quad([&](double q) { return d0 + d1 * q; }, t, s);
    CHECK(r.eval(vals) == doctest::Approx(numeric).epsilon(1e-14));
  }
  SUBCASE("variable appearing in a bound is rejected") {
    const TimePoly p = TimePoly::monomial(u, u.s(1), 1);
    CHECK_THROWS_AS(integrate(p, u.s(1), u.s(1), u.T()),
                    std::invalid_argument);
  }
}

TEST_CASE("timealg: ring axioms on random triples") {
  TimeUniverse u(2);
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const TimePoly a = random_poly(rng, u);
    const TimePoly b = random_poly(rng, u);
    const TimePoly c = random_poly(rng, u);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    // associativity and distributivity compared by evaluation; the two
    // association orders can differ in the last ulp of a coefficient
    std::uniform_real_distribution<double> point(0.1, 1.1);
    std::vector<double> vals(u.size());
    for (auto& v : vals) v = point(rng);
    CHECK(((a * b) * c).eval(vals) ==
          doctest::Approx((a * (b * c)).eval(vals)).epsilon(1e-12));
    const double lhs = (a * (b + c)).eval(vals);
    const double rhs = (a * b + a * c).eval(vals);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("timealg: integration is linear") {
  TimeUniverse u(2);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const TimePoly p = random_poly(rng, u);
    const TimePoly q = random_poly(rng, u);
    const double ca = 1.5, cb = -0.25;
    const TimePoly lhs = integrate(p * ca + q * cb, u.s(1), u.t(), u.T());
    const TimePoly rhs = integrate(p, u.s(1), u.t(), u.T()) * ca +
                         integrate(q, u.s(1), u.t(), u.T()) * cb;
    std::uniform_real_distribution<double> point(0.1, 1.1);
    std::vector<double> vals(u.size());
    for (auto& v : vals) v = point(rng);
    CHECK(lhs.eval(vals) == doctest::Approx(rhs.eval(vals)).epsilon(1e-13));
  }
}

TEST_CASE("timealg: Fubini on the simplex for symmetric integrands") {
  // for symmetric f(s1,s2), the iterated integral over t < s1 < s2 < T is
  // half the integral over the full square
  TimeUniverse u(2);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const double c00 = coeff(rng), c11 = coeff(rng), csym = coeff(rng);
    TimePoly f = TimePoly::constant(u, c00);
    f += TimePoly::monomial(u, u.s(1), 1) * TimePoly::monomial(u, u.s(2), 1) *
         c11;
    f += (TimePoly::monomial(u, u.s(1), 1) +
          TimePoly::monomial(u, u.s(2), 1)) *
         csym;

    const TimePoly nest1 =
        integrate(integrate(f, u.s(2), u.s(1), u.T()), u.s(1), u.t(), u.T());
    const TimePoly nest2 =
        integrate(integrate(f, u.s(1), u.t(), u.s(2)), u.s(2), u.t(), u.T());

    const double t = 0.2, T = 1.3;
    const std::vector<double> vals = {t, 0.0, 0.0, T};
    const double square = quad(
        [&](double s1) {
          return quad(
              [&](double s2) {
                return c00 + c11 * s1 * s2 + csym * (s1 + s2);
              },
              t, T);
        },
        t, T);
    CHECK(nest1.eval(vals) == doctest::Approx(0.5 * square).epsilon(1e-12));
    CHECK(nest2.eval(vals) == doctest::Approx(0.5 * square).epsilon(1e-12));
  }
}

TEST_CASE("timealg: symbolic integration matches numeric quadrature") {
  TimeUniverse u(2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> point(0.1, 0.9);
  for (int rep = 0; rep < 25; ++rep) {
    const TimePoly p = random_poly(rng, u, 3, 2);
    const TimePoly integrated = integrate(p, u.s(1), u.t(), u.T());
    const double t = point(rng);
    const double T = t + point(rng);
    const double s2 = point(rng);
    const std::vector<double> vals = {t, 0.0, s2, T};
    const double numeric = quad(
        [&](double s1) {
          const std::vector<double> inner = {t, s1, s2, T};
          return p.eval(inner);
        },
        t, T);
    const double symbolic = integrated.eval(vals);
    CHECK(symbolic == doctest::Approx(numeric).epsilon(1e-12));
  }
}

TEST_CASE("timealg: integrate_time_function bridges calendar polynomials") {
  TimeUniverse u(1);
  const std::vector<double> coeffs = {0.25, -0.1, 0.05};
  const TimePoly r = integrate_time_function(coeffs, u.size(), u.t(), u.T());
  const double t = 0.3, T = 1.7;
  const std::vector<double> vals = {t, 0.0, T};
  const double numeric = quad(
      [&](double q) { return coeffs[0] + coeffs[1] * q + coeffs[2] * q * q; },
      t, T);
  CHECK(r.eval(vals) == doctest::Approx(numeric).epsilon(1e-14));
}
