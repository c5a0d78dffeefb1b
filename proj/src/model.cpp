#include "lsv/model.hpp"

#include <cmath>
#include <stdexcept>

#include "lsv/errors.hpp"

namespace lsv {

// ---------------------------------------------------------------------------
// TimeCoeff
// ---------------------------------------------------------------------------

double TimeCoeff::eval(double t) const {
  double v = 0.0;
  for (std::size_t d = c.size(); d-- > 0;) v = v * t + c[d];
  return v;
}

double TimeCoeff::integral(double a, double b) const {
  double hi = 0.0, lo = 0.0;
  for (std::size_t d = c.size(); d-- > 0;) {
    hi = hi * b + c[d] / double(d + 1);
    lo = lo * a + c[d] / double(d + 1);
  }
  return hi * b - lo * a;
}

void TimeCoeff::trim() {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

// ---------------------------------------------------------------------------
// CoeffTable
// ---------------------------------------------------------------------------

CoeffTable::CoeffTable(int order)
    : order_(order), entries_((order + 1) * (order + 2) / 2) {
  if (order < 0) throw std::invalid_argument("CoeffTable: negative order");
}

int CoeffTable::index(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) {
    throw std::invalid_argument("CoeffTable: index outside table");
  }
  const int n = i + j;
  return n * (n + 1) / 2 + j;
}

const TimeCoeff& CoeffTable::at(int i, int j) const {
  return entries_[index(i, j)];
}

void CoeffTable::set(int i, int j, TimeCoeff v) {
  entries_[index(i, j)] = std::move(v);
}

bool CoeffTable::all_zero() const {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ModelSpec
// ---------------------------------------------------------------------------

ModelSpec::ModelSpec(int order, double xbar, double ybar, CoeffTable a,
                     CoeffTable b, CoeffTable c, CoeffTable alpha,
                     CoeffTable gamma)
    : order_(order),
      xbar_(xbar),
      ybar_(ybar),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      alpha_(std::move(alpha)),
      gamma_(std::move(gamma)) {
  if (order < 0 || order > kMaxOrder) {
    throw CapabilityError(
        "ModelSpec: expansion order must be between 0 and 4; the operator "
        "formulas are tractable in closed form only up to order 4");
  }
  if (!std::isfinite(xbar) || !std::isfinite(ybar)) {
    throw ModelError("ModelSpec: expansion point must be finite");
  }
  for (const CoeffTable* tbl : {&a_, &b_, &c_, &alpha_, &gamma_}) {
    if (tbl->order() != order) {
      throw std::invalid_argument("ModelSpec: table order mismatch");
    }
  }
  one_dimensional_ =
      b_.all_zero() && c_.all_zero() && alpha_.all_zero();
  has_default_ = !gamma_.all_zero();
}

void ModelSpec::validate_on(double t0, double T) const {
  constexpr int kGrid = 64;
  for (int g = 0; g < kGrid; ++g) {
    const double t = t0 + (T - t0) * double(g) / double(kGrid - 1);
    const double a00 = a(0, 0).eval(t);
    if (!(a00 > 0.0)) {
      throw ModelError("model is not parabolic: a_{0,0}(t) <= 0 inside the "
                       "pricing interval");
    }
    if (!one_dimensional_) {
      const double b00 = b(0, 0).eval(t);
      const double c00 = c(0, 0).eval(t);
      if (!(b00 > 0.0) || !(4.0 * a00 * b00 - c00 * c00 > 0.0)) {
        throw ModelError(
            "model is not parabolic: covariance degenerate inside the "
            "pricing interval (requires b_{0,0} > 0 and 4ab - c^2 > 0, i.e. "
            "|rho| < 1)");
      }
    }
    if (gamma(0, 0).eval(t) < 0.0) {
      throw ModelError("killing rate gamma_{0,0}(t) must be nonnegative");
    }
  }
}

// ---------------------------------------------------------------------------
// Model zoo
// ---------------------------------------------------------------------------

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

void require_finite(std::initializer_list<double> vals, const char* what) {
  for (double v : vals) {
    if (!std::isfinite(v)) throw ModelError(std::string(what) + ": non-finite parameter");
  }
}

}  // namespace

ModelSpec zoo_heston_td(double kappa, double theta0, double theta1,
                        double delta0, double delta1, double rho0, double rho1,
                        double xbar, double ybar, int order) {
  require_finite({kappa, theta0, theta1, delta0, delta1, rho0, rho1},
                 "heston_td");
  if (!(delta0 > 0.0)) {
    throw ModelError("heston_td: delta(t)^2 must start positive (delta0 > 0)");
  }
  const double E = std::exp(ybar);
  const double Ei = std::exp(-ybar);
  CoeffTable a(order), b(order), c(order), alpha(order), gamma(order);
  // a(y) = e^y/2, b(t,y) = delta^2(t) e^{-y}/2, c(t) = rho0 + rho1 t,
  // alpha(t,y) = (kappa*theta(t) - delta^2(t)/2) e^{-y} - kappa
  c.set(0, 0, TimeCoeff({rho0, rho1}));
  const double m0 = kappa * theta0 - 0.5 * delta0;  // e^y alpha head
  const double m1 = kappa * theta1 - 0.5 * delta1;
  for (int j = 0; j <= order; ++j) {
    const double jf = factorial(j);
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    a.set(0, j, TimeCoeff({E / (2.0 * jf)}));
    b.set(0, j, TimeCoeff({sgn * delta0 * Ei / (2.0 * jf),
                           sgn * delta1 * Ei / (2.0 * jf)}));
    TimeCoeff al({sgn * m0 * Ei / jf, sgn * m1 * Ei / jf});
    if (j == 0) {
      al.c.resize(std::max<std::size_t>(al.c.size(), 1));
      al.c[0] -= kappa;
      al.trim();
    }
    alpha.set(0, j, std::move(al));
  }
  return ModelSpec(order, xbar, ybar, std::move(a), std::move(b), std::move(c),
                   std::move(alpha), std::move(gamma));
}

ModelSpec zoo_three_halves(double kappa, double theta, double delta,
                           double rho, double xbar, double ybar, int order) {
  require_finite({kappa, theta, delta, rho}, "three_halves");
  if (!(delta > 0.0)) throw ModelError("three_halves: delta must be positive");
  if (!(std::fabs(rho) < 1.0)) {
    throw ModelError("three_halves: correlation must satisfy |rho| < 1");
  }
  const double E = std::exp(ybar);
  CoeffTable a(order), b(order), c(order), alpha(order), gamma(order);
  // a(y) = e^y/2, b(y) = delta^2 e^y/2, c(y) = rho delta e^y,
  // alpha(y) = kappa(theta - e^y) - delta^2 e^y/2
  const double aslope = -(kappa + 0.5 * delta * delta) * E;
  for (int j = 0; j <= order; ++j) {
    const double jf = factorial(j);
    a.set(0, j, TimeCoeff({E / (2.0 * jf)}));
    b.set(0, j, TimeCoeff({delta * delta * E / (2.0 * jf)}));
    c.set(0, j, TimeCoeff({rho * delta * E / jf}));
    alpha.set(0, j, TimeCoeff({(j == 0 ? kappa * theta + aslope
                                       : aslope / jf)}));
  }
  return ModelSpec(order, xbar, ybar, std::move(a), std::move(b), std::move(c),
                   std::move(alpha), std::move(gamma));
}

ModelSpec zoo_jdcev(double delta, double beta, double b, double c, double xbar,
                    int order) {
  require_finite({delta, beta, b, c}, "jdcev");
  if (!(delta > 0.0)) throw ModelError("jdcev: delta must be positive");
  if (b < 0.0 || c < 0.0) {
    throw ModelError("jdcev: killing-rate parameters b, c must be >= 0");
  }
  const double sig2 = delta * delta * std::exp(2.0 * beta * xbar);
  CoeffTable at(order), bt(order), ct(order), alpha(order), gamma(order);
  // a(x) = delta^2 e^{2 beta x}/2, gamma(x) = b + c delta^2 e^{2 beta x}
  for (int i = 0; i <= order; ++i) {
    double deriv = sig2;  // (2 beta)^i delta^2 e^{2 beta xbar} / i!
    for (int m = 0; m < i; ++m) deriv *= 2.0 * beta;
    deriv /= factorial(i);
    at.set(i, 0, TimeCoeff({0.5 * deriv}));
    gamma.set(i, 0, TimeCoeff({(i == 0 ? b : 0.0) + c * deriv}));
  }
  return ModelSpec(order, xbar, 0.0, std::move(at), std::move(bt),
                   std::move(ct), std::move(alpha), std::move(gamma));
}

ModelSpec zoo_cev(double delta, double beta, double xbar, int order) {
  require_finite({delta, beta}, "cev");
  if (!(delta > 0.0)) throw ModelError("cev: delta must be positive");
  const double sig2 = delta * delta * std::exp(2.0 * beta * xbar);
  CoeffTable at(order), bt(order), ct(order), alpha(order), gamma(order);
  for (int i = 0; i <= order; ++i) {
    double deriv = sig2;
    for (int m = 0; m < i; ++m) deriv *= 2.0 * beta;
    at.set(i, 0, TimeCoeff({0.5 * deriv / factorial(i)}));
  }
  return ModelSpec(order, xbar, 0.0, std::move(at), std::move(bt),
                   std::move(ct), std::move(alpha), std::move(gamma));
}

ModelSpec zoo_bs_const(double sigma, double xbar, int order) {
  require_finite({sigma}, "bs_const");
  if (!(sigma > 0.0)) throw ModelError("bs_const: sigma must be positive");
  CoeffTable at(order), bt(order), ct(order), alpha(order), gamma(order);
  at.set(0, 0, TimeCoeff({0.5 * sigma * sigma}));
  return ModelSpec(order, xbar, 0.0, std::move(at), std::move(bt),
                   std::move(ct), std::move(alpha), std::move(gamma));
}

ModelSpec zoo_displaced_lognormal(const TimeCoeff& sigma2, double displacement,
                                  double xbar, int order) {
  if (sigma2.is_zero()) {
    throw ModelError("displaced_lognormal: variance rate must be nonzero");
  }
  const double w = displacement * std::exp(-xbar);
  CoeffTable at(order), bt(order), ct(order), alpha(order), gamma(order);
  // a(t,x) = sigma2(t)/2 (1 + d e^{-x})^2; the x-profile expands as
  // (1+w)^2 at i = 0 and 2w(-1)^i + w^2(-2)^i at i >= 1, over i!.
  for (int i = 0; i <= order; ++i) {
    double profile;
    if (i == 0) {
      profile = (1.0 + w) * (1.0 + w);
    } else {
      double p1 = 2.0 * w, p2 = w * w;
      for (int m = 0; m < i; ++m) {
        p1 *= -1.0;
        p2 *= -2.0;
      }
      profile = (p1 + p2) / factorial(i);
    }
    TimeCoeff entry = sigma2;
    for (auto& v : entry.c) v *= 0.5 * profile;
    entry.trim();
    at.set(i, 0, std::move(entry));
  }
  return ModelSpec(order, xbar, 0.0, std::move(at), std::move(bt),
                   std::move(ct), std::move(alpha), std::move(gamma));
}

// ---------------------------------------------------------------------------
// Finite-difference Taylor extraction
// ---------------------------------------------------------------------------

namespace {

double binomial_d(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// k-th central difference with step h (half-integer offsets for odd k),
// accuracy O(h^2)
double central_diff_1d(const std::function<double(double)>& f, double x0,
                       int k, double h) {
  if (k == 0) return f(x0);
  double sum = 0.0;
  double sign = 1.0;
  for (int m = 0; m <= k; ++m) {
    sum += sign * binomial_d(k, m) * f(x0 + (0.5 * k - m) * h);
    sign = -sign;
  }
  double hk = 1.0;
  for (int m = 0; m < k; ++m) hk *= h;
  return sum / hk;
}

// mixed partial d^i/dx^i d^j/dy^j by a product stencil
double central_diff_2d(const std::function<double(double, double)>& f,
                       double x0, double y0, int i, int j, double hx,
                       double hy) {
  auto inner = [&](double x) {
    return central_diff_1d([&](double y) { return f(x, y); }, y0, j, hy);
  };
  return central_diff_1d(inner, x0, i, hx);
}

// base step per total derivative order, balancing truncation vs roundoff
double base_step(int order) {
  switch (order) {
    case 0: return 0.0;
    case 1: return 6e-6;
    case 2: return 1.2e-4;
    case 3: return 2e-3;
    default: return 1e-2;
  }
}

double taylor_coefficient(const std::function<double(double, double)>& f,
                          double xbar, double ybar, int i, int j) {
  const int total = i + j;
  const double hx = base_step(total) * std::max(1.0, std::fabs(xbar));
  const double hy = base_step(total) * std::max(1.0, std::fabs(ybar));
  double d = central_diff_2d(f, xbar, ybar, i, j, hx, hy);
  if (total >= 3) {
    // one Richardson step: eliminates the h^2 truncation term
    const double dh = central_diff_2d(f, xbar, ybar, i, j, 0.5 * hx, 0.5 * hy);
    d = (4.0 * dh - d) / 3.0;
  }
  if (!std::isfinite(d)) {
    throw std::invalid_argument(
        "taylor_table_from_closures: finite difference produced a non-finite "
        "value");
  }
  return d / (factorial(i) * factorial(j));
}

// Newton divided differences through (nodes, values), expanded to monomials
TimeCoeff fit_time_poly(std::span<const double> nodes,
                        std::span<const double> values) {
  const int n = int(nodes.size());
  std::vector<double> dd(values.begin(), values.end());
  for (int level = 1; level < n; ++level) {
    for (int r = n - 1; r >= level; --r) {
      dd[r] = (dd[r] - dd[r - 1]) / (nodes[r] - nodes[r - level]);
    }
  }
  // accumulate dd[r] * prod_{m<r} (t - nodes[m])
  std::vector<double> poly{0.0};
  std::vector<double> basis{1.0};
  for (int r = 0; r < n; ++r) {
    if (poly.size() < basis.size()) poly.resize(basis.size(), 0.0);
    for (std::size_t m = 0; m < basis.size(); ++m) poly[m] += dd[r] * basis[m];
    if (r + 1 < n) {
      std::vector<double> next(basis.size() + 1, 0.0);
      for (std::size_t m = 0; m < basis.size(); ++m) {
        next[m + 1] += basis[m];
        next[m] -= nodes[r] * basis[m];
      }
      basis = std::move(next);
    }
  }
  return TimeCoeff(std::move(poly));
}

}  // namespace

ModelSpec taylor_table_from_closures(const ModelClosures& fns, double xbar,
                                     double ybar, int order, int t_degree) {
  if (t_degree < 0 || t_degree > 2) {
    throw std::invalid_argument(
        "taylor_table_from_closures: t_degree must be 0, 1 or 2");
  }
  std::vector<double> nodes(t_degree + 1);
  for (int r = 0; r <= t_degree; ++r) nodes[r] = 0.5 * r;

  auto build = [&](const std::function<double(double, double, double)>& f) {
    CoeffTable table(order);
    if (!f) return table;
    for (int i = 0; i <= order; ++i) {
      for (int j = 0; i + j <= order; ++j) {
        std::vector<double> vals(nodes.size());
        for (std::size_t r = 0; r < nodes.size(); ++r) {
          const double t = nodes[r];
          vals[r] = taylor_coefficient(
              [&](double x, double y) { return f(t, x, y); }, xbar, ybar, i,
              j);
        }
        table.set(i, j, fit_time_poly(nodes, vals));
      }
    }
    return table;
  };

  return ModelSpec(order, xbar, ybar, build(fns.a), build(fns.b), build(fns.c),
                   build(fns.alpha), build(fns.gamma));
}

}  // namespace lsv
