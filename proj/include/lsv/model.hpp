#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lsv {

/// Polynomial in calendar time, coefficients in ascending powers.
/// The empty vector is the zero function.
struct TimeCoeff {
  std::vector<double> c;

  TimeCoeff() = default;
  TimeCoeff(std::initializer_list<double> v) : c(v) { trim(); }
  explicit TimeCoeff(std::vector<double> v) : c(std::move(v)) { trim(); }
  static TimeCoeff constant(double v) { return TimeCoeff({v}); }

  bool is_zero() const { return c.empty(); }
  int degree() const { return c.empty() ? 0 : int(c.size()) - 1; }
  double eval(double t) const;
  /// Exact definite integral over [a, b].
  double integral(double a, double b) const;
  void trim();  // drop trailing exact zeros

  friend bool operator==(const TimeCoeff&, const TimeCoeff&) = default;
};

/// Triangular table of Taylor coefficients f_{i,j}(t), i+j <= order.
class CoeffTable {
 public:
  CoeffTable() : order_(0), entries_(1) {}
  explicit CoeffTable(int order);

  int order() const { return order_; }
  const TimeCoeff& at(int i, int j) const;
  void set(int i, int j, TimeCoeff v);
  bool all_zero() const;

 private:
  int index(int i, int j) const;
  int order_;
  std::vector<TimeCoeff> entries_;
};

/// An LSV model given by the Taylor tables of its generator coefficients
/// about the expansion point, with polynomial time dependence.
class ModelSpec {
 public:
  static constexpr int kMaxOrder = 4;

  ModelSpec(int order, double xbar, double ybar, CoeffTable a, CoeffTable b,
            CoeffTable c, CoeffTable alpha, CoeffTable gamma);

  int order() const { return order_; }
  double xbar() const { return xbar_; }
  double ybar() const { return ybar_; }

  const TimeCoeff& a(int i, int j) const { return a_.at(i, j); }
  const TimeCoeff& b(int i, int j) const { return b_.at(i, j); }
  const TimeCoeff& c(int i, int j) const { return c_.at(i, j); }
  const TimeCoeff& alpha(int i, int j) const { return alpha_.at(i, j); }
  const TimeCoeff& gamma(int i, int j) const { return gamma_.at(i, j); }

  const CoeffTable& a_table() const { return a_; }
  const CoeffTable& b_table() const { return b_; }
  const CoeffTable& c_table() const { return c_; }
  const CoeffTable& alpha_table() const { return alpha_; }
  const CoeffTable& gamma_table() const { return gamma_; }

  /// True when the y dynamics are degenerate (all b, c, alpha zero);
  /// the order-zero kernel is then one-dimensional in x.
  bool one_dimensional() const { return one_dimensional_; }
  /// True when any killing-rate entry is nonzero.
  bool has_default() const { return has_default_; }

  /// Parabolicity and intensity checks sampled on a 64-point grid over
  /// [t0, T]. Throws ModelError on violation.
  void validate_on(double t0, double T) const;

 private:
  int order_;
  double xbar_, ybar_;
  CoeffTable a_, b_, c_, alpha_, gamma_;
  bool one_dimensional_, has_default_;
};

/// European payoff H(S_T) in log coordinates, h(x) = H(e^x), together with
/// the recovery floor K0 = H(0).
struct PayoffSpec {
  enum class Kind { Call, Put, Bond, Custom };

  Kind kind = Kind::Call;
  double log_strike = 0.0;  // k, call/put only
  double floor_value = 0.0;  // K0 = H(0)
  std::function<double(double)> custom_h;  // x-only payoff h(x), Custom only

  static PayoffSpec call_option(double k) {
    return {Kind::Call, k, 0.0, {}};
  }
  static PayoffSpec put_option(double k) {
    // H(0) = e^k: the strike is recovered on default
    return {Kind::Put, k, std::exp(k), {}};
  }
  static PayoffSpec bond() { return {Kind::Bond, 0.0, 0.0, {}}; }
  static PayoffSpec custom_payoff(std::function<double(double)> h,
                                  double k0) {
    return {Kind::Custom, 0.0, k0, std::move(h)};
  }

  bool x_only() const { return true; }
  bool vanilla() const { return kind == Kind::Call || kind == Kind::Put; }
};

// ---------------------------------------------------------------------------
// Model zoo
// ---------------------------------------------------------------------------

/// Heston with CIR variance in log coordinates and affine-in-t mean level,
/// vol of vol and correlation numerator:
///   delta(t)^2 = delta0 + delta1 t, theta(t) = theta0 + theta1 t,
///   rho(t) = (rho0 + rho1 t)/delta(t).
ModelSpec zoo_heston_td(double kappa, double theta0, double theta1,
                        double delta0, double delta1, double rho0, double rho1,
                        double xbar, double ybar,
                        int order = ModelSpec::kMaxOrder);

ModelSpec zoo_three_halves(double kappa, double theta, double delta,
                           double rho, double xbar, double ybar,
                           int order = ModelSpec::kMaxOrder);

/// Jump-to-default CEV: local vol delta*e^(beta*x), killing rate
/// b + c*delta^2*e^(2*beta*x). No y dynamics.
ModelSpec zoo_jdcev(double delta, double beta, double b, double c, double xbar,
                    int order = ModelSpec::kMaxOrder);

ModelSpec zoo_cev(double delta, double beta, double xbar,
                  int order = ModelSpec::kMaxOrder);

/// Constant Black-Scholes volatility, a = sigma^2/2.
ModelSpec zoo_bs_const(double sigma, double xbar,
                       int order = ModelSpec::kMaxOrder);

/// Displaced lognormal: local vol sigma(t)(1 + d e^{-x}), so that the
/// shifted asset e^x + d is lognormal with variance rate sigma2(t).
/// Exact prices are shifted Black-Scholes; used as a convergence oracle.
ModelSpec zoo_displaced_lognormal(const TimeCoeff& sigma2, double displacement,
                                  double xbar,
                                  int order = ModelSpec::kMaxOrder);

// ---------------------------------------------------------------------------
// Taylor tables from generic coefficient functions
// ---------------------------------------------------------------------------

struct ModelClosures {
  std::function<double(double t, double x, double y)> a, b, c, alpha, gamma;
};

/// Builds the Taylor tables of smooth coefficient functions by central
/// finite differences in (x, y) at t_degree+1 time nodes, fitted to
/// degree-t_degree time polynomials. The time dependence must itself be
/// polynomial of that degree for the fit to be exact.
ModelSpec taylor_table_from_closures(const ModelClosures& fns, double xbar,
                                     double ybar, int order, int t_degree);

}  // namespace lsv
