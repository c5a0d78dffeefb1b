#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lsv/model.hpp"

namespace lsv {

struct McConfig {
  std::int64_t paths = 100000;
  int steps_per_year = 250;
  std::uint64_t seed = 20240915;
  bool antithetic = true;
  bool full_truncation = true;

  void validate() const;
};

struct McResult {
  double price_mean = 0.0;
  double std_error = 0.0;
  std::optional<double> implied_vol;
  std::optional<double> iv_std_error;
};

/// Exact model dynamics in simulation coordinates (x, z), where z is the
/// variance-like factor simulated in its natural (non-log) coordinates.
/// Coefficients see the truncated value max(z, 0).
struct SdeSpec {
  bool has_z = true;
  std::function<double(double t, double x, double z)> x_drift;
  std::function<double(double t, double x, double z)> x_diff;
  std::function<double(double t, double x, double z)> z_drift;
  std::function<double(double t, double x, double z)> z_diff;
  std::function<double(double t)> corr;  // instantaneous correlation
  std::function<double(double t, double x, double z)> kill;  // gamma >= 0
  std::function<double(double y)> z_from_y = [](double y) {
    return std::exp(y);
  };
};

SdeSpec sde_heston_td(double kappa, double theta0, double theta1,
                      double delta0, double delta1, double rho0, double rho1);
SdeSpec sde_three_halves(double kappa, double theta, double delta, double rho);
SdeSpec sde_jdcev(double delta, double beta, double b, double c);
SdeSpec sde_bs_const(double sigma);
SdeSpec sde_displaced_lognormal(const TimeCoeff& sigma2, double displacement);

/// Euler-Maruyama with correlated increments, full truncation on z,
/// survival-probability weighting for the killing rate and antithetic
/// variates. Fixed seed gives a bit-identical result on one platform.
McResult mc_price(const SdeSpec& sde, const PayoffSpec& payoff, double t,
                  double T, double x, double y, const McConfig& cfg);

/// Implied volatility by bisection bracket [1e-6, 5] refined with
/// safeguarded Newton to |u^BS(sigma) - price| <= 1e-12.
double invert_bs(double price, double x, double k, double tau);

struct ConvergenceRow {
  double tau;
  int order;
  double abs_error;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::map<int, double> slopes;  // per order: log-log regression slope
};

/// Errors |sum_{n<=N} u_n - oracle(tau)| and fitted log-log slopes across
/// maturities, for each requested order.
ConvergenceResult convergence_study(
    const ModelSpec& model, const PayoffSpec& payoff,
    const std::function<double(double tau)>& oracle_price,
    const std::vector<double>& taus, const std::vector<int>& orders, double t,
    double x, double y);

/// Exact call price in the displaced lognormal model: Black-Scholes on the
/// shifted asset e^x + d with strike e^k + d and variance int sigma2.
double displaced_lognormal_call(double x, double k, const TimeCoeff& sigma2,
                                double displacement, double t, double T);

}  // namespace lsv
