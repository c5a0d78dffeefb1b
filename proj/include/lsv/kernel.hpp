#pragma once

#include <array>
#include <vector>

#include "lsv/model.hpp"

namespace lsv {

double normal_cdf(double x);
double normal_pdf(double x);

/// Physicists' Hermite polynomial H_n(z).
double hermite_h(int n, double z);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Inputs of the Black-Scholes call formula in log coordinates.
struct BSState {
  double x;      // log spot
  double k;      // log strike
  double tau;    // T - t > 0
  double sigma;  // volatility > 0
};

double bs_call(const BSState& s);
double bs_put(const BSState& s);

/// n-th derivative of the call price with respect to sigma, n >= 1,
/// evaluated through the Hermite representation (no numeric
/// differentiation).
double bs_sigma_derivative(const BSState& s, int n);

/// Ratios d^h_sigma u / d_sigma u for h = 1..nmax (index h-1).
std::vector<double> bs_sigma_derivative_ratios(const BSState& s, int nmax);

/// The ratio dx^n (dx^2 - dx) u^BS / (dx^2 - dx) u^BS
///   = (-1/(sigma sqrt(2 tau)))^n H_n(z),
/// z = (x - k - sigma^2 tau/2) / (sigma sqrt(2 tau)).
double hermite_ratio(int n, const BSState& s);

/// (dx^2 - dx) u^BS = e^x phi(d+) / (sigma sqrt(tau)); the vega kernel.
double bs_gamma_minus_delta(const BSState& s);

/// x-derivatives (orders 0..kmax) of the Black-Scholes-type function
/// e^x N(d+) - e^keff N(d-), d± = (x - keff)/s ± s/2, s = total std dev.
std::vector<double> bs_x_derivatives(double x, double keff, double total_std,
                                     int kmax);

/// Order-zero transition kernel: Gaussian with the integrated coefficient
/// tables, plus the survival discount.
struct GaussianKernel {
  std::array<double, 2> mean{};
  std::array<std::array<double, 2>, 2> cov{};
  double discount = 1.0;
  bool one_dimensional = false;
};

GaussianKernel order0_kernel(const ModelSpec& model, double t, double T,
                             double x, double y);

/// Bivariate normal density at (xi, omega); in one-dimensional mode the
/// omega leg is dropped and the value is the x-marginal density at xi.
double gamma0_density(const GaussianKernel& kernel, double xi, double omega);

/// Leading-order price: survival discount times the Gaussian integral of
/// the payoff. Closed form for calls, puts and bonds; quadrature for
/// custom x-only payoffs.
double u0_price(const ModelSpec& model, const PayoffSpec& payoff, double t,
                double T, double x, double y);

/// x-derivatives (orders 0..kmax) of the order-zero price of the
/// floor-adjusted payoff h - K0; the target the correction operators act on.
std::vector<double> u0_x_derivatives(const ModelSpec& model,
                                     const PayoffSpec& payoff, double t,
                                     double T, double x, double y, int kmax);

}  // namespace lsv
