#include "lsv/impliedvol.hpp"

#include <cmath>
#include <stdexcept>

#include "lsv/errors.hpp"
#include "lsv/kernel.hpp"

namespace lsv {

namespace {

double binomial_d(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

}  // namespace

double bell_partial(int n, int h, std::span<const double> xs) {
  if (n < 0 || h < 0) {
    throw std::invalid_argument("bell_partial: negative index");
  }
  if (n == 0 && h == 0) return 1.0;
  if (h < 1 || h > n) {
    throw std::invalid_argument("bell_partial: requires 1 <= h <= n");
  }
  if (int(xs.size()) < n - h + 1) {
    throw std::invalid_argument("bell_partial: needs n-h+1 arguments");
  }
  // B over a (n, h) grid; B[0][0] = 1
  std::vector<std::vector<double>> B(n + 1, std::vector<double>(h + 1, 0.0));
  B[0][0] = 1.0;
  for (int nn = 1; nn <= n; ++nn) {
    for (int hh = 1; hh <= std::min(nn, h); ++hh) {
      double sum = 0.0;
      for (int j = 1; j <= nn - hh + 1; ++j) {
        sum += binomial_d(nn - 1, j - 1) * xs[j - 1] * B[nn - j][hh - 1];
      }
      B[nn][hh] = sum;
    }
  }
  return B[n][h];
}

double iv_sigma0(const ModelSpec& model, double t, double T) {
  if (!(T > t)) throw std::invalid_argument("iv_sigma0: requires T > t");
  if (model.has_default()) {
    throw CapabilityError(
        "iv_sigma0: implied volatility expansion requires a model without "
        "default (all killing-rate tables zero)");
  }
  return std::sqrt(2.0 * model.a(0, 0).integral(t, T) / (T - t));
}

IVExpansion iv_expand(const PriceExpansion& expansion) {
  const PayoffSpec& payoff = expansion.payoff;
  if (!payoff.vanilla()) {
    throw CapabilityError(
        "iv_expand: implied volatility is defined for call and put payoffs");
  }
  if (expansion.gamma_integral != 0.0) {
    throw CapabilityError(
        "iv_expand: implied volatility expansion requires a model without "
        "default");
  }
  const int order = expansion.max_order();
  const BSState state{expansion.x, payoff.log_strike, expansion.tau,
                      expansion.sigma0};
  const double w = state.sigma * std::sqrt(2.0 * state.tau);
  const double z =
      (state.x - state.k - 0.5 * state.sigma * state.sigma * state.tau) / w;
  if (std::fabs(z) > 6.0) {
    throw NumericError(
        "iv_expand: strike too far in the wings for a reliable vega "
        "division (|z| > 6); the truncated series is not usable there");
  }

  // Hermite ratios up to the largest derivative order any term requests
  int hmax = 2 * order + 2;
  for (int n = 1; n <= order; ++n) {
    hmax = std::max(hmax, int(expansion.orders[n].hermite_coeffs.size()));
  }
  std::vector<double> hr(hmax + 1);
  for (int m = 0; m <= hmax; ++m) hr[m] = hermite_ratio(m, state);

  // u_n / d_sigma u^BS through the Hermite coefficients
  const double vega_over_qu = state.tau * state.sigma;
  auto un_over_vega = [&](int n) {
    if (!expansion.orders[n].hermite_exact) {
      // division by (dx^2 - dx) was inexact; should not happen with gamma=0
      throw NumericError(
          "iv_expand: correction term is not spanned by the vega basis");
    }
    const auto& hc = expansion.orders[n].hermite_coeffs;
    double sum = 0.0;
    for (std::size_t kd = 0; kd < hc.size(); ++kd) sum += hc[kd] * hr[kd];
    return sum / vega_over_qu;
  };

  const std::vector<double> dratio =
      order >= 1 ? bs_sigma_derivative_ratios(state, order) : std::vector<double>{};

  IVExpansion iv;
  iv.terms.assign(order + 1, 0.0);
  iv.terms[0] = expansion.sigma0;
  for (int n = 1; n <= order; ++n) {
    double sn = un_over_vega(n);
    for (int h = 2; h <= n; ++h) {
      std::vector<double> xs(n - h + 1);
      for (int j = 1; j <= n - h + 1; ++j) {
        xs[j - 1] = factorial(j) * iv.terms[j];
      }
      sn -= dratio[h - 1] * bell_partial(n, h, xs) / factorial(n);
    }
    iv.terms[n] = sn;
  }
  iv.total = 0.0;
  for (double s : iv.terms) iv.total += s;
  if (!(iv.terms[0] > 0.0)) {
    throw NumericError("iv_expand: leading volatility must be positive");
  }
  return iv;
}

double iv_check_roundtrip(const IVExpansion& iv,
                          const PriceExpansion& expansion) {
  if (!(iv.total > 0.0)) {
    throw NumericError("iv_check_roundtrip: total volatility not positive");
  }
  const PayoffSpec& payoff = expansion.payoff;
  const BSState state{expansion.x, payoff.log_strike, expansion.tau,
                      iv.total};
  const double bs = payoff.kind == PayoffSpec::Kind::Put
                        ? bs_put(state)
                        : bs_call(state);
  return bs - (payoff.floor_value + expansion.sum());
}

}  // namespace lsv
