#include "lsv/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "lsv/errors.hpp"

namespace lsv {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double binomial_d(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// probabilists' Hermite polynomials He_0..He_n at u
std::vector<double> hermite_he_all(int n, double u) {
  std::vector<double> he(n + 1);
  he[0] = 1.0;
  if (n >= 1) he[1] = u;
  for (int m = 1; m < n; ++m) he[m + 1] = u * he[m] - double(m) * he[m - 1];
  return he;
}

void check_state(const BSState& s) {
  if (!(s.tau > 0.0) || !(s.sigma > 0.0)) {
    throw std::invalid_argument("BSState: requires tau > 0 and sigma > 0");
  }
}
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double hermite_h(int n, double z) {
  if (n < 0) throw std::invalid_argument("hermite_h: negative degree");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * z;
  for (int m = 1; m < n; ++m) {
    const double h2 = 2.0 * z * h1 - 2.0 * double(m) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton from the Chebyshev estimate
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 1; m < n; ++m) {
        const double p2 =
            ((2.0 * m + 1.0) * x * p1 - double(m) * p0) / double(m + 1);
        p0 = p1;
        p1 = p2;
      }
      pp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

// ---------------------------------------------------------------------------
// Black-Scholes
// ---------------------------------------------------------------------------

double bs_call(const BSState& s) {
  check_state(s);
  const double st = s.sigma * std::sqrt(s.tau);
  const double dp = (s.x - s.k) / st + 0.5 * st;
  return std::exp(s.x) * normal_cdf(dp) -
         std::exp(s.k) * normal_cdf(dp - st);
}

double bs_put(const BSState& s) {
  // parity: call - put = e^x - e^k
  return bs_call(s) - std::exp(s.x) + std::exp(s.k);
}

double bs_gamma_minus_delta(const BSState& s) {
  check_state(s);
  const double st = s.sigma * std::sqrt(s.tau);
  const double dp = (s.x - s.k) / st + 0.5 * st;
  return std::exp(s.x) * normal_pdf(dp) / st;
}

double hermite_ratio(int n, const BSState& s) {
  check_state(s);
  if (n < 0) throw std::invalid_argument("hermite_ratio: negative order");
  const double w = s.sigma * std::sqrt(2.0 * s.tau);
  const double z = (s.x - s.k - 0.5 * s.sigma * s.sigma * s.tau) / w;
  double scale = 1.0;
  for (int m = 0; m < n; ++m) scale *= -1.0 / w;
  return scale * hermite_h(n, z);
}

namespace {

// d^n/dsigma^n u^BS = sum_q P_{n,q}(sigma) Q^q u^BS with Q = dx^2 - dx.
// Returns P_{n,q} as sigma-polynomials (ascending powers), q = 0..n.
std::vector<std::vector<double>> sigma_derivative_polys(int n, double tau) {
  std::vector<std::vector<double>> p(1, std::vector<double>{1.0});
  for (int step = 0; step < n; ++step) {
    std::vector<std::vector<double>> next(p.size() + 1);
    for (std::size_t q = 0; q < p.size(); ++q) {
      // polynomial derivative in sigma
      if (p[q].size() > 1) {
        auto& dst = next[q];
        dst.resize(std::max(dst.size(), p[q].size() - 1), 0.0);
        for (std::size_t m = 1; m < p[q].size(); ++m) {
          dst[m - 1] += double(m) * p[q][m];
        }
      }
      // tau * sigma * P_q feeds Q^{q+1}
      auto& up = next[q + 1];
      up.resize(std::max(up.size(), p[q].size() + 1), 0.0);
      for (std::size_t m = 0; m < p[q].size(); ++m) {
        up[m + 1] += tau * p[q][m];
      }
    }
    p = std::move(next);
  }
  return p;
}

double eval_poly(const std::vector<double>& poly, double x) {
  double v = 0.0;
  for (std::size_t m = poly.size(); m-- > 0;) v = v * x + poly[m];
  return v;
}

// Q^q u^BS / (Q u^BS) for q >= 1, via (z^2-z)^{q-1} expanded in Hermite
// ratios
double q_power_ratio(int q, const BSState& s) {
  double sum = 0.0;
  for (int m = 0; m <= q - 1; ++m) {
    const double sign = ((q - 1 - m) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial_d(q - 1, m) * hermite_ratio(q - 1 + m, s);
  }
  return sum;
}

}  // namespace

double bs_sigma_derivative(const BSState& s, int n) {
  check_state(s);
  if (n < 1) throw std::invalid_argument("bs_sigma_derivative: n must be >= 1");
  const auto polys = sigma_derivative_polys(n, s.tau);
  const double qu = bs_gamma_minus_delta(s);
  double sum = 0.0;
  for (std::size_t q = 1; q < polys.size(); ++q) {
    if (polys[q].empty()) continue;
    sum += eval_poly(polys[q], s.sigma) * q_power_ratio(int(q), s);
  }
  return sum * qu;
}

std::vector<double> bs_sigma_derivative_ratios(const BSState& s, int nmax) {
  check_state(s);
  std::vector<double> ratios(nmax);
  const double vega_over_qu = s.tau * s.sigma;
  std::vector<double> qr(nmax + 1, 0.0);
  for (int q = 1; q <= nmax; ++q) qr[q] = q_power_ratio(q, s);
  for (int h = 1; h <= nmax; ++h) {
    const auto polys = sigma_derivative_polys(h, s.tau);
    double sum = 0.0;
    for (std::size_t q = 1; q < polys.size(); ++q) {
      if (polys[q].empty()) continue;
      sum += eval_poly(polys[q], s.sigma) * qr[q];
    }
    ratios[h - 1] = sum / vega_over_qu;
  }
  return ratios;
}

std::vector<double> bs_x_derivatives(double x, double keff, double total_std,
                                     int kmax) {
  if (!(total_std > 0.0)) {
    throw std::invalid_argument("bs_x_derivatives: total_std must be > 0");
  }
  const double s = total_std;
  const double dp = (x - keff) / s + 0.5 * s;
  const double dm = dp - s;
  const double ex = std::exp(x);
  const double ek = std::exp(keff);
  const auto hep = hermite_he_all(std::max(0, kmax - 1), dp);
  const auto hem = hermite_he_all(std::max(0, kmax - 1), dm);
  const double php = normal_pdf(dp);
  const double phm = normal_pdf(dm);

  std::vector<double> d(kmax + 1);
  d[0] = ex * normal_cdf(dp) - ek * normal_cdf(dm);
  for (int n = 1; n <= kmax; ++n) {
    // e^x N(d+) picks up the Leibniz sum; the strike leg differentiates
    // straight through
    double sum = normal_cdf(dp);
    double spow = 1.0;
    double sign = 1.0;  // (-1)^{m-1}
    for (int m = 1; m <= n; ++m) {
      spow /= s;
      sum += binomial_d(n, m) * spow * sign * hep[m - 1] * php;
      sign = -sign;
    }
    double spow_n = 1.0;
    for (int m = 0; m < n; ++m) spow_n /= s;
    const double sign_n = (n % 2 == 1) ? 1.0 : -1.0;
    d[n] = ex * sum - ek * spow_n * sign_n * hem[n - 1] * phm;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Order-zero kernel
// ---------------------------------------------------------------------------

GaussianKernel order0_kernel(const ModelSpec& model, double t, double T,
                             double x, double y) {
  if (!(T > t)) throw std::invalid_argument("order0_kernel: requires T > t");
  const double va = model.a(0, 0).integral(t, T);
  const double vb = model.b(0, 0).integral(t, T);
  const double vc = model.c(0, 0).integral(t, T);
  const double ig = model.gamma(0, 0).integral(t, T);
  const double ia = model.alpha(0, 0).integral(t, T);
  GaussianKernel k;
  k.mean = {x + ig - va, y + ia};
  k.cov = {{{2.0 * va, vc}, {vc, 2.0 * vb}}};
  k.discount = std::exp(-ig);
  k.one_dimensional = model.one_dimensional();
  return k;
}

double gamma0_density(const GaussianKernel& kernel, double xi, double omega) {
  const double u = xi - kernel.mean[0];
  if (kernel.one_dimensional) {
    const double s2 = kernel.cov[0][0];
    if (!(s2 > 0.0)) throw NumericError("gamma0_density: zero variance");
    return std::exp(-0.5 * u * u / s2) / std::sqrt(2.0 * M_PI * s2);
  }
  const double det = kernel.cov[0][0] * kernel.cov[1][1] -
                     kernel.cov[0][1] * kernel.cov[1][0];
  if (!(det > 0.0)) {
    throw NumericError("gamma0_density: covariance not positive definite");
  }
  const double v = omega - kernel.mean[1];
  const double quad = (kernel.cov[1][1] * u * u -
                       2.0 * kernel.cov[0][1] * u * v +
                       kernel.cov[0][0] * v * v) /
                      det;
  return std::exp(-0.5 * quad) / (2.0 * M_PI * std::sqrt(det));
}

namespace {

// derivatives 0..kmax of the order-zero price of a custom x-only payoff,
// by Gauss-Legendre quadrature against Gaussian derivative kernels
std::vector<double> custom_u0_derivatives(
    const std::function<double(double)>& h, double mean, double std_dev,
    double discount, int kmax) {
  if (!h) throw std::invalid_argument("custom payoff: missing function");
  constexpr int kNodes = 512;
  constexpr double kWidth = 10.0;
  std::vector<double> nodes, weights;
  gauss_legendre(kNodes, nodes, weights);
  std::vector<double> d(kmax + 1, 0.0);
  for (int q = 0; q < kNodes; ++q) {
    const double u = kWidth * nodes[q];
    const double w = kWidth * weights[q] * normal_pdf(u);
    const double hv = h(mean + std_dev * u);
    if (!std::isfinite(hv)) {
      throw NumericError("custom payoff returned a non-finite value");
    }
    const auto he = hermite_he_all(kmax, u);
    double spow = 1.0;
    for (int n = 0; n <= kmax; ++n) {
      d[n] += w * hv * he[n] * spow;
      spow /= std_dev;
    }
  }
  for (auto& v : d) v *= discount;
  return d;
}

}  // namespace

double u0_price(const ModelSpec& model, const PayoffSpec& payoff, double t,
                double T, double x, double y) {
  const GaussianKernel kern = order0_kernel(model, t, T, x, y);
  const double va = 0.5 * kern.cov[0][0];
  const double ig = -std::log(kern.discount);
  const double s = std::sqrt(2.0 * va);
  switch (payoff.kind) {
    case PayoffSpec::Kind::Bond:
      return kern.discount;
    case PayoffSpec::Kind::Call: {
      const double keff = payoff.log_strike - ig;
      const double dp = (x - keff) / s + 0.5 * s;
      return std::exp(x) * normal_cdf(dp) -
             std::exp(keff) * normal_cdf(dp - s);
    }
    case PayoffSpec::Kind::Put: {
      const double keff = payoff.log_strike - ig;
      const double dp = (x - keff) / s + 0.5 * s;
      return std::exp(keff) * normal_cdf(-(dp - s)) -
             std::exp(x) * normal_cdf(-dp);
    }
    case PayoffSpec::Kind::Custom:
      return custom_u0_derivatives(payoff.custom_h, kern.mean[0], s,
                                   kern.discount, 0)[0];
  }
  throw std::invalid_argument("u0_price: unknown payoff kind");
}

std::vector<double> u0_x_derivatives(const ModelSpec& model,
                                     const PayoffSpec& payoff, double t,
                                     double T, double x, double y, int kmax) {
  const GaussianKernel kern = order0_kernel(model, t, T, x, y);
  const double va = 0.5 * kern.cov[0][0];
  const double ig = -std::log(kern.discount);
  const double s = std::sqrt(2.0 * va);
  switch (payoff.kind) {
    case PayoffSpec::Kind::Bond: {
      std::vector<double> d(kmax + 1, 0.0);
      d[0] = kern.discount;
      return d;
    }
    case PayoffSpec::Kind::Call:
      return bs_x_derivatives(x, payoff.log_strike - ig, s, kmax);
    case PayoffSpec::Kind::Put: {
      // floor-adjusted put payoff equals call payoff minus the forward
      auto d = bs_x_derivatives(x, payoff.log_strike - ig, s, kmax);
      const double ex = std::exp(x);
      for (auto& v : d) v -= ex;
      return d;
    }
    case PayoffSpec::Kind::Custom: {
      auto d = custom_u0_derivatives(payoff.custom_h, kern.mean[0], s,
                                     kern.discount, kmax);
      d[0] -= payoff.floor_value * kern.discount;
      return d;
    }
  }
  throw std::invalid_argument("u0_x_derivatives: unknown payoff kind");
}

}  // namespace lsv
