#include "lsv/validate.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lsv/errors.hpp"
#include "lsv/kernel.hpp"
#include "lsv/expansion.hpp"

namespace lsv {

void McConfig::validate() const {
  if (paths < 1) throw std::invalid_argument("McConfig: paths must be >= 1");
  if (steps_per_year < 1) {
    throw std::invalid_argument("McConfig: steps_per_year must be >= 1");
  }
}

namespace {

// counter-based generator: every (seed, path, step) maps to an
// independent pair of standard normals, so path batches can be produced
// in any order
struct CounterRng {
  std::uint64_t seed;

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::array<double, 2> gauss(std::uint64_t path, std::uint64_t step) const {
    const std::uint64_t k1 = mix64(seed ^ mix64(path ^ mix64(step)));
    const std::uint64_t k2 = mix64(k1);
    const double u1 = (double(k1 >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (double(k2 >> 11) + 0.5) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }
};

struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double payoff_value(const PayoffSpec& payoff, double x) {
  switch (payoff.kind) {
    case PayoffSpec::Kind::Call:
      return std::max(std::exp(x) - std::exp(payoff.log_strike), 0.0);
    case PayoffSpec::Kind::Put:
      return std::max(std::exp(payoff.log_strike) - std::exp(x), 0.0);
    case PayoffSpec::Kind::Bond:
      return 1.0;
    case PayoffSpec::Kind::Custom:
      return payoff.custom_h(x);
  }
  throw std::invalid_argument("payoff_value: unknown payoff kind");
}

}  // namespace

McResult mc_price(const SdeSpec& sde, const PayoffSpec& payoff, double t,
                  double T, double x, double y, const McConfig& cfg) {
  cfg.validate();
  if (!(T > t)) throw std::invalid_argument("mc_price: requires T > t");
  const double tau = T - t;
  const int steps = std::max(1, int(std::lround(cfg.steps_per_year * tau)));
  const double dt = tau / steps;
  const double sqdt = std::sqrt(dt);
  const double z0 = sde.has_z ? sde.z_from_y(y) : 0.0;
  const CounterRng rng{cfg.seed};

  const std::int64_t pairs =
      cfg.antithetic ? (cfg.paths + 1) / 2 : cfg.paths;
  const int legs = cfg.antithetic ? 2 : 1;

  KahanSum acc, acc2;
  for (std::int64_t p = 0; p < pairs; ++p) {
    double sample = 0.0;
    for (int leg = 0; leg < legs; ++leg) {
      const double flip = (leg == 0) ? 1.0 : -1.0;
      double xs = x, zs = z0, log_survival = 0.0;
      for (int step = 0; step < steps; ++step) {
        const double ts = t + step * dt;
        const auto g = rng.gauss(std::uint64_t(p), std::uint64_t(step));
        const double zb = flip * g[0];
        double zw = zb;
        if (sde.has_z && sde.corr) {
          const double rho = sde.corr(ts);
          zw = rho * zb + std::sqrt(std::max(0.0, 1.0 - rho * rho)) *
                              (flip * g[1]);
        }
        const double zpos =
            sde.has_z ? (cfg.full_truncation ? std::max(zs, 0.0) : zs) : 0.0;
        if (sde.kill) log_survival -= sde.kill(ts, xs, zpos) * dt;
        const double xn = xs + sde.x_drift(ts, xs, zpos) * dt +
                          sde.x_diff(ts, xs, zpos) * sqdt * zw;
        if (sde.has_z) {
          zs = zs + sde.z_drift(ts, xs, zpos) * dt +
               sde.z_diff(ts, xs, zpos) * sqdt * zb;
        }
        xs = xn;
        if (!std::isfinite(xs) || (sde.has_z && !std::isfinite(zs))) {
          throw NumericError(
              "mc_price: path left the finite range at t=" +
              std::to_string(ts) + " (x=" + std::to_string(xs) +
              ", z=" + std::to_string(zs) + ")");
        }
      }
      const double w = std::exp(log_survival);
      sample += w * (payoff_value(payoff, xs) - payoff.floor_value);
    }
    sample = payoff.floor_value + sample / legs;
    acc.add(sample);
    acc2.add(sample * sample);
  }

  McResult result;
  const double n = double(pairs);
  result.price_mean = acc.sum / n;
  const double var =
      std::max(0.0, (acc2.sum / n - result.price_mean * result.price_mean)) /
      std::max(1.0, n - 1.0);
  result.std_error = std::sqrt(var);

  if (payoff.kind == PayoffSpec::Kind::Call) {
    try {
      const double iv = invert_bs(result.price_mean, x, payoff.log_strike, tau);
      result.implied_vol = iv;
      const BSState s{x, payoff.log_strike, tau, iv};
      const double vega = bs_sigma_derivative(s, 1);
      if (vega > 0.0) result.iv_std_error = result.std_error / vega;
    } catch (const std::exception&) {
      // price outside arbitrage bounds; leave implied_vol unset
    }
  }
  return result;
}

double invert_bs(double price, double x, double k, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("invert_bs: requires tau > 0");
  const double lower_bound = std::max(std::exp(x) - std::exp(k), 0.0);
  const double upper_bound = std::exp(x);
  if (!(price > lower_bound) || !(price < upper_bound)) {
    throw std::domain_error(
        "invert_bs: price outside the arbitrage bounds ((e^x-e^k)^+, e^x)");
  }
  double lo = 1e-6, hi = 5.0;
  auto f = [&](double sig) {
    return bs_call(BSState{x, k, tau, sig}) - price;
  };
  double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw std::domain_error(
        "invert_bs: implied volatility outside the bracket [1e-6, 5]");
  }
  double sig = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double val = f(sig);
    if (std::fabs(val) <= 1e-12) return sig;
    if (val > 0.0) {
      hi = sig;
    } else {
      lo = sig;
    }
    const double vega = bs_sigma_derivative(BSState{x, k, tau, sig}, 1);
    double next = sig - val / vega;
    if (!(vega > 0.0) || !(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);  // safeguard: fall back to bisection
    }
    if (hi - lo < 1e-16 * std::max(1.0, sig)) return sig;
    sig = next;
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Exact dynamics for the model zoo
// ---------------------------------------------------------------------------

SdeSpec sde_heston_td(double kappa, double theta0, double theta1,
                      double delta0, double delta1, double rho0, double rho1) {
  SdeSpec sde;
  sde.x_drift = [](double, double, double z) { return -0.5 * z; };
  sde.x_diff = [](double, double, double z) { return std::sqrt(z); };
  sde.z_drift = [=](double t, double, double z) {
    return kappa * ((theta0 + theta1 * t) - z);
  };
  sde.z_diff = [=](double t, double, double z) {
    return std::sqrt((delta0 + delta1 * t) * z);
  };
  sde.corr = [=](double t) {
    return (rho0 + rho1 * t) / std::sqrt(delta0 + delta1 * t);
  };
  return sde;
}

SdeSpec sde_three_halves(double kappa, double theta, double delta,
                         double rho) {
  SdeSpec sde;
  sde.x_drift = [](double, double, double z) { return -0.5 * z; };
  sde.x_diff = [](double, double, double z) { return std::sqrt(z); };
  sde.z_drift = [=](double, double, double z) {
    return kappa * z * (theta - z);
  };
  sde.z_diff = [=](double, double, double z) {
    return delta * z * std::sqrt(z);
  };
  sde.corr = [=](double) { return rho; };
  return sde;
}

SdeSpec sde_jdcev(double delta, double beta, double b, double c) {
  SdeSpec sde;
  sde.has_z = false;
  auto sig2 = [=](double x) {
    return delta * delta * std::exp(2.0 * beta * x);
  };
  sde.x_drift = [=](double, double x, double) {
    return -0.5 * sig2(x) + b + c * sig2(x);
  };
  sde.x_diff = [=](double, double x, double) {
    return delta * std::exp(beta * x);
  };
  sde.kill = [=](double, double x, double) { return b + c * sig2(x); };
  return sde;
}

SdeSpec sde_bs_const(double sigma) {
  SdeSpec sde;
  sde.has_z = false;
  sde.x_drift = [=](double, double, double) { return -0.5 * sigma * sigma; };
  sde.x_diff = [=](double, double, double) { return sigma; };
  return sde;
}

SdeSpec sde_displaced_lognormal(const TimeCoeff& sigma2, double displacement) {
  SdeSpec sde;
  sde.has_z = false;
  sde.x_drift = [=](double t, double x, double) {
    const double s = std::sqrt(sigma2.eval(t)) * (1.0 + displacement * std::exp(-x));
    return -0.5 * s * s;
  };
  sde.x_diff = [=](double t, double x, double) {
    return std::sqrt(sigma2.eval(t)) * (1.0 + displacement * std::exp(-x));
  };
  return sde;
}

// ---------------------------------------------------------------------------
// Convergence harness
// ---------------------------------------------------------------------------

double displaced_lognormal_call(double x, double k, const TimeCoeff& sigma2,
                                double displacement, double t, double T) {
  const double v = sigma2.integral(t, T);
  if (!(v > 0.0)) throw NumericError("displaced_lognormal_call: zero variance");
  const double spot = std::exp(x) + displacement;
  const double strike = std::exp(k) + displacement;
  const double sv = std::sqrt(v);
  const double d1 = std::log(spot / strike) / sv + 0.5 * sv;
  return spot * normal_cdf(d1) - strike * normal_cdf(d1 - sv);
}

ConvergenceResult convergence_study(
    const ModelSpec& model, const PayoffSpec& payoff,
    const std::function<double(double tau)>& oracle_price,
    const std::vector<double>& taus, const std::vector<int>& orders, double t,
    double x, double y) {
  if (!oracle_price) {
    throw std::invalid_argument("convergence_study: oracle required");
  }
  ConvergenceResult out;
  for (int order : orders) {
    const ExpansionOperators ops(model, order);
    std::vector<double> log_tau, log_err;
    bool all_exact = true;
    for (double tau : taus) {
      const PriceExpansion pe =
          price_expansion(ops, model, payoff, t, t + tau, x, y);
      const double err =
          std::fabs(price_with_default_floor(pe) - oracle_price(tau));
      out.rows.push_back({tau, order, err});
      if (err > 1e-15) {
        all_exact = false;
        log_tau.push_back(std::log(tau));
        log_err.push_back(std::log(err));
      }
    }
    if (all_exact) {
      out.slopes[order] = std::numeric_limits<double>::infinity();
      continue;
    }
    // least-squares slope of log error against log tau
    const double n = double(log_tau.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_tau.size(); ++i) {
      sx += log_tau[i];
      sy += log_err[i];
      sxx += log_tau[i] * log_tau[i];
      sxy += log_tau[i] * log_err[i];
    }
    out.slopes[order] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

}  // namespace lsv
