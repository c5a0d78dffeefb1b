#include "lsv/expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "lsv/errors.hpp"

namespace lsv {

double PriceExpansion::sum() const {
  double s = 0.0;
  for (const auto& o : orders) s += o.value;
  return s;
}

std::vector<std::vector<int>> index_compositions(int n, int h) {
  std::vector<std::vector<int>> out;
  if (h < 1 || h > n) return out;
  std::vector<int> current(h);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == h - 1) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (int v = 1; v <= remaining - (h - 1 - pos); ++v) {
      current[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

DiffOp build_Anh(const ModelSpec& model, int n, int h, TimeSymbol s,
                 const TimeUniverse& u) {
  if (h < 0 || n - h < 0 || n > model.order()) {
    throw std::invalid_argument("build_Anh: index outside the model tables");
  }
  const int i = n - h, j = h;
  const int ns = u.size();
  auto poly_at = [&](const TimeCoeff& f) {
    TimePoly p(ns);
    for (std::size_t d = 0; d < f.c.size(); ++d) {
      if (f.c[d] != 0.0) p += TimePoly::monomial(ns, s, int(d), f.c[d]);
    }
    return p;
  };
  DiffOp op(ns);
  const TimePoly a = poly_at(model.a(i, j));
  op.add_term(OpKey{0, 0, 2, 0}, a);
  op.add_term(OpKey{0, 0, 1, 0}, -a);
  op.add_term(OpKey{0, 0, 0, 1}, poly_at(model.alpha(i, j)));
  op.add_term(OpKey{0, 0, 0, 2}, poly_at(model.b(i, j)));
  op.add_term(OpKey{0, 0, 1, 1}, poly_at(model.c(i, j)));
  const TimePoly g = poly_at(model.gamma(i, j));
  op.add_term(OpKey{0, 0, 1, 0}, g);
  op.add_term(OpKey{0, 0, 0, 0}, -g);
  return op;
}

DiffOp build_M(const ModelSpec& model, int which, TimeSymbol t_sym,
               TimeSymbol s_sym, const TimeUniverse& u) {
  if (which != 1 && which != 2) {
    throw std::invalid_argument("build_M: which must be 1 or 2");
  }
  const int ns = u.size();
  auto window = [&](const TimeCoeff& f) {
    return integrate_time_function(f.c, ns, t_sym, s_sym);
  };
  DiffOp op(ns);
  if (which == 1) {
    op.add_term(OpKey{1, 0, 0, 0}, TimePoly::constant(ns, 1.0));
    op.add_term(OpKey{0, 0, 0, 0},
                window(model.gamma(0, 0)) - window(model.a(0, 0)));
    op.add_term(OpKey{0, 0, 1, 0}, 2.0 * window(model.a(0, 0)));
    op.add_term(OpKey{0, 0, 0, 1}, window(model.c(0, 0)));
  } else {
    op.add_term(OpKey{0, 1, 0, 0}, TimePoly::constant(ns, 1.0));
    op.add_term(OpKey{0, 0, 0, 0}, window(model.alpha(0, 0)));
    op.add_term(OpKey{0, 0, 1, 0}, window(model.c(0, 0)));
    op.add_term(OpKey{0, 0, 0, 1}, 2.0 * window(model.b(0, 0)));
  }
  return op;
}

DiffOp build_Gn(const ModelSpec& model, int n, TimeSymbol t_sym,
                TimeSymbol s_sym, const TimeUniverse& u) {
  if (n < 1 || n > model.order()) {
    throw std::invalid_argument("build_Gn: order outside the model tables");
  }
  const DiffOp m1 = build_M(model, 1, t_sym, s_sym, u);
  const DiffOp m2 = build_M(model, 2, t_sym, s_sym, u);
  DiffOp g(u.size());
  for (int h = 0; h <= n; ++h) {
    // M_{n-h,h} = M1^{n-h} M2^h
    DiffOp m = DiffOp::identity(u.size());
    for (int m1c = 0; m1c < n - h; ++m1c) m = compose(m, m1);
    for (int m2c = 0; m2c < h; ++m2c) m = compose(m, m2);
    g += compose(m, build_Anh(model, n, h, s_sym, u));
  }
  return g;
}

DiffOp build_Ln(const ModelSpec& model, int n, const TimeUniverse& u) {
  if (n > 4) {
    throw CapabilityError(
        "build_Ln: correction operators are tractable in closed form only "
        "up to order 4");
  }
  if (n < 1 || n > model.order()) {
    throw std::invalid_argument("build_Ln: order outside the model tables");
  }
  if (u.max_order() < n) {
    throw std::invalid_argument("build_Ln: universe too small for order");
  }
  DiffOp total(u.size());
  for (int h = 1; h <= n; ++h) {
    DiffOp block(u.size());
    for (const auto& comp : index_compositions(n, h)) {
      DiffOp prod = build_Gn(model, comp[0], u.t(), u.s(1), u);
      for (int f = 1; f < h; ++f) {
        prod = compose(prod, build_Gn(model, comp[f], u.t(), u.s(f + 1), u));
      }
      block += prod;
    }
    // integrate s_h in [s_{h-1}, T], ..., s_1 in [t, T]
    for (int f = h; f >= 1; --f) {
      const TimeSymbol lower = (f == 1) ? u.t() : u.s(f - 1);
      DiffOp integrated(u.size());
      for (const auto& [key, coeff] : block.terms()) {
        integrated.add_term(key, integrate(coeff, u.s(f), lower, u.T()));
      }
      block = std::move(integrated);
    }
    total += block;
  }
  return total;
}

ExpansionOperators::ExpansionOperators(const ModelSpec& model, int order)
    : universe_(std::max(order, 1)) {
  if (order > 4) {
    throw CapabilityError(
        "price expansion is implemented for orders up to 4; the operator "
        "formulas are not tractable in closed form beyond that");
  }
  if (order < 0 || order > model.order()) {
    throw std::invalid_argument(
        "ExpansionOperators: order exceeds the model's Taylor tables");
  }
  ops_.reserve(order);
  for (int n = 1; n <= order; ++n) ops_.push_back(build_Ln(model, n, universe_));
}

const DiffOp& ExpansionOperators::L(int n) const {
  if (n < 1 || n > int(ops_.size())) {
    throw std::invalid_argument("ExpansionOperators::L: order out of range");
  }
  return ops_[n - 1];
}

namespace {

// divide c(z) by z^2 - z; returns {quotient, remainder r1*z + r0}
std::pair<std::vector<double>, std::array<double, 2>> divide_by_z2_minus_z(
    const std::vector<double>& c) {
  std::vector<double> rem = c;
  if (rem.size() < 3) rem.resize(3, 0.0);
  std::vector<double> quot(rem.size() - 2, 0.0);
  for (std::size_t d = rem.size() - 1; d >= 2; --d) {
    const double q = rem[d];
    quot[d - 2] = q;
    rem[d] = 0.0;
    rem[d - 1] += q;  // z^d = z^{d-2}(z^2 - z) + z^{d-1}
  }
  while (!quot.empty() && quot.back() == 0.0) quot.pop_back();
  return {quot, {rem[0], rem[1]}};
}

}  // namespace

PriceExpansion price_expansion(const ExpansionOperators& ops,
                               const ModelSpec& model,
                               const PayoffSpec& payoff, double t, double T,
                               double x, double y) {
  if (!(T > t)) throw std::invalid_argument("price_expansion: requires T > t");
  if (!payoff.x_only() && ops.order() >= 1) {
    throw CapabilityError(
        "price_expansion: corrections are available for x-only payoffs "
        "only");
  }
  model.validate_on(t, T);
  const int order = ops.order();
  const double tau = T - t;

  PriceExpansion pe;
  pe.tau = tau;
  pe.x = x;
  pe.y = y;
  pe.payoff = payoff;
  pe.gamma_integral = model.gamma(0, 0).integral(t, T);
  pe.sigma0 = std::sqrt(2.0 * model.a(0, 0).integral(t, T) / tau);
  pe.orders.resize(order + 1);

  // maximum x-derivative order any L_n can request
  int kmax = 0;
  for (int n = 1; n <= order; ++n) {
    for (const auto& [key, coeff] : ops.L(n).terms()) {
      if (key.dyn == 0) kmax = std::max(kmax, int(key.dxn));
    }
  }
  const std::vector<double> u0d =
      u0_x_derivatives(model, payoff, t, T, x, y, kmax);

  pe.orders[0].value = u0d[0];
  pe.orders[0].scalar_part = u0d[0];

  const TimeUniverse& u = ops.universe();
  std::vector<double> times(u.size(), 0.0);
  times[u.t().index()] = t;
  times[u.T().index()] = T;
  const double dx0 = x - model.xbar();
  const double dy0 = y - model.ybar();

  for (int n = 1; n <= order; ++n) {
    auto& ord = pe.orders[n];
    ord.xder_coeffs.assign(kmax + 1, 0.0);
    for (const auto& [key, coeff] : ops.L(n).terms()) {
      // dy-trailing terms annihilate the x-only order-zero price
      if (key.dyn > 0) continue;
      double v = coeff.eval(times);
      for (int e = 0; e < key.xpow; ++e) v *= dx0;
      for (int e = 0; e < key.ypow; ++e) v *= dy0;
      ord.xder_coeffs[key.dxn] += v;
    }
    double un = 0.0;
    for (int kd = 0; kd <= kmax; ++kd) un += ord.xder_coeffs[kd] * u0d[kd];
    ord.value = un;
    ord.scalar_part = ord.xder_coeffs.empty() ? 0.0 : ord.xder_coeffs[0];
    auto [quot, rem] = divide_by_z2_minus_z(ord.xder_coeffs);
    // the division is exact exactly when no killing terms entered
    const double scale = [&] {
      double m = 0.0;
      for (double c : ord.xder_coeffs) m = std::max(m, std::fabs(c));
      return m;
    }();
    if (std::fabs(rem[0]) <= 1e-12 * std::max(1.0, scale) &&
        std::fabs(rem[1]) <= 1e-12 * std::max(1.0, scale)) {
      ord.hermite_coeffs = std::move(quot);
    } else {
      ord.hermite_exact = false;
    }
  }
  return pe;
}

PriceExpansion price_expansion(const ModelSpec& model,
                               const PayoffSpec& payoff, double t, double T,
                               double x, double y, int order) {
  return price_expansion(ExpansionOperators(model, order), model, payoff, t,
                         T, x, y);
}

double price_with_default_floor(const PriceExpansion& expansion) {
  return expansion.payoff.floor_value + expansion.sum();
}

std::pair<double, double> shift_for_deterministic_rates(double t, double T,
                                                        double x,
                                                        const TimeCoeff& r) {
  const double ir = r.integral(t, T);
  return {x + ir, std::exp(-ir)};
}

}  // namespace lsv
