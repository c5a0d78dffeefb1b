#pragma once

#include <utility>
#include <vector>

#include "lsv/diffop.hpp"
#include "lsv/kernel.hpp"
#include "lsv/model.hpp"
#include "lsv/timepoly.hpp"

namespace lsv {

/// Per-order pieces of the price expansion at one evaluation point.
struct PriceExpansion {
  struct Order {
    double value = 0.0;  // u_n
    /// coefficients of dx^k applied to the order-zero price
    std::vector<double> xder_coeffs;
    /// c_{n,k} with u_n = sum_k c_{n,k} dx^k (dx^2 - dx) u0; valid only
    /// when hermite_exact (always the case without killing terms)
    std::vector<double> hermite_coeffs;
    bool hermite_exact = true;
    /// pure-multiplier part (the only surviving piece for bonds);
    /// by convention the order-0 entry holds u0 itself
    double scalar_part = 0.0;
  };

  double sigma0 = 0.0;
  double tau = 0.0;
  double x = 0.0, y = 0.0;
  double gamma_integral = 0.0;  // int_t^T gamma_0
  PayoffSpec payoff;
  std::vector<Order> orders;  // size N+1

  int max_order() const { return int(orders.size()) - 1; }
  double order_value(int n) const { return orders.at(n).value; }
  /// sum of u_0..u_N (floor excluded)
  double sum() const;
};

/// I_{n,h}: all h-tuples of positive integers summing to n.
std::vector<std::vector<int>> index_compositions(int n, int h);

/// The Taylor-level operator
///   a_{n-h,h}(dx^2 - dx) + alpha_{n-h,h} dy + b_{n-h,h} dy^2
///   + c_{n-h,h} dx dy + gamma_{n-h,h}(dx - 1),
/// with coefficients evaluated at the time symbol s.
DiffOp build_Anh(const ModelSpec& model, int n, int h, TimeSymbol s,
                 const TimeUniverse& u);

/// M1 (which = 1) or M2 (which = 2) over the window [t_sym, s_sym].
DiffOp build_M(const ModelSpec& model, int which, TimeSymbol t_sym,
               TimeSymbol s_sym, const TimeUniverse& u);

/// G_n(t,s) = sum_h M1^{n-h} M2^h A_{n-h,h}(s), normal-ordered.
DiffOp build_Gn(const ModelSpec& model, int n, TimeSymbol t_sym,
                TimeSymbol s_sym, const TimeUniverse& u);

/// The fully integrated correction operator L_n; coefficients are
/// polynomials in (t, T) only.
DiffOp build_Ln(const ModelSpec& model, int n, const TimeUniverse& u);

/// Caches L_1..L_N for repeated pricing over a shared model.
class ExpansionOperators {
 public:
  ExpansionOperators(const ModelSpec& model, int order);

  int order() const { return int(ops_.size()); }
  const TimeUniverse& universe() const { return universe_; }
  const DiffOp& L(int n) const;  // n in [1, order]

 private:
  TimeUniverse universe_;
  std::vector<DiffOp> ops_;
};

PriceExpansion price_expansion(const ExpansionOperators& ops,
                               const ModelSpec& model,
                               const PayoffSpec& payoff, double t, double T,
                               double x, double y);

PriceExpansion price_expansion(const ModelSpec& model,
                               const PayoffSpec& payoff, double t, double T,
                               double x, double y, int order);

/// V = K0 + sum_n u_n, with the u_n built for the floor-adjusted payoff.
double price_with_default_floor(const PriceExpansion& expansion);

/// Change of variables for deterministic rates: returns the shifted log
/// price x + int_t^T r(s) ds and the discount exp(-int_t^T r(s) ds) to be
/// applied to the zero-rate price.
std::pair<double, double> shift_for_deterministic_rates(double t, double T,
                                                        double x,
                                                        const TimeCoeff& r);

}  // namespace lsv
