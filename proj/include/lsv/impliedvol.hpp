#pragma once

#include <span>
#include <vector>

#include "lsv/expansion.hpp"
#include "lsv/model.hpp"

namespace lsv {

/// The implied volatility series sigma_0, ..., sigma_N and its sum.
struct IVExpansion {
  std::vector<double> terms;  // index n holds sigma_n
  double total = 0.0;

  int max_order() const { return int(terms.size()) - 1; }
};

/// Partial Bell polynomial B_{n,h} evaluated at xs = (x_1, ..., x_{n-h+1}),
/// via B_{n,h} = sum_j C(n-1, j-1) x_j B_{n-j, h-1}.
double bell_partial(int n, int h, std::span<const double> xs);

/// Leading implied vol sqrt(2 int_t^T a_0(s) ds / (T-t)). Requires a model
/// without default (all gamma tables zero).
double iv_sigma0(const ModelSpec& model, double t, double T);

/// Converts a price expansion for a call or put into the implied-vol
/// series. Fully explicit: every term is assembled from Hermite-ratio
/// evaluations, with no integration and no special functions.
IVExpansion iv_expand(const PriceExpansion& expansion);

/// Residual u^BS(sum sigma_n) - sum u_n in price units; small values
/// certify the series inversion.
double iv_check_roundtrip(const IVExpansion& iv,
                          const PriceExpansion& expansion);

}  // namespace lsv
