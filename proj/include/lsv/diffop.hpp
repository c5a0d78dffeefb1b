#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsv/timepoly.hpp"

namespace lsv {

/// Exponents of one normal-ordered operator term
/// (x-xb)^xpow (y-yb)^ypow dx^dxn dy^dyn.
struct OpKey {
  std::uint8_t xpow = 0, ypow = 0, dxn = 0, dyn = 0;
  friend auto operator<=>(const OpKey&, const OpKey&) = default;
};

/// Bivariate polynomial in (x-xb), (y-yb) with numeric coefficients; the
/// brute-force target for operator application.
class Poly2 {
 public:
  using Key = std::pair<int, int>;

  Poly2() = default;
  static Poly2 monomial(int i, int j, double c);

  void add_term(int i, int j, double c);
  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double eval(double u, double v) const;  // u = x-xb, v = y-yb

  Poly2& operator+=(const Poly2& other);
  friend Poly2 operator*(Poly2 p, double c);
  friend bool operator==(const Poly2&, const Poly2&) = default;

 private:
  std::map<Key, double> terms_;
};

/// Normal-ordered differential operator: a sum of terms
/// TimePoly * (x-xb)^i (y-yb)^j dx^k dy^l with all multiplication factors
/// left of all derivatives. The zero operator has no terms.
class DiffOp {
 public:
  explicit DiffOp(int nsyms);
  explicit DiffOp(const TimeUniverse& u) : DiffOp(u.size()) {}

  static DiffOp identity(int nsyms);

  int nsyms() const { return nsyms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<OpKey, TimePoly>& terms() const { return terms_; }

  void add_term(const OpKey& key, const TimePoly& coeff);

  DiffOp& operator+=(const DiffOp& other);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator*(const TimePoly& c, const DiffOp& op);
  friend DiffOp operator*(double c, const DiffOp& op);
  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.nsyms_ == b.nsyms_ && a.terms_ == b.terms_;
  }

  /// Sorted human-readable dump, one term per line:
  ///   "(x-xb)^1 dx^2 : 2*s1 - 2*t"
  std::string dump(const TimeUniverse& u) const;

 private:
  int nsyms_;
  std::map<OpKey, TimePoly> terms_;
};

/// Normal-ordered operator product a∘b (apply b first). Uses the closed-form
/// commutation dx^k (x-xb)^i = sum_m C(k,m) i!/(i-m)! (x-xb)^{i-m} dx^{k-m}
/// and its y analogue.
DiffOp compose(const DiffOp& a, const DiffOp& b);

/// Exact action of op on a bivariate polynomial, with numeric values
/// substituted for the time symbols.
Poly2 apply_to_poly(const DiffOp& op, const Poly2& p,
                    std::span<const double> time_values);

/// TimePoly-linear combination of operators, normal-ordered.
DiffOp scale_and_add(std::span<const std::pair<TimePoly, DiffOp>> ops,
                     int nsyms);

}  // namespace lsv
