#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lsv {

/// One of the ordered time symbols t < s1 < ... < sN < T, identified by its
/// position in that order (t = 0, s_i = i, T = N+1).
class TimeSymbol {
 public:
  explicit constexpr TimeSymbol(int index) : index_(index) {}
  constexpr int index() const { return index_; }
  friend constexpr bool operator==(TimeSymbol a, TimeSymbol b) {
    return a.index_ == b.index_;
  }

 private:
  int index_;
};

/// The fixed symbol set for a given maximum expansion order N:
/// {t, s1, ..., sN, T}. Every TimePoly is built over one universe.
class TimeUniverse {
 public:
  explicit TimeUniverse(int max_order);

  int size() const { return size_; }
  int max_order() const { return size_ - 2; }
  TimeSymbol t() const { return TimeSymbol(0); }
  TimeSymbol s(int i) const;  // 1-based, i in [1, max_order]
  TimeSymbol T() const { return TimeSymbol(size_ - 1); }
  std::string name(TimeSymbol sym) const;

 private:
  int size_;
};

/// Polynomial in the time symbols of one universe with double coefficients.
/// Terms with exactly zero coefficient are never stored.
class TimePoly {
 public:
  static constexpr int kMaxSymbols = 8;
  using Key = std::array<std::uint8_t, kMaxSymbols>;

  explicit TimePoly(int nsyms);
  explicit TimePoly(const TimeUniverse& u) : TimePoly(u.size()) {}

  static TimePoly constant(int nsyms, double c);
  static TimePoly constant(const TimeUniverse& u, double c) {
    return constant(u.size(), c);
  }
  /// c * sym^power
  static TimePoly monomial(int nsyms, TimeSymbol sym, int power,
                           double c = 1.0);
  static TimePoly monomial(const TimeUniverse& u, TimeSymbol sym, int power,
                           double c = 1.0) {
    return monomial(u.size(), sym, power, c);
  }

  int nsyms() const { return nsyms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Key, double>& terms() const { return terms_; }

  /// Largest exponent of sym across all terms.
  int degree(TimeSymbol sym) const;

  TimePoly& operator+=(const TimePoly& other);
  TimePoly& operator-=(const TimePoly& other);
  TimePoly& operator*=(double c);
  friend TimePoly operator+(TimePoly a, const TimePoly& b) { return a += b; }
  friend TimePoly operator-(TimePoly a, const TimePoly& b) { return a -= b; }
  friend TimePoly operator*(TimePoly a, double c) { return a *= c; }
  friend TimePoly operator*(double c, TimePoly a) { return a *= c; }
  friend TimePoly operator*(const TimePoly& a, const TimePoly& b);
  TimePoly operator-() const;
  friend bool operator==(const TimePoly& a, const TimePoly& b) {
    return a.nsyms_ == b.nsyms_ && a.terms_ == b.terms_;
  }

  /// Substitute numeric values for every symbol; values[i] is the value of
  /// the symbol with index i.
  double eval(std::span<const double> values) const;

  /// Human-readable sorted form, e.g. "0.5*s1^2 - 0.5*t^2".
  std::string to_string(const TimeUniverse& u) const;

  void add_term(const Key& key, double c);

 private:
  int nsyms_;
  std::map<Key, double> terms_;
};

/// Definite integral of p over var from lower to upper, where both bounds
/// are symbols of the same universe. The result no longer contains var.
TimePoly integrate(const TimePoly& p, TimeSymbol var, TimeSymbol lower,
                   TimeSymbol upper);

/// Definite integral over [lower, upper] of a univariate polynomial in
/// calendar time, given by its coefficients in ascending powers. Bridges
/// the model's time-dependent coefficient functions into the symbol ring.
TimePoly integrate_time_function(std::span<const double> coeffs, int nsyms,
                                 TimeSymbol lower, TimeSymbol upper);

}  // namespace lsv
