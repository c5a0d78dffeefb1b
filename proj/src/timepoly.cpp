#include "lsv/timepoly.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lsv {

TimeUniverse::TimeUniverse(int max_order) : size_(max_order + 2) {
  if (max_order < 0 || size_ > TimePoly::kMaxSymbols) {
    throw std::invalid_argument("TimeUniverse: max_order out of range");
  }
}

TimeSymbol TimeUniverse::s(int i) const {
  if (i < 1 || i > max_order()) {
    throw std::invalid_argument("TimeUniverse::s: index out of range");
  }
  return TimeSymbol(i);
}

std::string TimeUniverse::name(TimeSymbol sym) const {
  const int i = sym.index();
  if (i == 0) return "t";
  if (i == size_ - 1) return "T";
  return "s" + std::to_string(i);
}

TimePoly::TimePoly(int nsyms) : nsyms_(nsyms) {
  if (nsyms < 1 || nsyms > kMaxSymbols) {
    throw std::invalid_argument("TimePoly: universe size out of range");
  }
}

TimePoly TimePoly::constant(int nsyms, double c) {
  TimePoly p(nsyms);
  p.add_term(Key{}, c);
  return p;
}

TimePoly TimePoly::monomial(int nsyms, TimeSymbol sym, int power, double c) {
  if (sym.index() < 0 || sym.index() >= nsyms) {
    throw std::invalid_argument("TimePoly::monomial: symbol outside universe");
  }
  if (power < 0 || power > 255) {
    throw std::invalid_argument("TimePoly::monomial: bad power");
  }
  TimePoly p(nsyms);
  Key key{};
  key[sym.index()] = static_cast<std::uint8_t>(power);
  p.add_term(key, c);
  return p;
}

void TimePoly::add_term(const Key& key, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int TimePoly::degree(TimeSymbol sym) const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, int(key[sym.index()]));
  return d;
}

namespace {
void check_same_universe(const TimePoly& a, const TimePoly& b) {
  if (a.nsyms() != b.nsyms()) {
    throw std::invalid_argument("TimePoly: mismatched symbol universe");
  }
}
}  // namespace

TimePoly& TimePoly::operator+=(const TimePoly& other) {
  check_same_universe(*this, other);
  for (const auto& [key, c] : other.terms_) add_term(key, c);
  return *this;
}

TimePoly& TimePoly::operator-=(const TimePoly& other) {
  check_same_universe(*this, other);
  for (const auto& [key, c] : other.terms_) add_term(key, -c);
  return *this;
}

TimePoly& TimePoly::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, v] : terms_) v *= c;
  return *this;
}

TimePoly TimePoly::operator-() const {
  TimePoly r(*this);
  r *= -1.0;
  return r;
}

TimePoly operator*(const TimePoly& a, const TimePoly& b) {
  check_same_universe(a, b);
  TimePoly r(a.nsyms_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      TimePoly::Key key{};
      for (int i = 0; i < TimePoly::kMaxSymbols; ++i) {
        const int e = int(ka[i]) + int(kb[i]);
        if (e > 255) throw std::overflow_error("TimePoly: exponent overflow");
        key[i] = static_cast<std::uint8_t>(e);
      }
      r.add_term(key, ca * cb);
    }
  }
  return r;
}

double TimePoly::eval(std::span<const double> values) const {
  if (int(values.size()) != nsyms_) {
    throw std::invalid_argument("TimePoly::eval: wrong number of values");
  }
  double sum = 0.0;
  for (const auto& [key, c] : terms_) {
    double term = c;
    for (int i = 0; i < nsyms_; ++i) {
      for (int e = 0; e < int(key[i]); ++e) term *= values[i];
    }
    sum += term;
  }
  return sum;
}

std::string TimePoly::to_string(const TimeUniverse& u) const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  for (const auto& [key, c] : terms_) {
    if (!out.empty()) {
      out += (c < 0.0) ? " - " : " + ";
    } else if (c < 0.0) {
      out += "-";
    }
    std::snprintf(buf, sizeof(buf), "%.12g", std::fabs(c));
    out += buf;
    for (int i = 0; i < nsyms_; ++i) {
      if (key[i] == 0) continue;
      out += "*" + u.name(TimeSymbol(i));
      if (key[i] > 1) out += "^" + std::to_string(int(key[i]));
    }
  }
  return out;
}

TimePoly integrate(const TimePoly& p, TimeSymbol var, TimeSymbol lower,
                   TimeSymbol upper) {
  const int n = p.nsyms();
  for (TimeSymbol b : {lower, upper}) {
    if (b == var) {
      throw std::invalid_argument(
          "integrate: integration variable appears in a bound");
    }
    if (b.index() < 0 || b.index() >= n) {
      throw std::invalid_argument("integrate: bound outside universe");
    }
  }
  if (var.index() < 0 || var.index() >= n) {
    throw std::invalid_argument("integrate: variable outside universe");
  }
  TimePoly r(n);
  for (const auto& [key, c] : p.terms()) {
    const int e = key[var.index()];
    const double coeff = c / double(e + 1);
    // antiderivative var^{e+1}/(e+1), then substitute each bound for var
    TimePoly::Key up = key;
    up[var.index()] = 0;
    TimePoly::Key lo = up;
    up[upper.index()] = static_cast<std::uint8_t>(up[upper.index()] + e + 1);
    lo[lower.index()] = static_cast<std::uint8_t>(lo[lower.index()] + e + 1);
    r.add_term(up, coeff);
    r.add_term(lo, -coeff);
  }
  return r;
}

TimePoly integrate_time_function(std::span<const double> coeffs, int nsyms,
                                 TimeSymbol lower, TimeSymbol upper) {
  TimePoly r(nsyms);
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    if (coeffs[d] == 0.0) continue;
    const double c = coeffs[d] / double(d + 1);
    r += TimePoly::monomial(nsyms, upper, int(d) + 1, c);
    r += TimePoly::monomial(nsyms, lower, int(d) + 1, -c);
  }
  return r;
}

}  // namespace lsv
