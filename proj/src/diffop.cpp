#include "lsv/diffop.hpp"

#include <cstdio>
#include <stdexcept>

namespace lsv {

namespace {

// exact for the small arguments reached at order <= 4
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= double(n - i);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly2
// ---------------------------------------------------------------------------

Poly2 Poly2::monomial(int i, int j, double c) {
  Poly2 p;
  p.add_term(i, j, c);
  return p;
}

void Poly2::add_term(int i, int j, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace({i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Poly2::eval(double u, double v) const {
  double sum = 0.0;
  for (const auto& [key, c] : terms_) {
    double term = c;
    for (int e = 0; e < key.first; ++e) term *= u;
    for (int e = 0; e < key.second; ++e) term *= v;
    sum += term;
  }
  return sum;
}

Poly2& Poly2::operator+=(const Poly2& other) {
  for (const auto& [key, c] : other.terms_) add_term(key.first, key.second, c);
  return *this;
}

Poly2 operator*(Poly2 p, double c) {
  if (c == 0.0) return {};
  for (auto& [key, v] : p.terms_) v *= c;
  return p;
}

// ---------------------------------------------------------------------------
// DiffOp
// ---------------------------------------------------------------------------

DiffOp::DiffOp(int nsyms) : nsyms_(nsyms) {
  if (nsyms < 1 || nsyms > TimePoly::kMaxSymbols) {
    throw std::invalid_argument("DiffOp: universe size out of range");
  }
}

DiffOp DiffOp::identity(int nsyms) {
  DiffOp op(nsyms);
  op.add_term(OpKey{}, TimePoly::constant(nsyms, 1.0));
  return op;
}

void DiffOp::add_term(const OpKey& key, const TimePoly& coeff) {
  if (coeff.is_zero()) return;
  if (coeff.nsyms() != nsyms_) {
    throw std::invalid_argument("DiffOp: coefficient from another universe");
  }
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOp& DiffOp::operator+=(const DiffOp& other) {
  if (other.nsyms_ != nsyms_) {
    throw std::invalid_argument("DiffOp: mismatched symbol universe");
  }
  for (const auto& [key, coeff] : other.terms_) add_term(key, coeff);
  return *this;
}

DiffOp operator*(const TimePoly& c, const DiffOp& op) {
  DiffOp r(op.nsyms_);
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : op.terms_) r.add_term(key, c * coeff);
  return r;
}

DiffOp operator*(double c, const DiffOp& op) {
  return TimePoly::constant(op.nsyms(), c) * op;
}

std::string DiffOp::dump(const TimeUniverse& u) const {
  if (terms_.empty()) return "0\n";
  std::string out;
  for (const auto& [key, coeff] : terms_) {
    std::string head;
    auto part = [&head](const char* sym, int e) {
      if (e == 0) return;
      if (!head.empty()) head += " ";
      head += sym;
      head += "^" + std::to_string(e);
    };
    part("(x-xb)", key.xpow);
    part("(y-yb)", key.ypow);
    part("dx", key.dxn);
    part("dy", key.dyn);
    if (head.empty()) head = "1";
    out += head + " : " + coeff.to_string(u) + "\n";
  }
  return out;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  if (a.nsyms() != b.nsyms()) {
    throw std::invalid_argument("compose: mismatched symbol universe");
  }
  DiffOp r(a.nsyms());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      // move a's dx^k across b's (x-xb)^i, and likewise in y
      const TimePoly coeff = ca * cb;
      const int mmax = std::min<int>(ka.dxn, kb.xpow);
      const int pmax = std::min<int>(ka.dyn, kb.ypow);
      for (int m = 0; m <= mmax; ++m) {
        const double fx =
            binomial(ka.dxn, m) * falling_factorial(kb.xpow, m);
        for (int p = 0; p <= pmax; ++p) {
          const double f =
              fx * binomial(ka.dyn, p) * falling_factorial(kb.ypow, p);
          OpKey key;
          key.xpow = static_cast<std::uint8_t>(ka.xpow + kb.xpow - m);
          key.ypow = static_cast<std::uint8_t>(ka.ypow + kb.ypow - p);
          key.dxn = static_cast<std::uint8_t>(ka.dxn - m + kb.dxn);
          key.dyn = static_cast<std::uint8_t>(ka.dyn - p + kb.dyn);
          r.add_term(key, coeff * f);
        }
      }
    }
  }
  return r;
}

Poly2 apply_to_poly(const DiffOp& op, const Poly2& p,
                    std::span<const double> time_values) {
  Poly2 r;
  for (const auto& [key, coeff] : op.terms()) {
    const double c = coeff.eval(time_values);
    if (c == 0.0) continue;
    for (const auto& [pk, pc] : p.terms()) {
      const int a = pk.first, b = pk.second;
      if (a < key.dxn || b < key.dyn) continue;  // derivative kills the term
      const double factor =
          falling_factorial(a, key.dxn) * falling_factorial(b, key.dyn);
      r.add_term(a - key.dxn + key.xpow, b - key.dyn + key.ypow,
                 c * pc * factor);
    }
  }
  return r;
}

DiffOp scale_and_add(std::span<const std::pair<TimePoly, DiffOp>> ops,
                     int nsyms) {
  DiffOp r(nsyms);
  for (const auto& [scale, op] : ops) r += scale * op;
  return r;
}

}  // namespace lsv
