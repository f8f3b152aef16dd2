#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bethe/error.hpp"

namespace bethe {

using BigInt = boost::multiprecision::cpp_int;

// Dense univariate polynomial with exact integer coefficients, lowest degree
// first. The zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<long long> coeffs) {
    c_.reserve(coeffs.size());
    for (long long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static Polynomial constant(const BigInt& v) { return Polynomial(std::vector<BigInt>{v}); }
  static Polynomial x() { return Polynomial{0, 1}; }
  // a*x + b
  static Polynomial linear(long long a, long long b) { return Polynomial{b, a}; }

  [[nodiscard]] const std::vector<BigInt>& coeffs() const { return c_; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const BigInt& leading() const {
    if (c_.empty()) throw SpecError("leading coefficient of the zero polynomial");
    return c_.back();
  }
  [[nodiscard]] BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const BigInt& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const BigInt& s) { return a *= s; }
  friend Polynomial operator*(const BigInt& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }

  [[nodiscard]] Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigInt> out(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<long long>(i);
    return Polynomial(std::move(out));
  }

  // gcd of the coefficients, sign of the leading coefficient.
  [[nodiscard]] BigInt content() const {
    BigInt g = 0;
    for (const auto& v : c_) g = boost::multiprecision::gcd(g, v);
    if (!c_.empty() && c_.back() < 0) g = -g;
    return g;
  }

  // Divides by the content; the result has a positive leading coefficient.
  [[nodiscard]] Polynomial primitive() const {
    if (is_zero()) return {};
    const BigInt g = content();
    std::vector<BigInt> out(c_);
    for (auto& v : out) v /= g;
    return Polynomial(std::move(out));
  }

  // Horner in long double. Loses accuracy for high degree with large
  // alternating coefficients; exact signs come from sign_at().
  [[nodiscard]] long double evaluate(long double x) const {
    long double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->convert_to<long double>();
    return acc;
  }

  [[nodiscard]] std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const BigInt& v = c_[i];
      if (v == 0) continue;
      const BigInt mag = v < 0 ? BigInt(-v) : v;
      if (first) {
        if (v < 0) os << "-";
      } else {
        os << (v < 0 ? " - " : " + ");
      }
      if (mag != 1 || i == 0) os << mag;
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<BigInt> c_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

struct PseudoDivision {
  Polynomial quotient;
  Polynomial remainder;
  BigInt scale;  // lc(divisor)^(deg a - deg b + 1)
};

// scale * a = quotient * b + remainder, with deg remainder < deg b.
// Integer-only: the divisor's leading coefficient is folded into scale.
inline PseudoDivision pseudo_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw SpecError("pseudo-division by the zero polynomial");
  const int db = b.degree();
  if (a.degree() < db) return {{}, a, BigInt(1)};
  const int delta = a.degree() - db + 1;
  const BigInt& lb = b.leading();
  std::vector<BigInt> r(a.coeffs());
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db + 1));
  const auto& bc = b.coeffs();
  for (int i = a.degree(); i >= db; --i) {
    const BigInt t = r[static_cast<std::size_t>(i)];
    // r <- lb * r - t * x^(i-db) * b ; q <- lb * q + t * x^(i-db)
    for (auto& v : r) v *= lb;
    for (auto& v : q) v *= lb;
    q[static_cast<std::size_t>(i - db)] += t;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= t * bc[static_cast<std::size_t>(j)];
  }
  BigInt scale = 1;
  for (int i = 0; i < delta; ++i) scale *= lb;
  r.resize(static_cast<std::size_t>(db));
  return {Polynomial(std::move(q)), Polynomial(std::move(r)), scale};
}

// True iff pb = pa * q for some rational polynomial q.
inline bool divides_exact(const Polynomial& pa, const Polynomial& pb) {
  if (pa.is_zero()) throw SpecError("divides_exact: divisor must be nonzero");
  return pseudo_divide(pb, pa).remainder.is_zero();
}

// Primitive gcd over Q[x] (positive leading coefficient).
inline Polynomial gcd(Polynomial a, Polynomial b) {
  a = a.primitive();
  b = b.primitive();
  while (!b.is_zero()) {
    Polynomial r = pseudo_divide(a, b).remainder.primitive();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// a / b for b | a over Q[x], returned as a primitive integer polynomial.
inline Polynomial exact_quotient_primitive(const Polynomial& a, const Polynomial& b) {
  auto pd = pseudo_divide(a, b);
  if (!pd.remainder.is_zero()) throw ConsistencyError("exact_quotient_primitive: divisor does not divide");
  return pd.quotient.primitive();
}

inline BigInt pow2(unsigned e) { return BigInt(1) << e; }

// Dyadic rational num / 2^exp, used for exact sign evaluation.
struct Dyadic {
  BigInt num = 0;
  unsigned exp = 0;

  static Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
    const unsigned e = std::max(a.exp, b.exp);
    BigInt s = a.num * pow2(e - a.exp) + b.num * pow2(e - b.exp);
    return {std::move(s), e + 1};
  }
  [[nodiscard]] double to_double() const { return std::ldexp(num.convert_to<double>(), -static_cast<int>(exp)); }
  // b - a as a double
  static double width(const Dyadic& a, const Dyadic& b) {
    const unsigned e = std::max(a.exp, b.exp);
    const BigInt d = b.num * pow2(e - b.exp) - a.num * pow2(e - a.exp);
    return std::ldexp(d.convert_to<double>(), -static_cast<int>(e));
  }
};

// Exact sign of p at a dyadic point.
inline int sign_at(const Polynomial& p, const Dyadic& x) {
  if (p.is_zero()) return 0;
  const auto& c = p.coeffs();
  const auto n = static_cast<unsigned>(p.degree());
  // p(m/2^e) * 2^(e n) = sum c_i m^i 2^(e (n - i))
  BigInt acc = c[n];
  for (unsigned i = n; i-- > 0;) {
    acc *= x.num;
    if (c[i] != 0) acc += c[i] * pow2(x.exp * (n - i));
  }
  return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

}  // namespace bethe
