#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "bethe/error.hpp"
#include "bethe/polynomial.hpp"

namespace bethe {

// Roots of the constant-branching family member P_n with parameter b:
// 2 sqrt(b) cos(l pi / n) for l = 1 .. n-1, ascending. The fraction l/n is
// reduced first so that equal angles produce bit-identical values.
inline std::vector<double> closed_form_roots(int b, int n) {
  if (b < 1) throw SpecError("closed_form_roots: b must be >= 1");
  if (n < 1) throw SpecError("closed_form_roots: n must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  const double scale = 2.0 * std::sqrt(static_cast<double>(b));
  for (int l = n - 1; l >= 1; --l) {
    const int g = std::gcd(l, n);
    const int num = l / g, den = n / g;
    // cos(pi/2) is not exactly zero in floating point
    const double c = (2 * num == den) ? 0.0 : std::cos(std::numbers::pi * num / den);
    out.push_back(scale * c);
  }
  return out;
}

struct RealRoots {
  std::vector<double> roots;  // ascending, each distinct root once
  bool reduced = false;       // input was not squarefree; its squarefree part was used
};

namespace detail {

// Sturm chain with integer coefficients: S0 = p, S1 = p', S_{i+1} a positive
// multiple of -rem(S_{i-1}, S_i).
inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{p, p.derivative().primitive()};
  while (chain.back().degree() > 0) {
    const auto& a = chain[chain.size() - 2];
    const auto& b = chain.back();
    auto pd = pseudo_divide(a, b);
    if (pd.remainder.is_zero()) break;
    Polynomial next = pd.remainder.primitive();  // positive leading coefficient
    // sign(-rem) = -sign(scale) * sign(remainder); primitive() fixed the lc positive,
    // so restore the true sign of -rem.
    const int rem_lc_sign = pd.remainder.leading() > 0 ? 1 : -1;
    const int scale_sign = pd.scale > 0 ? 1 : -1;
    if (-rem_lc_sign * scale_sign < 0) next = -next;
    chain.push_back(std::move(next));
  }
  return chain;
}

inline int sign_variations(const std::vector<Polynomial>& chain, const Dyadic& x) {
  int count = 0, last = 0;
  for (const auto& s : chain) {
    const int sg = sign_at(s, x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

struct Interval {
  Dyadic lo, hi;
  int count;  // roots in the open interval (lo, hi)
};

}  // namespace detail

// All distinct real roots of p, isolated with a Sturm chain evaluated exactly
// at dyadic points and refined by exact-sign bisection to width <= tol.
// The family polynomials handled here are real-rooted; a root count that
// disagrees with the degree of the squarefree part is a hard error.
inline RealRoots sturm_roots(const Polynomial& p, double tol = 1e-13, bool require_real_rooted = true) {
  if (p.is_zero()) throw SpecError("sturm_roots: zero polynomial");
  if (!(tol > 0)) throw SpecError("sturm_roots: tol must be positive");
  RealRoots out;
  if (p.degree() == 0) return out;

  Polynomial q = p.primitive();
  const Polynomial g = gcd(q, q.derivative());
  if (g.degree() > 0) {
    q = exact_quotient_primitive(q, g);
    out.reduced = true;
  }
  const auto chain = detail::sturm_chain(q);

  // Cauchy bound: all roots lie strictly inside (-2^e, 2^e).
  BigInt maxc = 0;
  for (const auto& c : q.coeffs()) maxc = std::max(maxc, BigInt(abs(c)));
  const BigInt lead = abs(q.leading());
  unsigned e = 0;
  while (pow2(e) * lead < lead + maxc) ++e;
  ++e;

  const Dyadic lo{-pow2(e), 0}, hi{pow2(e), 0};
  const int total = detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
  if (require_real_rooted && total != q.degree())
    throw ConsistencyError("sturm_roots: found " + std::to_string(total) + " real roots for squarefree degree " +
                           std::to_string(q.degree()) + " (" + q.to_string() + ")");

  // sign of q just to the right of x (q(x) may be zero)
  const Polynomial dq = q.derivative();
  auto sign_right = [&](const Dyadic& x) {
    const int s = sign_at(q, x);
    return s != 0 ? s : sign_at(dq, x);
  };

  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(total));
  std::vector<detail::Interval> work{{lo, hi, total}};
  while (!work.empty()) {
    auto iv = work.back();
    work.pop_back();
    if (iv.count == 0) continue;
    if (iv.count == 1) {
      // Bisect on the sign of q. sl is the sign just right of lo.
      int sl = sign_right(iv.lo);
      Dyadic a = iv.lo, b = iv.hi;
      bool exact = false;
      while (Dyadic::width(a, b) > tol && a.exp < 4096) {
        Dyadic m = Dyadic::midpoint(a, b);
        const int sm = sign_at(q, m);
        if (sm == 0) {
          roots.push_back(m.to_double());
          exact = true;
          break;
        }
        if (sm == sl) {
          a = std::move(m);
        } else {
          b = std::move(m);
        }
      }
      if (!exact) roots.push_back(Dyadic::midpoint(a, b).to_double());
      continue;
    }
    Dyadic m = Dyadic::midpoint(iv.lo, iv.hi);
    const int vl = detail::sign_variations(chain, iv.lo);
    const int vm = detail::sign_variations(chain, m);
    const bool m_root = sign_at(q, m) == 0;
    // variations drop by one at each root; (lo, m] holds vl - vm roots
    const int left = vl - vm - (m_root ? 1 : 0);
    if (m_root) roots.push_back(m.to_double());
    work.push_back({m, iv.hi, iv.count - left - (m_root ? 1 : 0)});
    work.push_back({iv.lo, std::move(m), left});
  }
  std::sort(roots.begin(), roots.end());
  out.roots = std::move(roots);
  return out;
}

}  // namespace bethe
