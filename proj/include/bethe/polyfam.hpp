#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/polynomial.hpp"
#include "bethe/roots.hpp"

namespace bethe {

// Q_n = qc1 * P_n - qc0 * P_{n-1}
struct QRule {
  Polynomial qc1;
  BigInt qc0;
};

// P_n = c1 * P_{n-step} - c0 * P_{n-2 step} for n >= 2 step, seeded with
// initial = {P_0, ..., P_{2 step - 1}}.
struct FamilyConfig {
  std::string label;
  int step = 1;
  Polynomial c1;
  BigInt c0;
  std::vector<Polynomial> initial;
  QRule q_rule;
  OperatorKind op = OperatorKind::Adjacency;
  // Set when member roots are 2 sqrt(b) cos(l pi / n).
  std::optional<int> closed_form_b;
  // When nonempty, the family is P_n = x P_{n-1} - level_coeffs[n] P_{n-2}
  // with P_0 = 0, P_1 = 1 and c1, c0 are unused.
  std::vector<int> level_coeffs;
};

struct PolyFamily {
  FamilyConfig config;
  std::vector<Polynomial> members;
  std::vector<Polynomial> q_members;

  [[nodiscard]] int n_max() const { return static_cast<int>(members.size()) - 1; }
  [[nodiscard]] const Polynomial& member(int n) const {
    if (n < 0 || n > n_max()) throw SpecError("family member index " + std::to_string(n) + " out of range");
    return members[static_cast<std::size_t>(n)];
  }
};

inline PolyFamily make_family(const FamilyConfig& config, int n_max) {
  if (n_max < 1) throw SpecError("make_family: n_max must be >= 1");
  if (config.step < 1 || config.initial.size() != static_cast<std::size_t>(2 * config.step))
    throw SpecError("make_family: need 2*step initial members");
  PolyFamily fam{config, {}, {}};
  const auto s = static_cast<std::size_t>(config.step);
  for (std::size_t n = 0; n <= static_cast<std::size_t>(n_max); ++n) {
    if (n < 2 * s)
      fam.members.push_back(config.initial[n]);
    else
      fam.members.push_back(config.c1 * fam.members[n - s] - fam.members[n - 2 * s] * config.c0);
  }
  for (std::size_t n = 0; n <= static_cast<std::size_t>(n_max); ++n) {
    Polynomial q = config.q_rule.qc1 * fam.members[n];
    if (n > 0) q -= fam.members[n - 1] * config.q_rule.qc0;
    fam.q_members.push_back(std::move(q));
  }
  return fam;
}

inline const Polynomial& make_root_poly(const PolyFamily& family, int n) {
  if (n < 0 || n > family.n_max())
    throw SpecError("make_root_poly: index " + std::to_string(n) + " outside 0.." + std::to_string(family.n_max()));
  return family.q_members[static_cast<std::size_t>(n)];
}

// Values P_0(x) .. P_{n_max}(x) in double precision via the recurrence.
inline std::vector<double> eval_members(const FamilyConfig& config, double x, int n_max) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n_max) + 1);
  if (!config.level_coeffs.empty()) {
    if (static_cast<int>(config.level_coeffs.size()) <= n_max) throw SpecError("eval_members: too few level coefficients");
    for (std::size_t n = 0; n <= static_cast<std::size_t>(n_max); ++n)
      v.push_back(n < 2 ? static_cast<double>(n) : x * v[n - 1] - config.level_coeffs[n] * v[n - 2]);
    return v;
  }
  const auto s = static_cast<std::size_t>(config.step);
  const double c1 = static_cast<double>(config.c1.evaluate(x));
  const double c0 = config.c0.convert_to<double>();
  for (std::size_t n = 0; n <= static_cast<std::size_t>(n_max); ++n) {
    if (n < 2 * s)
      v.push_back(static_cast<double>(config.initial[n].evaluate(x)));
    else
      v.push_back(c1 * v[n - s] - c0 * v[n - 2 * s]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Standard families.

// Generalized Fibonacci polynomials P_n = x P_{n-1} - b P_{n-2}, P_0 = 0, P_1 = 1,
// with Q_n = x P_n - b P_{n-1} = P_{n+1}: the constant tree with b children.
inline FamilyConfig constant_family(int b) {
  if (b < 1) throw SpecError("constant_family: b must be >= 1");
  FamilyConfig c;
  c.label = "P^(" + std::to_string(b) + ")";
  c.c1 = Polynomial::x();
  c.c0 = b;
  c.initial = {Polynomial{}, Polynomial{1}};
  c.q_rule = {Polynomial::x(), BigInt(b)};
  c.closed_form_b = b;
  return c;
}

// Ball of the k-regular tree: interior branching b = k-1, root closed by
// Q_n = x P_n - k P_{n-1}.
inline FamilyConfig hat_family(int k) {
  if (k < 3) throw SpecError("hat_family: k must be >= 3");
  FamilyConfig c = constant_family(k - 1);
  c.q_rule = {Polynomial::x(), BigInt(k)};
  return c;
}

// F_n = (x - (d-2)) F_{n-1} - k(d-1) F_{n-2}, G_n = x F_n - k(d-1) F_{n-1}.
inline FamilyConfig fan_family(int k, int d) {
  BranchingSpec::fan(k, d).validate();
  FamilyConfig c;
  c.label = "F^(" + std::to_string(k) + "," + std::to_string(d) + ")";
  c.c1 = Polynomial::linear(1, -(d - 2));
  c.c0 = k * (d - 1);
  c.initial = {Polynomial{}, Polynomial{1}};
  c.q_rule = {Polynomial::x(), BigInt(k * (d - 1))};
  if (d == 2) c.closed_form_b = k;
  return c;
}

namespace detail {

// Sum over i-subsets of cyclic positions with no two adjacent (mod l) of the
// product of the chosen alphas. sigma(0) = 1.
inline BigInt sigma_noncons_unchecked(const std::vector<int>& alphas, int i) {
  const int l = static_cast<int>(alphas.size());
  BigInt total = 0;
  std::vector<int> chosen;
  std::function<void(int, BigInt)> rec = [&](int start, BigInt prod) {
    if (static_cast<int>(chosen.size()) == i) {
      total += prod;
      return;
    }
    for (int j = start; j < l; ++j) {
      if (!chosen.empty() && j == chosen.back() + 1) continue;
      if (!chosen.empty() && chosen.front() == 0 && j == l - 1) continue;
      chosen.push_back(j);
      rec(j + 1, prod * alphas[static_cast<std::size_t>(j)]);
      chosen.pop_back();
    }
  };
  rec(0, BigInt(1));
  return total;
}

// Branching number used in the step P_n = x P_{n-1} - c P_{n-2} of a
// periodic tree whose depth is a multiple of the period.
inline int periodic_step_coeff(const std::vector<int>& alphas, int n) {
  const int l = static_cast<int>(alphas.size());
  const int idx = ((-(n - 2)) % l + l) % l;
  return alphas[static_cast<std::size_t>(idx)];
}

}  // namespace detail

inline BigInt sigma_noncons(const std::vector<int>& alphas, int i) {
  const int l = static_cast<int>(alphas.size());
  if (l < 2) throw SpecError("sigma_noncons: need at least two alphas");
  if (i < 1 || i > l / 2)
    throw SpecError("sigma_noncons: i=" + std::to_string(i) + " outside 1.." + std::to_string(l / 2));
  return detail::sigma_noncons_unchecked(alphas, i);
}

// Step-l family of the periodic tree with branching alphas. c1 is the trace
// of the l-fold transfer matrix, sum_i (-1)^i sigma(i) x^(l - 2i) with
// sigma(0) = 1, and c0 its determinant prod alpha.
inline FamilyConfig periodic_recurrence_coeffs(const std::vector<int>& alphas) {
  BranchingSpec::periodic(alphas).validate();
  const int l = static_cast<int>(alphas.size());
  FamilyConfig c;
  c.label = "P^(";
  for (int j = 0; j < l; ++j) c.label += (j ? "," : "") + std::to_string(alphas[static_cast<std::size_t>(j)]);
  c.label += ")";
  c.step = l;
  std::vector<BigInt> trace(static_cast<std::size_t>(l) + 1);
  for (int i = 0; 2 * i <= l; ++i) {
    const BigInt s = detail::sigma_noncons_unchecked(alphas, i);
    trace[static_cast<std::size_t>(l - 2 * i)] = (i % 2 == 0) ? s : BigInt(-s);
  }
  c.c1 = Polynomial(std::move(trace));
  c.c0 = 1;
  for (int a : alphas) c.c0 *= a;
  // seeds from the first-order layer recurrence
  c.initial = {Polynomial{}, Polynomial{1}};
  for (int n = 2; n < 2 * l; ++n)
    c.initial.push_back(Polynomial::x() * c.initial[static_cast<std::size_t>(n - 1)] -
                        c.initial[static_cast<std::size_t>(n - 2)] * BigInt(detail::periodic_step_coeff(alphas, n)));
  c.q_rule = {Polynomial::x(), BigInt(alphas[0])};
  return c;
}

// First-order members of the periodic family, P_n = x P_{n-1} - c_n P_{n-2};
// an independent route to the same polynomials as the step-l recurrence.
inline std::vector<Polynomial> periodic_first_order_members(const std::vector<int>& alphas, int n_max) {
  std::vector<Polynomial> out{Polynomial{}, Polynomial{1}};
  for (int n = 2; n <= n_max; ++n)
    out.push_back(Polynomial::x() * out[static_cast<std::size_t>(n - 1)] -
                  out[static_cast<std::size_t>(n - 2)] * BigInt(detail::periodic_step_coeff(alphas, n)));
  out.resize(static_cast<std::size_t>(n_max) + 1);
  return out;
}

// Laplacian and random-walk families as stated in the literature this
// library reproduces. Kept for the discrepancy report only.
inline FamilyConfig laplacian_family_stated(int k) {
  FamilyConfig c;
  c.label = "Lhat^(" + std::to_string(k) + ")[stated]";
  c.c1 = Polynomial::linear(-1, k);
  c.c0 = k - 1;
  c.initial = {Polynomial{1}, Polynomial{1}};  // P_1 = 1, P_2 = 1 - x
  c.q_rule = {Polynomial::linear(1, -k), BigInt(-k)};
  c.op = OperatorKind::Laplacian;
  return c;
}

inline FamilyConfig walk_family_stated(int k) {
  FamilyConfig c;
  c.label = "W~^(" + std::to_string(k) + ")[stated]";
  c.c1 = Polynomial::linear(k + 1, 0);
  c.c0 = k * (k + 1);
  c.initial = {Polynomial{}, Polynomial{1}};  // P_2 = (k+1) x
  c.q_rule = {Polynomial::x(), BigInt(1)};
  c.op = OperatorKind::RandomWalk;
  return c;
}

// Families obtained by writing the operator's eigen-relation on depth-indexed
// vectors (the depth reduction) and clearing denominators. Random-walk
// members describe eigenvectors of D^-1 A; the eigenvalues equal those of the
// symmetrized D^-1/2 A D^-1/2.
inline FamilyConfig derived_family(const BranchingSpec& spec, OperatorKind op) {
  spec.validate();
  if (!spec.is<ConstantChildren>() && !spec.is<RegularSubtree>())
    throw SpecError("derived_family: only constant and hat trees are supported, got " + spec.label());
  const bool hat = spec.is<RegularSubtree>();
  const int k = spec.k();
  const int c = hat ? k - 1 : k;  // interior children
  const int deg = c + 1;          // interior degree
  if (op == OperatorKind::Adjacency) return hat ? hat_family(k) : constant_family(k);
  FamilyConfig f;
  f.op = op;
  f.c0 = c;
  if (op == OperatorKind::Laplacian) {
    f.label = std::string(hat ? "Lhat" : "L") + "^(" + std::to_string(k) + ")";
    f.c1 = Polynomial::linear(-1, deg);
    f.initial = {Polynomial{1}, Polynomial{1}};
    f.q_rule = {Polynomial::linear(-1, k), BigInt(k)};
  } else {
    f.label = std::string(hat ? "What" : "W") + "^(" + std::to_string(k) + ")";
    f.c1 = Polynomial::linear(deg, 0);
    f.initial = {Polynomial::x(), Polynomial{1}};
    f.q_rule = {Polynomial::x(), BigInt(1)};
  }
  return f;
}

// ---------------------------------------------------------------------------

inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n < 1) throw SpecError("euler_phi: n must be >= 1");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

// Distinct real roots of P_n, closed form when available.
inline std::vector<double> member_roots(const PolyFamily& family, int n, double tol = 1e-13) {
  const auto& p = family.member(n);
  if (p.degree() <= 0) return {};
  if (family.config.closed_form_b) return closed_form_roots(*family.config.closed_form_b, n);
  return sturm_roots(p, tol).roots;
}

// Scale of the root set, used to make root matching tolerances relative.
inline double root_scale(const FamilyConfig& config) {
  if (config.step == 1 && config.c1 == Polynomial::x() && config.c0 > 0)
    return 2.0 * std::sqrt(config.c0.convert_to<double>());
  return 1.0;
}

// For every n in 0..n_max: the number of roots of P_n not shared with any of
// P_2 .. P_{n-1}. Roots are compared within tol * root_scale.
inline std::vector<int> new_root_counts(const PolyFamily& family, double tol = 1e-9) {
  const double eps = tol * root_scale(family.config);
  std::vector<std::vector<double>> seen;
  std::vector<int> out(static_cast<std::size_t>(family.n_max()) + 1, 0);
  for (int n = 2; n <= family.n_max(); ++n) {
    // closed forms are not used here so that the count is an independent check
    const auto& p = family.member(n);
    const auto roots = p.degree() > 0 ? sturm_roots(p).roots : std::vector<double>{};
    int fresh = 0;
    for (double r : roots) {
      bool old = false;
      for (const auto& prev : seen)
        for (double q : prev)
          if (std::abs(q - r) <= eps) old = true;
      if (!old) ++fresh;
    }
    out[static_cast<std::size_t>(n)] = fresh;
    seen.push_back(roots);
  }
  return out;
}

inline int new_root_count(const PolyFamily& family, int n, double tol = 1e-9) {
  if (n < 0 || n > family.n_max()) throw SpecError("new_root_count: index out of range");
  if (n < 2) return 0;
  PolyFamily head = family;
  head.members.resize(static_cast<std::size_t>(n) + 1);
  head.q_members.resize(static_cast<std::size_t>(n) + 1);
  return new_root_counts(head, tol)[static_cast<std::size_t>(n)];
}

}  // namespace bethe
