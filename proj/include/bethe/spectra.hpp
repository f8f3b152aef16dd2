#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/oracle.hpp"
#include "bethe/polyfam.hpp"
#include "bethe/polynomial.hpp"
#include "bethe/roots.hpp"
#include "bethe/treegen.hpp"

namespace bethe {

struct SpectrumSource {
  std::string family_label;
  int poly_index = 0;
  int first_index = 0;
};

struct SpectrumEntry {
  double value = 0;
  std::int64_t multiplicity = 0;
  SpectrumSource source;
};

struct SpectrumReport {
  BranchingSpec spec;
  int depth = 0;
  OperatorKind op = OperatorKind::Adjacency;
  std::int64_t total_dim = 0;
  std::vector<SpectrumEntry> entries;

  [[nodiscard]] std::vector<Cluster> clusters() const {
    std::vector<Cluster> out;
    for (const auto& e : entries) out.push_back({e.value, static_cast<int>(e.multiplicity)});
    return out;
  }
  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.value);
    return out;
  }
};

// Bottom-up characteristic polynomials of a spherically symmetric tree:
// P_j is the characteristic polynomial of the depth-indexed block on the
// lowest j-1 levels, P_j = x P_{j-1} - c_{r-j+2} P_{j-2}. The last entry,
// P_{r+2}, closes at the root and uses the root's branching number.
inline std::vector<Polynomial> level_polynomials(const LevelModel& m) {
  const int r = m.depth;
  std::vector<Polynomial> p{Polynomial{}, Polynomial{1}};
  for (int j = 2; j <= r + 2; ++j) {
    const int g0 = r - j + 2;
    p.push_back(Polynomial::x() * p[static_cast<std::size_t>(j - 1)] -
                p[static_cast<std::size_t>(j - 2)] * BigInt(m.children[static_cast<std::size_t>(g0)]));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Multiplicities.

namespace detail {

inline int closing_index(const BranchingSpec& spec, int depth) {
  return spec.is<RegularSubtree>() ? depth + 1 : depth + 2;
}

}  // namespace detail

// Dimension of the eigenspace contributed by the roots of the index-s
// polynomial: for 2 <= s <= depth+1 the anchors sit at depth a = depth+1-s
// and each contributes c_a - 1 vectors; the closing index contributes 1.
inline std::int64_t exact_multiplicity(int s, int depth, const BranchingSpec& spec) {
  const LevelModel m = level_model(spec, depth);
  const int top = detail::closing_index(spec, depth);
  if (s < 2 || s > std::max(top, depth + 1))
    throw SpecError("exact_multiplicity: s=" + std::to_string(s) + " outside 2.." + std::to_string(top) +
                    " for depth " + std::to_string(depth));
  if (s == depth + 2) return 1;
  const int a = depth + 1 - s;
  const auto sz = m.level_size[static_cast<std::size_t>(a)];
  const auto c = static_cast<std::uint64_t>(m.children[static_cast<std::size_t>(a)] - 1);
  return static_cast<std::int64_t>(detail::checked_mul(sz, c));
}

// Total multiplicity at the given depth of a value first appearing as a root
// of P_m, summed over the indices jm where it recurs by divisibility. The
// hat tree's closing polynomial is not included (see eigenvalue_multiplicity).
inline std::int64_t cumulative_multiplicity(int m, int depth, const BranchingSpec& spec) {
  if (!spec.is<ConstantChildren>() && !spec.is<RegularSubtree>())
    throw SpecError("cumulative_multiplicity: constant or hat family required, got " + spec.label());
  if (m < 2) throw SpecError("cumulative_multiplicity: m must be >= 2");
  const int top = spec.is<RegularSubtree>() ? depth + 1 : depth + 2;
  std::int64_t total = 0;
  for (int s = m; s <= top; s += m) total += exact_multiplicity(s, depth, spec);
  return total;
}

namespace detail {

inline int branching_b(const BranchingSpec& spec) {
  return spec.is<RegularSubtree>() ? spec.k() - 1 : spec.k();
}

inline std::vector<double> hat_closing_roots(int k, int depth) {
  const auto fam = make_family(hat_family(k), depth + 1);
  const auto& q = make_root_poly(fam, depth + 1);
  return q.degree() > 0 ? sturm_roots(q).roots : std::vector<double>{};
}

}  // namespace detail

// Multiplicity of lambda in the adjacency spectrum of a constant or hat tree,
// from first appearance and divisibility, plus the hat tree's closing
// polynomial when lambda is also one of its roots. 0 if lambda is not an
// eigenvalue.
inline std::int64_t eigenvalue_multiplicity(const BranchingSpec& spec, int depth, double lambda, double tol = 1e-9) {
  if (!spec.is<ConstantChildren>() && !spec.is<RegularSubtree>())
    throw SpecError("eigenvalue_multiplicity: constant or hat family required, got " + spec.label());
  spec.validate(depth);
  const int b = detail::branching_b(spec);
  const int top = spec.is<RegularSubtree>() ? depth + 1 : depth + 2;
  std::int64_t total = 0;
  for (int m = 2; m <= top; ++m) {
    bool hit = false;
    for (double r : closed_form_roots(b, m))
      if (std::abs(r - lambda) <= tol) hit = true;
    if (hit) {
      total = cumulative_multiplicity(m, depth, spec);
      break;
    }
  }
  if (spec.is<RegularSubtree>())
    for (double r : detail::hat_closing_roots(spec.k(), depth))
      if (std::abs(r - lambda) <= tol) ++total;
  return total;
}

// ---------------------------------------------------------------------------
// Depth reduction.

struct TridiagonalBlock {
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::int64_t multiplicity = 1;
  int index = 0;  // polynomial index s; depth+2 for the block through the root

  [[nodiscard]] std::size_t size() const { return diag.size(); }
};

// Eigenvalues of a symmetric tridiagonal matrix by Sturm-count bisection,
// ascending. Independent of the QL iteration used by the oracle.
inline std::vector<double> bisection_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (e.size() + 1 != n) throw SpecError("bisection_eigenvalues: offdiag must have n-1 entries");
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0;
    if (i > 0) rad += std::abs(e[i - 1]);
    if (i + 1 < n) rad += std::abs(e[i]);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  lo -= pad;
  hi += pad;
  // number of eigenvalues strictly below x
  auto count_below = [&](double x) {
    std::size_t c = 0;
    double q = d[0] - x;
    for (std::size_t i = 0;; ++i) {
      if (q == 0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1);
      if (q < 0) ++c;
      if (i + 1 == n) break;
      q = d[i + 1] - x - e[i] * e[i] / q;
    }
    return c;
  };
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_below(mid) > j)
        b = mid;
      else
        a = mid;
    }
    out[j] = 0.5 * (a + b);
  }
  return out;
}

inline std::vector<double> block_eigenvalues(const TridiagonalBlock& b) { return bisection_eigenvalues(b.diag, b.offdiag); }

namespace detail {

inline TridiagonalBlock level_block(const LevelModel& m, int top, OperatorKind op) {
  TridiagonalBlock b;
  const int r = m.depth;
  auto deg = [&](int g) { return static_cast<double>(m.degree(g)); };
  for (int g = top; g <= r; ++g) {
    b.diag.push_back(op == OperatorKind::Laplacian ? deg(g) : 0.0);
    if (g < r) {
      const double c = m.children[static_cast<std::size_t>(g)];
      double w = std::sqrt(c);
      if (op == OperatorKind::Laplacian) w = -w;
      if (op == OperatorKind::RandomWalk) w = std::sqrt(c / (deg(g) * deg(g + 1)));
      b.offdiag.push_back(w);
    }
  }
  return b;
}

}  // namespace detail

// One tridiagonal block per anchor depth plus the block through the root.
// The s-block acts on depth-indexed functions of a subtree of height s-2
// whose root has a parent; its multiplicity is exact_multiplicity(s).
inline std::vector<TridiagonalBlock> depth_reduce(const BranchingSpec& spec, int depth, OperatorKind op) {
  spec.validate(depth);
  if (!spec.is_tree() || spec.is<Fan>())
    throw SpecError("depth_reduce: rooted tree family required, got " + spec.label());
  const LevelModel m = level_model(spec, depth);
  std::vector<TridiagonalBlock> out;
  for (int s = 2; s <= depth + 1; ++s) {
    const int a = depth + 1 - s;
    TridiagonalBlock b = detail::level_block(m, a + 1, op);
    b.index = s;
    b.multiplicity = static_cast<std::int64_t>(
        detail::checked_mul(m.level_size[static_cast<std::size_t>(a)],
                            static_cast<std::uint64_t>(m.children[static_cast<std::size_t>(a)] - 1)));
    out.push_back(std::move(b));
  }
  TridiagonalBlock root = detail::level_block(m, 0, op);
  root.index = depth + 2;
  root.multiplicity = 1;
  out.push_back(std::move(root));
  return out;
}

// ---------------------------------------------------------------------------
// Assembly.

namespace detail {

struct Contribution {
  double value;
  std::int64_t mult;
  std::string label;
  int index;
};

inline std::vector<SpectrumEntry> merge_contributions(std::vector<Contribution> cs, double tol) {
  std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<SpectrumEntry> out;
  std::size_t i = 0;
  while (i < cs.size()) {
    std::size_t j = i + 1;
    while (j < cs.size() && cs[j].value - cs[j - 1].value <= tol) ++j;
    SpectrumEntry e;
    std::size_t best = i;
    for (std::size_t t = i; t < j; ++t) {
      e.multiplicity += cs[t].mult;
      if (cs[t].index < cs[best].index) best = t;
    }
    e.value = cs[best].value;
    e.source = {cs[best].label, cs[best].index, cs[best].index};
    out.push_back(std::move(e));
    i = j;
  }
  for (std::size_t t = 1; t < out.size(); ++t)
    if (out[t].value - out[t - 1].value <= 10 * tol)
      throw ConsistencyError("assemble_spectrum: eigenvalues " + std::to_string(out[t - 1].value) + " and " +
                             std::to_string(out[t].value) + " too close to separate");
  return out;
}

inline double merge_tolerance(const std::vector<Contribution>& cs) {
  double scale = 1;
  for (const auto& c : cs) scale = std::max(scale, std::abs(c.value));
  return 1e-9 * scale;
}

inline void finish_report(SpectrumReport& rep, std::vector<Contribution> cs, std::uint64_t n_nodes) {
  const double tol = merge_tolerance(cs);
  rep.entries = merge_contributions(std::move(cs), tol);
  rep.total_dim = 0;
  for (const auto& e : rep.entries) rep.total_dim += e.multiplicity;
  if (static_cast<std::uint64_t>(rep.total_dim) != n_nodes)
    throw ConsistencyError("assemble_spectrum: multiplicities sum to " + std::to_string(rep.total_dim) +
                           " but the graph has " + std::to_string(n_nodes) + " nodes");
}

inline std::vector<double> poly_roots(const Polynomial& p) {
  return p.degree() > 0 ? sturm_roots(p).roots : std::vector<double>{};
}

// Adjacency spectrum of a rooted tree family from its polynomials.
inline SpectrumReport assemble_tree_adjacency(const BranchingSpec& spec, int depth) {
  const LevelModel m = level_model(spec, depth);
  SpectrumReport rep{spec, depth, OperatorKind::Adjacency, 0, {}};
  std::vector<Contribution> cs;
  auto add = [&](const std::vector<double>& roots, std::int64_t mult, const std::string& label, int index) {
    for (double r : roots) cs.push_back({r, mult, label, index});
  };
  const auto blocks_mult = [&](int s) { return exact_multiplicity(s, depth, spec); };

  if (spec.is<ConstantChildren>() || spec.is<RegularSubtree>()) {
    const bool hat = spec.is<RegularSubtree>();
    const int b = branching_b(spec);
    const auto fam = make_family(hat ? hat_family(spec.k()) : constant_family(b), depth + 2);
    for (int s = 2; s <= depth + 1; ++s) add(member_roots(fam, s), blocks_mult(s), fam.config.label, s);
    if (hat)
      add(poly_roots(make_root_poly(fam, depth + 1)), 1, "Q^(" + std::to_string(spec.k()) + ")", depth + 1);
    else
      add(member_roots(fam, depth + 2), 1, fam.config.label, depth + 2);
  } else if (spec.is<Periodic>()) {
    const auto& alphas = spec.as<Periodic>().alphas;
    const auto cfg = periodic_recurrence_coeffs(alphas);
    const auto fam = make_family(cfg, depth + 2);
    for (int s = 2; s <= depth + 2; ++s)
      add(poly_roots(fam.member(s)), s == depth + 2 ? 1 : blocks_mult(s), cfg.label, s);
  } else {
    const auto polys = level_polynomials(m);
    std::string label = "P^[" + spec.label() + ",r=" + std::to_string(depth) + "]";
    for (int s = 2; s <= depth + 2; ++s)
      add(poly_roots(polys[static_cast<std::size_t>(s)]), s == depth + 2 ? 1 : blocks_mult(s), label, s);
  }
  finish_report(rep, std::move(cs), m.n_nodes());
  return rep;
}

inline SpectrumReport assemble_from_blocks(const BranchingSpec& spec, int depth, OperatorKind op) {
  const LevelModel m = level_model(spec, depth);
  SpectrumReport rep{spec, depth, op, 0, {}};
  const std::string label = (spec.is<ConstantChildren>() || spec.is<RegularSubtree>())
                                ? derived_family(spec, op).label
                                : to_string(op) + "[" + spec.label() + "]";
  std::vector<Contribution> cs;
  for (const auto& b : depth_reduce(spec, depth, op))
    for (double v : block_eigenvalues(b)) cs.push_back({v, b.multiplicity, label, b.index});
  finish_report(rep, std::move(cs), m.n_nodes());
  return rep;
}

}  // namespace detail

// Roots of the fan's closing polynomial G_{depth+1}.
inline std::vector<double> fan_closing_roots(int k, int d, int depth) {
  const auto fam = make_family(fan_family(k, d), depth + 1);
  return detail::poly_roots(make_root_poly(fam, depth + 1));
}

// Dense spectrum of the fan graph. Clusters within 1e-8 of a root of the
// closing polynomial are attributed to it; the rest carry no closed form.
inline SpectrumReport assemble_fan_spectrum(int k, int d, int depth, double cluster_tol = 1e-6) {
  const auto spec = BranchingSpec::fan(k, d);
  spec.validate(depth);
  const TreeGraph g = build_fan_graph(k, d, depth);
  const auto clusters = cluster_multiset(sym_eigenvalues(dense_operator(g, OperatorKind::Adjacency)), cluster_tol);
  const auto groots = fan_closing_roots(k, d, depth);
  const std::string glabel = "G^(" + std::to_string(k) + "," + std::to_string(d) + ")";
  SpectrumReport rep{spec, depth, OperatorKind::Adjacency, 0, {}};
  for (const auto& c : clusters) {
    SpectrumEntry e{c.value, c.multiplicity, {"oracle", 0, 0}};
    for (double r : groots)
      if (std::abs(r - c.value) <= 1e-8) e.source = {glabel, depth + 1, depth + 1};
    rep.entries.push_back(e);
    rep.total_dim += c.multiplicity;
  }
  return rep;
}

// Eigenvalues with exact multiplicities. Adjacency spectra of tree families
// come from polynomial roots; Laplacian and random-walk spectra of constant
// and hat trees from depth_reduce; fans with d > 2 from the dense solver,
// annotated with the roots of their closing polynomial.
inline SpectrumReport assemble_spectrum(const BranchingSpec& spec, int depth, OperatorKind op = OperatorKind::Adjacency) {
  spec.validate(depth);
  if (spec.is<Fan>()) {
    if (op != OperatorKind::Adjacency) throw SpecError("fans support the adjacency operator only");
    const auto& f = spec.as<Fan>();
    if (f.d == 2) {
      auto rep = detail::assemble_tree_adjacency(BranchingSpec::constant(f.k), depth);
      rep.spec = spec;
      return rep;
    }
    return assemble_fan_spectrum(f.k, f.d, depth);
  }
  if (op == OperatorKind::Adjacency) return detail::assemble_tree_adjacency(spec, depth);
  if (!spec.is<ConstantChildren>() && !spec.is<RegularSubtree>())
    throw SpecError(to_string(op) + " spectra are supported for constant and hat trees only, got " + spec.label());
  if (op == OperatorKind::RandomWalk && depth == 0)
    throw SpecError("random walk undefined on a single isolated node");
  return detail::assemble_from_blocks(spec, depth, op);
}

// Fraction of the spectrum carried by the value lambda.
inline double value_proportion(const SpectrumReport& rep, double lambda, double tol = 1e-9) {
  std::int64_t m = 0;
  for (const auto& e : rep.entries)
    if (std::abs(e.value - lambda) <= tol) m += e.multiplicity;
  return static_cast<double>(m) / static_cast<double>(rep.total_dim);
}

// ---------------------------------------------------------------------------
// Zero eigenvalues of increasing-branching trees.

struct ZeroProportion {
  std::uint64_t bound_numerator = 0;  // leaves minus their parents
  std::uint64_t node_count = 0;
  std::optional<std::uint64_t> nullity;

  [[nodiscard]] double bound() const {
    return static_cast<double>(bound_numerator) / static_cast<double>(node_count);
  }
  [[nodiscard]] std::optional<double> proportion() const {
    if (!nullity) return std::nullopt;
    return static_cast<double>(*nullity) / static_cast<double>(node_count);
  }
};

// Lower bound (alpha_r - 1) prod_{j<r} alpha_j / |T| on the proportion of
// zero eigenvalues, and the exact nullity when the tree is small enough to
// build (up to max_nodes).
inline ZeroProportion zero_proportion(const BranchingSpec& spec, int depth, std::uint64_t max_nodes = 2'000'000) {
  if (!spec.is<Sequence>()) throw SpecError("zero_proportion: Sequence spec required, got " + spec.label());
  spec.validate(depth);
  const LevelModel m = level_model(spec, depth);
  ZeroProportion z;
  z.node_count = m.n_nodes();
  if (depth >= 1)
    z.bound_numerator = m.level_size[static_cast<std::size_t>(depth)] - m.level_size[static_cast<std::size_t>(depth - 1)];
  if (z.node_count <= max_nodes) z.nullity = tree_nullity(build_tree(spec, depth));
  return z;
}

}  // namespace bethe
