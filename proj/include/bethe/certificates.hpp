#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/polyfam.hpp"
#include "bethe/spectra.hpp"
#include "bethe/treegen.hpp"

namespace bethe {

enum class Construction { Isotropic, Typed, Fan };

inline std::string to_string(Construction c) {
  switch (c) {
    case Construction::Isotropic: return "isotropic";
    case Construction::Typed: return "typed";
    case Construction::Fan: return "fan";
  }
  return "?";
}

// An eigenvector stored on its support, sorted by node.
struct EigvecCertificate {
  std::vector<std::pair<NodeId, double>> entries;
  double lambda = 0;
  double residual_inf = 0;
  Construction construction = Construction::Isotropic;
  int s = 0;                  // polynomial index of a typed vector
  NodeId anchor = kNoGroup;   // anchor node of a typed vector

  [[nodiscard]] std::vector<double> dense(std::size_t n) const {
    std::vector<double> v(n, 0.0);
    for (const auto& [u, x] : entries) v[u] = x;
    return v;
  }
  [[nodiscard]] double max_abs() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.second));
    return m;
  }
};

inline constexpr double kCertificateTol = 1e-9;

// max |(Op v - lambda v)_u| / max |v| for a sparse v, touching only the
// support and its neighbourhood.
inline double sparse_residual(const TreeGraph& g, const std::vector<std::pair<NodeId, double>>& v, double lambda,
                              OperatorKind op, NodeId* worst = nullptr) {
  double vmax = 0;
  for (const auto& e : v) vmax = std::max(vmax, std::abs(e.second));
  if (vmax == 0) throw SpecError("verify_eigenpair: zero vector");
  std::map<NodeId, double> val(v.begin(), v.end());
  std::map<NodeId, double> out;
  for (const auto& [u, x] : v) {
    out[u] += 0.0;
    for (NodeId w : g.neighbors(u)) out[w] += 0.0;
  }
  double res = 0;
  for (auto& [u, acc] : out) {
    const auto it = val.find(u);
    const double xu = it == val.end() ? 0.0 : it->second;
    double a = 0;
    for (NodeId w : g.neighbors(u)) {
      const auto jt = val.find(w);
      if (jt == val.end()) continue;
      double c = jt->second;
      if (op == OperatorKind::RandomWalk)
        c /= std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(w)));
      a += c;
    }
    if (op == OperatorKind::Laplacian) a = static_cast<double>(g.degree(u)) * xu - a;
    const double r = std::abs(a - lambda * xu);
    if (r > res) {
      res = r;
      if (worst) *worst = u;
    }
  }
  return res / vmax;
}

// Relative max-norm residual of (Op v - lambda v). Random-walk vectors are
// in the coordinates of the symmetrized matrix D^-1/2 A D^-1/2.
inline double verify_eigenpair(const TreeGraph& g, const std::vector<double>& values, double lambda,
                               OperatorKind op = OperatorKind::Adjacency) {
  if (values.size() != g.n_nodes()) throw SpecError("verify_eigenpair: vector length differs from node count");
  std::vector<std::pair<NodeId, double>> sparse;
  for (NodeId u = 0; u < values.size(); ++u)
    if (values[u] != 0) sparse.emplace_back(u, values[u]);
  if (sparse.empty()) throw SpecError("verify_eigenpair: zero vector");
  if (op == OperatorKind::RandomWalk)
    for (NodeId u = 0; u < g.n_nodes(); ++u)
      if (g.degree(u) == 0) throw SpecError("random walk undefined on isolated nodes");
  return sparse_residual(g, sparse, lambda, op);
}

namespace detail {

inline void seal(const TreeGraph& g, EigvecCertificate& c, OperatorKind op) {
  if (op == OperatorKind::RandomWalk)
    for (auto& [u, x] : c.entries) x *= std::sqrt(static_cast<double>(g.degree(u)));
  std::erase_if(c.entries, [](const auto& e) { return e.second == 0.0; });
  if (c.entries.empty()) throw ConsistencyError("certificate vanishes identically at lambda=" + std::to_string(c.lambda));
  NodeId worst = 0;
  c.residual_inf = sparse_residual(g, c.entries, c.lambda, op, &worst);
  if (!(c.residual_inf <= kCertificateTol))
    throw ConsistencyError(to_string(c.construction) + " certificate at lambda=" + std::to_string(c.lambda) +
                           " has residual " + std::to_string(c.residual_inf) + " at node " + std::to_string(worst));
}

// Values of the bottom-up polynomials at lambda for the tree's family:
// out[j] = P_j(lambda), j = 0..depth+2.
inline std::vector<double> family_values(const PolyFamily& family, double lambda, int depth) {
  if (family.n_max() < depth + 1) throw SpecError("family has too few members for depth " + std::to_string(depth));
  return eval_members(family.config, lambda, depth + 2);
}

}  // namespace detail

// The vector constant on each depth level with value P_{r-m+1}(lambda) at
// depth m. lambda must be a root of the tree's closing polynomial. Works for
// fans as well, where the family is F and the closing polynomial G.
inline EigvecCertificate isotropic_eigenvector(const TreeGraph& g, double lambda, const PolyFamily& family) {
  const int r = g.depth();
  const auto p = detail::family_values(family, lambda, r);
  EigvecCertificate c;
  c.lambda = lambda;
  c.construction = g.has_sibling_groups() ? Construction::Fan : Construction::Isotropic;
  c.s = r + 2;
  c.entries.reserve(g.n_nodes());
  for (NodeId u = 0; u < g.n_nodes(); ++u) c.entries.emplace_back(u, p[static_cast<std::size_t>(r - g.depth_of(u) + 1)]);
  detail::seal(g, c, family.config.op);
  return c;
}

// Vectors of type (lambda, s): for each anchor at depth r+1-s and each
// consecutive pair of its children, +P_{s-m}(lambda) on the first child's
// subtree and -P_{s-m}(lambda) on the second's, m the distance below the
// anchor. lambda must be a root of P_s.
inline std::vector<EigvecCertificate> typed_eigenbasis(const TreeGraph& g, double lambda, int s, const PolyFamily& family) {
  const int r = g.depth();
  if (g.has_sibling_groups()) throw SpecError("typed_eigenbasis: rooted tree required");
  if (s < 2 || s > r + 1)
    throw SpecError("typed_eigenbasis: s=" + std::to_string(s) + " outside 2.." + std::to_string(r + 1));
  const auto p = detail::family_values(family, lambda, r);
  const int a = r + 1 - s;
  std::vector<EigvecCertificate> out;
  const auto [lo, hi] = g.level(a);
  for (NodeId anchor = lo; anchor < hi; ++anchor) {
    const auto [cb, ce] = g.children(anchor);
    for (NodeId i = cb; i + 1 < ce; ++i) {
      EigvecCertificate c;
      c.lambda = lambda;
      c.construction = Construction::Typed;
      c.s = s;
      c.anchor = anchor;
      // descendants of a child form one contiguous range per level
      for (auto [child, sign] : {std::pair<NodeId, double>{i, 1.0}, {i + 1, -1.0}}) {
        NodeId first = child, last = child + 1;
        for (int m = 1; m <= r - a; ++m) {
          const double val = sign * p[static_cast<std::size_t>(s - m)];
          for (NodeId u = first; u < last; ++u) c.entries.emplace_back(u, val);
          if (m < r - a) {
            first = g.children(first).first;
            last = g.children(last - 1).second;
          }
        }
      }
      std::sort(c.entries.begin(), c.entries.end());
      detail::seal(g, c, family.config.op);
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Number of linearly independent vectors among the certificates. Vectors
// for eigenvalues more than tol apart are orthogonal; within one eigenvalue
// the Gram matrix is sparse, so the rank is taken per connected component.
inline std::size_t independent_count(const std::vector<EigvecCertificate>& certs, double tol = 1e-7) {
  std::vector<std::size_t> order(certs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return certs[x].lambda < certs[y].lambda; });
  std::size_t rank = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && certs[order[j]].lambda - certs[order[j - 1]].lambda <= tol) ++j;
    const std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(i),
                                         order.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
    // normalized inner products through the nodes each vector touches
    const std::size_t m = group.size();
    std::vector<double> norm(m, 0.0);
    std::map<NodeId, std::vector<std::pair<std::size_t, double>>> at;
    for (std::size_t t = 0; t < m; ++t) {
      for (const auto& [u, x] : certs[group[t]].entries) {
        at[u].emplace_back(t, x);
        norm[t] += x * x;
      }
      norm[t] = std::sqrt(norm[t]);
    }
    std::map<std::pair<std::size_t, std::size_t>, double> gram;
    for (const auto& [u, list] : at)
      for (std::size_t x = 0; x < list.size(); ++x)
        for (std::size_t y = x + 1; y < list.size(); ++y) {
          auto key = std::minmax(list[x].first, list[y].first);
          gram[{key.first, key.second}] += list[x].second * list[y].second;
        }
    std::vector<std::size_t> comp(m);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    std::vector<std::pair<std::size_t, std::size_t>> links;
    for (const auto& [key, val] : gram)
      if (std::abs(val) > 1e-9 * norm[key.first] * norm[key.second]) {
        links.push_back(key);
        comp[find(key.first)] = find(key.second);
      }
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t t = 0; t < m; ++t) members[find(t)].push_back(t);
    for (const auto& [root, mem] : members) {
      if (mem.size() == 1) {
        ++rank;
        continue;
      }
      // rank of the normalized Gram block by pivoted elimination
      const std::size_t q = mem.size();
      std::map<std::size_t, std::size_t> pos;
      for (std::size_t t = 0; t < q; ++t) pos[mem[t]] = t;
      std::vector<double> G(q * q, 0.0);
      for (std::size_t t = 0; t < q; ++t) G[t * q + t] = 1.0;
      for (const auto& [x, y] : links)
        if (pos.count(x) && pos.count(y)) {
          const double v = gram.at({x, y}) / (norm[x] * norm[y]);
          G[pos[x] * q + pos[y]] = G[pos[y] * q + pos[x]] = v;
        }
      std::vector<char> used(q, 0);
      for (std::size_t step = 0; step < q; ++step) {
        std::size_t piv = q;
        double best = 1e-9;
        for (std::size_t t = 0; t < q; ++t)
          if (!used[t] && G[t * q + t] > best) best = G[t * q + t], piv = t;
        if (piv == q) break;
        used[piv] = 1;
        ++rank;
        const double d = G[piv * q + piv];
        for (std::size_t x = 0; x < q; ++x) {
          if (used[x]) continue;
          const double f = G[x * q + piv] / d;
          for (std::size_t y = 0; y < q; ++y) G[x * q + y] -= f * G[piv * q + y];
        }
      }
    }
  }
  return rank;
}

struct CertificationSummary {
  std::vector<EigvecCertificate> certificates;
  double max_residual = 0;
  std::size_t independent = 0;
  std::size_t n_nodes = 0;
};

namespace detail {

// Family whose members are the bottom-up polynomials of the tree, used for
// periodic and sequence trees.
inline PolyFamily level_family(const BranchingSpec& spec, int depth) {
  const LevelModel m = level_model(spec, depth);
  FamilyConfig cfg;
  cfg.label = "P^[" + spec.label() + "]";
  cfg.c1 = Polynomial::x();
  cfg.c0 = 0;
  cfg.initial = {Polynomial{}, Polynomial{1}};
  cfg.q_rule = {Polynomial::x(), BigInt(0)};
  cfg.level_coeffs.assign(static_cast<std::size_t>(depth) + 3, 0);
  for (int j = 2; j <= depth + 2; ++j) cfg.level_coeffs[static_cast<std::size_t>(j)] = m.children[static_cast<std::size_t>(depth - j + 2)];
  PolyFamily fam{cfg, level_polynomials(m), {}};
  fam.q_members = fam.members;
  return fam;
}

}  // namespace detail

// Builds every isotropic and typed certificate of a rooted tree for the
// given operator (adjacency for every tree family, Laplacian and random walk
// for constant and hat trees) and counts how many are independent.
inline CertificationSummary certify_tree(const BranchingSpec& spec, int depth, OperatorKind op = OperatorKind::Adjacency) {
  spec.validate(depth);
  if (spec.is<Fan>()) throw SpecError("certify_tree: use certify_fan for fans");
  if (op == OperatorKind::RandomWalk && depth == 0) throw SpecError("random walk undefined on a single isolated node");
  const TreeGraph g = build_tree(spec, depth);
  const auto blocks = depth_reduce(spec, depth, op);
  CertificationSummary sum;
  sum.n_nodes = g.n_nodes();

  // families: typed vectors use P_s, the isotropic vector the tree's closing
  std::optional<PolyFamily> fam;
  if (spec.is<ConstantChildren>() || spec.is<RegularSubtree>()) {
    if (op == OperatorKind::Adjacency) {
      fam = make_family(spec.is<RegularSubtree>() ? constant_family(spec.k() - 1) : constant_family(spec.k()), depth + 2);
    } else {
      // interior recurrence of the derived family; hat and constant differ
      // only at the root, which the isotropic vector reads through P_{r+1}
      fam = make_family(derived_family(spec, op), depth + 2);
    }
  } else {
    if (op != OperatorKind::Adjacency) throw SpecError("certify_tree: " + to_string(op) + " needs a constant or hat tree");
    fam = detail::level_family(spec, depth);
  }

  for (const auto& b : blocks) {
    for (double lambda : block_eigenvalues(b)) {
      if (b.index == depth + 2) {
        sum.certificates.push_back(isotropic_eigenvector(g, lambda, *fam));
      } else {
        auto typed = typed_eigenbasis(g, lambda, b.index, *fam);
        for (auto& c : typed) sum.certificates.push_back(std::move(c));
      }
    }
  }
  for (const auto& c : sum.certificates) sum.max_residual = std::max(sum.max_residual, c.residual_inf);
  sum.independent = independent_count(sum.certificates);
  return sum;
}

// Isotropic fan certificates, one per root of the closing polynomial.
inline CertificationSummary certify_fan(int k, int d, int depth) {
  const TreeGraph g = build_fan_graph(k, d, depth);
  const auto fam = make_family(fan_family(k, d), depth + 2);
  CertificationSummary sum;
  sum.n_nodes = g.n_nodes();
  for (double lambda : fan_closing_roots(k, d, depth)) sum.certificates.push_back(isotropic_eigenvector(g, lambda, fam));
  for (const auto& c : sum.certificates) sum.max_residual = std::max(sum.max_residual, c.residual_inf);
  sum.independent = independent_count(sum.certificates);
  return sum;
}

// ---------------------------------------------------------------------------
// Extension to larger balls of the regular tree.

// Extends an eigenvector of the hat tree of depth n (dense, in BFS order) to
// the ball of depth n + extra_depth: the next ring is 0 and below each old
// leaf the values follow w_{j+1} = (lambda w_j - w_{j-1}) / (k-1), constant
// on each ring of that leaf's subtree. The eigen-relation holds at every
// node above the outermost ring.
inline std::vector<double> extend_to_ball(const std::vector<double>& values, double lambda, const BranchingSpec& spec,
                                          int depth, int extra_depth) {
  if (!spec.is<RegularSubtree>()) throw SpecError("extend_to_ball: RegularSubtree spec required, got " + spec.label());
  if (extra_depth < 1) throw SpecError("extend_to_ball: extra_depth must be >= 1");
  const TreeGraph small = build_tree(spec, depth);
  if (values.size() != small.n_nodes()) throw SpecError("extend_to_ball: vector length differs from node count");
  const double res = verify_eigenpair(small, values, lambda);
  if (!(res <= kCertificateTol))
    throw SpecError("extend_to_ball: input is not an eigenvector (residual " + std::to_string(res) + ")");
  const double kk = spec.k() - 1;
  const TreeGraph big = build_tree(spec, depth + extra_depth);
  std::vector<double> out(big.n_nodes(), 0.0);
  std::copy(values.begin(), values.end(), out.begin());
  const auto [leaf_lo, leaf_hi] = big.level(depth);
  for (NodeId leaf = leaf_lo; leaf < leaf_hi; ++leaf) {
    double prev = values[leaf], cur = 0.0;
    NodeId first = leaf, last = leaf + 1;
    for (int j = 1; j <= extra_depth; ++j) {
      first = big.children(first).first;
      last = big.children(last - 1).second;
      for (NodeId u = first; u < last; ++u) out[u] = cur;
      const double next = (lambda * cur - prev) / kk;
      prev = cur;
      cur = next;
    }
  }
  return out;
}

// Residual of an extended vector over the nodes strictly inside the ball.
inline double interior_residual(const TreeGraph& g, const std::vector<double>& values, double lambda) {
  double vmax = 0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0) throw SpecError("interior_residual: zero vector");
  double res = 0;
  for (NodeId u = 0; u < g.n_nodes(); ++u) {
    if (g.depth_of(u) >= g.depth()) continue;
    double a = 0;
    for (NodeId w : g.neighbors(u)) a += values[w];
    res = std::max(res, std::abs(a - lambda * values[u]));
  }
  return res / vmax;
}

}  // namespace bethe
