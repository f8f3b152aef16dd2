#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/treegen.hpp"

namespace bethe {

// Dense symmetric matrix, row-major, stored in full.
struct DenseSymMatrix {
  std::size_t n = 0;
  std::vector<double> entries;

  explicit DenseSymMatrix(std::size_t size = 0) : n(size), entries(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

  void set_sym(std::size_t i, std::size_t j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  [[nodiscard]] double trace() const {
    double t = 0;
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
  [[nodiscard]] double frobenius_sq() const {
    double s = 0;
    for (double v : entries) s += v * v;
    return s;
  }
};

// Adjacency (0/1), Laplacian D - A, or the symmetrized walk D^-1/2 A D^-1/2.
inline DenseSymMatrix dense_operator(const TreeGraph& g, OperatorKind op) {
  const std::size_t n = g.n_nodes();
  DenseSymMatrix m(n);
  if (op == OperatorKind::RandomWalk)
    for (NodeId u = 0; u < n; ++u)
      if (g.degree(u) == 0) throw SpecError("random walk undefined: node " + std::to_string(u) + " is isolated");
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) {
      double w = 1.0;
      if (op == OperatorKind::Laplacian) w = -1.0;
      if (op == OperatorKind::RandomWalk)
        w = 1.0 / std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v)));
      m(u, v) = w;
    }
    if (op == OperatorKind::Laplacian) m(u, u) = static_cast<double>(g.degree(u));
  }
  return m;
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1
};

// Householder reduction to tridiagonal form. Works on the lower triangle of
// a copy; each sweep applies the previous rank-2 update and accumulates the
// next matrix-vector product in a single pass over the trailing block.
inline Tridiagonal householder_tridiagonalize(const DenseSymMatrix& m) {
  const std::size_t n = m.n;
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
  if (n == 0) return t;
  std::vector<double> a(m.entries);
  auto row = [&](std::size_t j) { return a.data() + j * n; };

  std::vector<double> v(n, 0.0), p(n, 0.0), pv(n, 0.0), pw(n, 0.0);
  bool pending = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (pending)
      for (std::size_t j = i; j < n; ++j) row(j)[i] -= pv[j] * pw[i] + pw[j] * pv[i];
    t.diag[i] = row(i)[i];

    double s = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      v[j] = row(j)[i];
      s += v[j] * v[j];
    }
    const double x0 = v[i + 1];
    const double tail = s - x0 * x0;
    if (i + 2 >= n || tail <= std::numeric_limits<double>::min()) {
      // nothing below the subdiagonal; flush the pending update
      t.offdiag[i] = x0;
      if (pending)
        for (std::size_t j = i + 1; j < n; ++j) {
          double* r = row(j);
          const double vj = pv[j], wj = pw[j];
          for (std::size_t l = i + 1; l <= j; ++l) r[l] -= vj * pw[l] + wj * pv[l];
        }
      pending = false;
      continue;
    }
    const double nrm = std::sqrt(s);
    const double alpha = x0 > 0 ? -nrm : nrm;
    v[i + 1] = x0 - alpha;
    t.offdiag[i] = alpha;
    const double vv = tail + v[i + 1] * v[i + 1];
    const double tau = 2.0 / vv;

    std::fill(p.begin() + static_cast<std::ptrdiff_t>(i) + 1, p.end(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      double* r = row(j);
      const double vj = v[j];
      double acc = 0;
      if (pending) {
        const double pvj = pv[j], pwj = pw[j];
#pragma omp simd reduction(+ : acc)
        for (std::size_t l = i + 1; l < j; ++l) {
          const double x = r[l] - (pvj * pw[l] + pwj * pv[l]);
          r[l] = x;
          acc += x * v[l];
          p[l] += x * vj;
        }
        r[j] -= 2.0 * pvj * pwj;
      } else {
#pragma omp simd reduction(+ : acc)
        for (std::size_t l = i + 1; l < j; ++l) {
          const double x = r[l];
          acc += x * v[l];
          p[l] += x * vj;
        }
      }
      p[j] += acc + r[j] * vj;
    }
    double kfac = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      p[j] *= tau;
      kfac += p[j] * v[j];
    }
    kfac *= tau / 2;
    for (std::size_t j = i + 1; j < n; ++j) {
      pw[j] = p[j] - kfac * v[j];
      pv[j] = v[j];
    }
    pending = true;
  }
  t.diag[n - 1] = row(n - 1)[n - 1] - (pending ? 2.0 * pv[n - 1] * pw[n - 1] : 0.0);
  return t;
}

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// iteration (Wilkinson shift), ascending.
inline std::vector<double> tridiagonal_ql_eigenvalues(Tridiagonal t) {
  auto& d = t.diag;
  const std::size_t n = d.size();
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.offdiag[i];
  // absolute floor for deflation; a purely relative test never fires
  // between two diagonal entries that are both zero
  double anorm = 0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]) + (i ? std::abs(e[i - 1]) : 0.0));
  const double floor_tol = std::numeric_limits<double>::epsilon() * anorm;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd || std::abs(e[m]) <= floor_tol) break;
      }
      if (m != l) {
        if (++iter > 60) throw ConsistencyError("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<double> sym_eigenvalues(const DenseSymMatrix& m) {
  if (m.n == 0) throw SpecError("sym_eigenvalues: empty matrix");
  return tridiagonal_ql_eigenvalues(householder_tridiagonalize(m));
}

struct Cluster {
  double value = 0;
  int multiplicity = 0;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Greedy clustering of a sorted list: consecutive values within tol merge.
// Adjacent cluster means closer than 10 tol make the clustering ambiguous.
inline std::vector<Cluster> cluster_multiset(const std::vector<double>& sorted, double tol = 1e-6) {
  std::vector<Cluster> out;
  double sum = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] < sorted[i - 1]) throw SpecError("cluster_multiset: input not sorted");
    if (i > 0 && sorted[i] - sorted[i - 1] <= tol) {
      sum += sorted[i];
      ++out.back().multiplicity;
      out.back().value = sum / out.back().multiplicity;
    } else {
      sum = sorted[i];
      out.push_back({sorted[i], 1});
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].value - out[i - 1].value <= 10 * tol)
      throw ConsistencyError("cluster_multiset: ambiguous clustering near " + std::to_string(out[i].value));
  return out;
}

struct MultMismatch {
  double value = 0;
  int mult_a = 0;
  int mult_b = 0;
};

struct SpectrumComparison {
  bool matched = false;
  double worst_value_gap = 0;
  std::vector<MultMismatch> mult_mismatches;
};

// Pairs clusters in value order; unpaired clusters are reported with the
// other side's multiplicity 0.
inline SpectrumComparison compare_spectra(const std::vector<Cluster>& a, const std::vector<Cluster>& b, double tol) {
  SpectrumComparison r;
  std::size_t i = 0, j = 0;
  bool all_paired = true;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && std::abs(a[i].value - b[j].value) <= tol) {
      r.worst_value_gap = std::max(r.worst_value_gap, std::abs(a[i].value - b[j].value));
      if (a[i].multiplicity != b[j].multiplicity)
        r.mult_mismatches.push_back({a[i].value, a[i].multiplicity, b[j].multiplicity});
      ++i;
      ++j;
    } else if (j >= b.size() || (i < a.size() && a[i].value < b[j].value)) {
      r.mult_mismatches.push_back({a[i].value, a[i].multiplicity, 0});
      all_paired = false;
      ++i;
    } else {
      r.mult_mismatches.push_back({b[j].value, 0, b[j].multiplicity});
      all_paired = false;
      ++j;
    }
  }
  r.matched = all_paired && a.size() == b.size() && r.mult_mismatches.empty();
  return r;
}

// Number of eigenvalues within tol of lambda. An eigenvalue just outside the
// window (within a further 2 tol) makes the count ambiguous.
inline int eigenspace_dim(const std::vector<double>& eigenvalues, double lambda, double tol = 1e-6) {
  int count = 0;
  for (double e : eigenvalues) {
    const double d = std::abs(e - lambda);
    if (d <= tol)
      ++count;
    else if (d <= 3 * tol)
      throw ConsistencyError("eigenspace_dim: eigenvalue " + std::to_string(e) + " is ambiguously close to " +
                             std::to_string(lambda));
  }
  return count;
}

inline int eigenspace_dim(const DenseSymMatrix& m, double lambda, double tol = 1e-6) {
  return eigenspace_dim(sym_eigenvalues(m), lambda, tol);
}

// Nullity of a tree's adjacency matrix, n - 2 * (maximum matching), with the
// matching found greedily from the leaves. Sparse, so it reaches trees far
// beyond dense-solver size.
inline std::size_t tree_nullity(const TreeGraph& g) {
  const std::size_t n = g.n_nodes();
  if (g.edge_count() + 1 != n) throw SpecError("tree_nullity: graph is not a tree");
  std::vector<char> matched(n, 0);
  std::size_t matching = 0;
  // deepest nodes first: a leaf-most unmatched node matches its parent
  for (std::size_t u = n; u-- > 1;) {
    const NodeId p = g.parent(u);
    if (!matched[u] && !matched[p]) {
      matched[u] = matched[p] = 1;
      ++matching;
    }
  }
  return n - 2 * matching;
}

}  // namespace bethe
