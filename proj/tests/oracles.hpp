#pragma once

// Reference computations for the tests. Nothing here calls into the library
// code it is used to check.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace oracles {

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi rotations until the off-diagonal mass vanishes.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i][i];
  std::sort(out.begin(), out.end());
  return out;
}

// Rooted tree as a parent list, built depth-first from a per-generation
// child count. parent[0] = -1.
inline std::vector<int> tree_parents(const std::function<int(int)>& children_at, int depth) {
  std::vector<int> parent{-1};
  std::function<void(int, int)> grow = [&](int node, int g) {
    if (g == depth) return;
    for (int c = 0; c < children_at(g); ++c) {
      parent.push_back(node);
      grow(static_cast<int>(parent.size()) - 1, g + 1);
    }
  };
  grow(0, 0);
  return parent;
}

inline Matrix adjacency_from_parents(const std::vector<int>& parent) {
  const std::size_t n = parent.size();
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t v = 1; v < n; ++v) a[v][static_cast<std::size_t>(parent[v])] = a[static_cast<std::size_t>(parent[v])][v] = 1;
  return a;
}

inline Matrix laplacian_of(const Matrix& a) {
  Matrix l = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = 0;
    for (double x : a[i]) d += x;
    for (auto& x : l[i]) x = -x;
    l[i][i] = d;
  }
  return l;
}

inline Matrix walk_of(const Matrix& a) {
  Matrix w = a;
  std::vector<double> d(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double x : a[i]) d[i] += x;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) w[i][j] = a[i][j] / std::sqrt(d[i] * d[j]);
  return w;
}

// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t integer_rank(std::vector<std::vector<boost::multiprecision::cpp_int>> m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  boost::multiprecision::cpp_int prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) m[r][j] = (m[rank][c] * m[r][j] - m[r][c] * m[rank][j]) / prev;
      m[r][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}

inline std::size_t exact_nullity(const Matrix& a) {
  std::vector<std::vector<boost::multiprecision::cpp_int>> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double x : a[i]) m[i].emplace_back(static_cast<long long>(std::llround(x)));
  return a.size() - integer_rank(std::move(m));
}

// Sum over i-subsets of Z/l with no two cyclically adjacent, by bitmask.
inline long long sigma_bruteforce(const std::vector<int>& alphas, int i) {
  const int l = static_cast<int>(alphas.size());
  long long total = 0;
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    if (std::popcount(mask) != i) continue;
    bool ok = true;
    for (int j = 0; j < l && ok; ++j)
      if ((mask >> j & 1u) && (mask >> ((j + 1) % l) & 1u)) ok = false;
    if (!ok) continue;
    long long p = 1;
    for (int j = 0; j < l; ++j)
      if (mask >> j & 1u) p *= alphas[static_cast<std::size_t>(j)];
    total += p;
  }
  return total;
}

inline int phi_by_gcd(int n) {
  int c = 0;
  for (int j = 1; j <= n; ++j)
    if (std::gcd(j, n) == 1) ++c;
  return c;
}

// Values of x^n-type three-term recurrences in long double, unrolled directly.
inline std::vector<long double> unroll(long double x, long double b, int n_max) {
  std::vector<long double> p{0.0L, 1.0L};
  for (int n = 2; n <= n_max; ++n) p.push_back(x * p[static_cast<std::size_t>(n - 1)] - b * p[static_cast<std::size_t>(n - 2)]);
  return p;
}

// Clusters a sorted list: (value, count) with neighbours closer than tol merged.
inline std::vector<std::pair<double, int>> group(const std::vector<double>& v, double tol) {
  std::vector<std::pair<double, int>> out;
  for (double x : v) {
    if (!out.empty() && x - out.back().first <= tol)
      ++out.back().second;
    else
      out.emplace_back(x, 1);
  }
  return out;
}

}  // namespace oracles
