#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/measure.hpp"
#include "bethe/oracle.hpp"
#include "bethe/polyfam.hpp"
#include "bethe/spectra.hpp"
#include "bethe/treegen.hpp"

namespace bethe {

struct DiscrepancyItem {
  std::string topic;
  std::string instance;
  std::string stated;
  std::string observed;
  bool consistent = true;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string join_values(const std::vector<double>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + "}";
}

// Distinct roots of P_2..P_{r+1} and of the closing polynomial Q_{r+1}.
inline std::vector<double> family_value_set(const FamilyConfig& cfg, int depth) {
  const auto fam = make_family(cfg, depth + 2);
  std::vector<double> vals;
  for (int s = 2; s <= depth + 1; ++s)
    for (double v : poly_roots(fam.member(s))) vals.push_back(v);
  for (double v : poly_roots(make_root_poly(fam, depth + 1))) vals.push_back(v);
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals)
    if (out.empty() || v - out.back() > 1e-8) out.push_back(v);
  return out;
}

inline std::vector<double> oracle_value_set(const BranchingSpec& spec, int depth, OperatorKind op) {
  std::vector<double> out;
  for (const auto& c : cluster_multiset(sym_eigenvalues(dense_operator(build_tree(spec, depth), op)))) out.push_back(c.value);
  return out;
}

inline bool same_sets(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-8) return false;
  return true;
}

}  // namespace detail

// Closed form for the total multiplicity of a value first seen at index m on
// the depth-n constant tree, exactly as published. Compared against the
// summed multiplicities in the report; never used for computation.
inline double published_multiplicity_closed_form(int k, int m, int n) {
  const double kd = k;
  const int L = (n + 1) / m;
  const double delta = (n % m == 1 % m) ? 1.0 : 0.0;
  return (kd - 1) * std::pow(kd, m + n + 1) / (std::pow(kd, m) - 1) * (1 - std::pow(kd, -m * L)) + delta;
}

// Runs every comparison between published statements and the computed or
// oracle values. Items with consistent == false are the flagged ones.
inline std::vector<DiscrepancyItem> discrepancy_report() {
  std::vector<DiscrepancyItem> out;

  // Laplacian family as published, checked on constant and hat trees.
  for (int k : {2, 3, 4})
    for (int r : {1, 2, 3}) {
      const auto stated = detail::family_value_set(laplacian_family_stated(k), r);
      const auto on_const = detail::oracle_value_set(BranchingSpec::constant(k), r, OperatorKind::Laplacian);
      out.push_back({"laplacian-family", "constant k=" + std::to_string(k) + " r=" + std::to_string(r),
                     detail::join_values(stated), detail::join_values(on_const), detail::same_sets(stated, on_const)});
      if (k >= 3) {
        const auto on_hat = detail::oracle_value_set(BranchingSpec::hat(k), r, OperatorKind::Laplacian);
        out.push_back({"laplacian-family", "hat k=" + std::to_string(k) + " r=" + std::to_string(r),
                       detail::join_values(stated), detail::join_values(on_hat), detail::same_sets(stated, on_hat)});
      }
    }

  // Random-walk family as published; r = 1 is the star.
  for (int k : {2, 3})
    for (int r : {1, 2, 3}) {
      const auto stated = detail::family_value_set(walk_family_stated(k), r);
      const auto oracle = detail::oracle_value_set(BranchingSpec::constant(k), r, OperatorKind::RandomWalk);
      out.push_back({r == 1 ? "walk-family-star" : "walk-family",
                     "constant k=" + std::to_string(k) + " r=" + std::to_string(r), detail::join_values(stated),
                     detail::join_values(oracle), detail::same_sets(stated, oracle)});
    }

  // Published closed form for cumulative multiplicities.
  for (int k : {2, 3})
    for (int m : {2, 3})
      for (int n = m; n <= m + 2; ++n) {
        const double stated = published_multiplicity_closed_form(k, m, n);
        const auto summed = cumulative_multiplicity(m, n, BranchingSpec::constant(k));
        out.push_back({"multiplicity-closed-form",
                       "k=" + std::to_string(k) + " m=" + std::to_string(m) + " depth=" + std::to_string(n),
                       detail::format_number(stated), std::to_string(summed), std::abs(stated - static_cast<double>(summed)) < 1e-9});
      }

  // Published per-index dimension k^{r-s}(k-1): does it account for every node?
  for (int k : {2, 3})
    for (int r : {2, 4}) {
      double stated = r + 1;
      for (int s = 2; s <= r + 1; ++s) stated += (s - 1) * (k - 1) * std::pow(k, r - s);
      const auto n = node_count_closed(BranchingSpec::constant(k), r);
      out.push_back({"typed-dimension-exponent", "k=" + std::to_string(k) + " r=" + std::to_string(r),
                     "dimension count " + detail::format_number(stated), "node count " + std::to_string(n),
                     std::abs(stated - static_cast<double>(n)) < 1e-9});
    }

  // Root range l = 1..m gives m values for a degree m-1 polynomial.
  for (int b : {2, 3})
    for (int m : {3, 4}) {
      const auto fam = make_family(constant_family(b), m);
      const double extra = -2 * std::sqrt(static_cast<double>(b));
      const long double val = fam.member(m).evaluate(extra);
      out.push_back({"root-range", "b=" + std::to_string(b) + " m=" + std::to_string(m),
                     std::to_string(m) + " values including " + detail::format_number(extra),
                     "degree " + std::to_string(m - 1) + ", P_m(" + detail::format_number(extra) + ") = " +
                         detail::format_number(static_cast<double>(val)),
                     std::abs(val) < 1e-9L});
    }

  // Endpoint counting direction, arbitrated by the depth-12 empirical CDF.
  {
    const auto spec = BranchingSpec::constant(2);
    const auto emp = normalize_spectrum(assemble_spectrum(spec, 12));
    for (auto [m, a] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 1}, {5, 2}}) {
      const double lam = 2 * std::sqrt(2.0) * std::cos(a * std::numbers::pi / m);
      const double x = detail::normalize_value(lam, spec, Normalization::SupportAffine);
      const double empirical_left = emp.at(x - 1e-9);
      const double reversed = staircase_left_reversed(spec, m, a);
      const double adopted = staircase_endpoints(spec, m, a).left;
      out.push_back({"endpoint-direction", "k=2 m=" + std::to_string(m) + " a=" + std::to_string(a),
                     "published condition gives " + detail::format_number(reversed),
                     "adopted " + detail::format_number(adopted) + ", empirical depth 12 " + detail::format_number(empirical_left),
                     std::abs(reversed - empirical_left) < 1e-3});
    }
  }

  // The published normalization leaves [0, 1] when 2 sqrt(k) > k.
  for (int k : {2, 3, 4}) {
    const auto rep = assemble_spectrum(BranchingSpec::constant(k), 8);
    const auto cdf = normalize_spectrum(rep, Normalization::PaperAffine);
    const double lo = cdf.points.front().x, hi = cdf.points.back().x;
    out.push_back({"normalization", "k=" + std::to_string(k) + " r=8", "(lambda+k)/(2k) within [0,1]",
                   "range [" + detail::format_number(lo) + ", " + detail::format_number(hi) + "]", lo >= 0 && hi <= 1});
  }
  return out;
}

}  // namespace bethe
