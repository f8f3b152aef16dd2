#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "bethe/branching.hpp"
#include "bethe/error.hpp"
#include "bethe/polyfam.hpp"
#include "bethe/spectra.hpp"

namespace bethe {

// PaperAffine: (lambda + k) / (2k). SupportAffine: (lambda + 2 sqrt b) / (4 sqrt b),
// which maps the spectral support [-2 sqrt b, 2 sqrt b] onto [0, 1].
enum class Normalization { SupportAffine, PaperAffine };

inline std::string to_string(Normalization s) {
  return s == Normalization::SupportAffine ? "support" : "paper";
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "support" || s == "support-affine") return Normalization::SupportAffine;
  if (s == "paper" || s == "paper-affine") return Normalization::PaperAffine;
  throw SpecError("unknown normalization scheme '" + s + "'");
}

struct CdfPoint {
  double x = 0;
  double weight = 0;
  std::int64_t count = 0;  // multiplicity behind the weight (0 for limiting points)
};

struct StaircaseCDF {
  enum class Kind { Empirical, Limiting };
  Kind kind = Kind::Empirical;
  Normalization scheme = Normalization::SupportAffine;
  int depth = 0;       // Empirical
  int truncation = 0;  // Limiting
  double tail_bound = 0;
  std::vector<CdfPoint> points;
  std::vector<double> cumulative;

  // F(x): total weight at points <= x.
  [[nodiscard]] double at(double x) const {
    const auto it = std::upper_bound(points.begin(), points.end(), x, [](double v, const CdfPoint& p) { return v < p.x; });
    if (it == points.begin()) return 0.0;
    return cumulative[static_cast<std::size_t>(it - points.begin()) - 1];
  }
};

namespace detail {

inline void require_constant_or_hat(const BranchingSpec& spec, const char* what) {
  if (!spec.is<ConstantChildren>() && !spec.is<RegularSubtree>())
    throw SpecError(std::string(what) + ": constant or hat family required, got " + spec.label());
}

inline double normalize_value(double lambda, const BranchingSpec& spec, Normalization scheme) {
  if (scheme == Normalization::PaperAffine) {
    const double k = spec.k();
    return (lambda + k) / (2 * k);
  }
  const double rb = std::sqrt(static_cast<double>(branching_b(spec)));
  return (lambda + 2 * rb) / (4 * rb);
}

}  // namespace detail

// Right-continuous step CDF of a sorted list of weighted points.
inline StaircaseCDF empirical_cdf(StaircaseCDF cdf) {
  if (cdf.points.empty()) throw SpecError("empirical_cdf: no points");
  std::stable_sort(cdf.points.begin(), cdf.points.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  cdf.cumulative.clear();
  double acc = 0;
  for (const auto& p : cdf.points) {
    if (!(p.weight > 0)) throw SpecError("empirical_cdf: weights must be positive");
    acc += p.weight;
    cdf.cumulative.push_back(acc);
  }
  return cdf;
}

// Normalized eigenvalues weighted by multiplicity / total dimension.
inline StaircaseCDF normalize_spectrum(const SpectrumReport& report, Normalization scheme = Normalization::SupportAffine) {
  detail::require_constant_or_hat(report.spec, "normalize_spectrum");
  if (report.op != OperatorKind::Adjacency) throw SpecError("normalize_spectrum: adjacency spectrum required");
  StaircaseCDF cdf;
  cdf.kind = StaircaseCDF::Kind::Empirical;
  cdf.scheme = scheme;
  cdf.depth = report.depth;
  // cumulative counts are summed exactly, then divided
  std::int64_t running = 0;
  for (const auto& e : report.entries) {
    cdf.points.push_back({detail::normalize_value(e.value, report.spec, scheme),
                          static_cast<double>(e.multiplicity) / static_cast<double>(report.total_dim), e.multiplicity});
    running += e.multiplicity;
    cdf.cumulative.push_back(static_cast<double>(running) / static_cast<double>(report.total_dim));
  }
  return cdf;
}

// Limiting weight of each value first appearing as a root of P_m.
inline double limit_proportion(const BranchingSpec& spec, int m) {
  detail::require_constant_or_hat(spec, "limit_proportion");
  if (m < 2) throw SpecError("limit_proportion: m must be >= 2");
  if (spec.is<ConstantChildren>()) {
    const double k = spec.k();
    return (k - 1) * (k - 1) / (std::pow(k, m) - 1);
  }
  const double k = spec.k();
  return (k - 2) * (k - 2) / (std::pow(k - 1, m) - 1);
}

namespace detail {

// base of the geometric decay of limit_proportion and its numerator
inline std::pair<double, double> decay(const BranchingSpec& spec) {
  const double k = spec.k();
  if (spec.is<ConstantChildren>()) return {1.0 / k, (k - 1) * (k - 1)};
  return {1.0 / (k - 1), (k - 2) * (k - 2)};
}

// Bound on sum_{n>N} n * c / (q^n - 1) using 1/(q^n - 1) <= 2 q^-n.
inline double weighted_tail(double x, double c, int N) {
  const double n1 = N + 1;
  return 2 * c * std::pow(x, n1) * (n1 - N * x) / ((1 - x) * (1 - x));
}

}  // namespace detail

// Limiting CDF truncated at index N: weight limit_proportion(n) at the
// normalized image of 2 sqrt(b) cos(l pi / n) for every l coprime to n.
inline StaircaseCDF limiting_cdf(const BranchingSpec& spec, int N = 60, Normalization scheme = Normalization::SupportAffine) {
  detail::require_constant_or_hat(spec, "limiting_cdf");
  if (N < 2) throw SpecError("limiting_cdf: truncation must be >= 2");
  StaircaseCDF cdf;
  cdf.kind = StaircaseCDF::Kind::Limiting;
  cdf.scheme = scheme;
  cdf.truncation = N;
  const double rb = std::sqrt(static_cast<double>(detail::branching_b(spec)));
  for (int n = 2; n <= N; ++n) {
    const double w = limit_proportion(spec, n);
    for (int l = 1; l < n; ++l)
      if (std::gcd(l, n) == 1)
        cdf.points.push_back({detail::normalize_value(2 * rb * std::cos(l * std::numbers::pi / n), spec, scheme), w, 0});
  }
  const auto [x, c] = detail::decay(spec);
  cdf.tail_bound = detail::weighted_tail(x, c, N);
  return empirical_cdf(std::move(cdf));
}

// Kolmogorov distance between two step CDFs, evaluated at the union of
// their jump points.
inline double cdf_distance(const StaircaseCDF& a, const StaircaseCDF& b) {
  if (a.scheme != b.scheme) throw SpecError("cdf_distance: CDFs use different normalization schemes");
  double d = 0;
  for (const auto* c : {&a, &b})
    for (const auto& p : c->points) d = std::max(d, std::abs(a.at(p.x) - b.at(p.x)));
  return d;
}

struct EndpointRecord {
  int m = 0;
  int a = 0;
  double left = 0;
  double right = 0;
  double width = 0;
  double tail_bound = 0;
};

// Limiting cumulative measure strictly below the value 2 sqrt(b) cos(a pi / m)
// (left) and up to and including it (right). A value with index n and l lies
// below exactly when l / n > a / m, since cos decreases on [0, pi].
inline EndpointRecord staircase_endpoints(const BranchingSpec& spec, int m, int a, int N = 60) {
  detail::require_constant_or_hat(spec, "staircase_endpoints");
  if (m < 2 || a < 1 || a > m - 1) throw SpecError("staircase_endpoints: need 1 <= a <= m-1 and m >= 2");
  if (std::gcd(a, m) != 1)
    throw SpecError("staircase_endpoints: a=" + std::to_string(a) + " and m=" + std::to_string(m) + " are not coprime");
  if (N < m) throw SpecError("staircase_endpoints: truncation must be >= m");
  EndpointRecord e{m, a, 0, 0, 0, 0};
  for (int n = 2; n <= N; ++n) {
    int count = 0;
    for (int l = 1; l < n; ++l)
      if (std::gcd(l, n) == 1 && static_cast<long long>(l) * m > static_cast<long long>(a) * n) ++count;
    e.left += limit_proportion(spec, n) * count;
  }
  e.width = limit_proportion(spec, m);
  e.right = e.left + e.width;
  const auto [x, c] = detail::decay(spec);
  e.tail_bound = detail::weighted_tail(x, c, N);
  return e;
}

// Same sum with the comparison reversed (l / n < a / m); kept for reports.
inline double staircase_left_reversed(const BranchingSpec& spec, int m, int a, int N = 60) {
  double left = 0;
  for (int n = 2; n <= N; ++n) {
    int count = 0;
    for (int l = 1; l < n; ++l)
      if (std::gcd(l, n) == 1 && static_cast<long long>(l) * m < static_cast<long long>(a) * n) ++count;
    left += limit_proportion(spec, n) * count;
  }
  return left;
}

struct LambertSum {
  double value = 0;
  double tail_bound = 0;
  double limit = 0;
};

enum class LambertForm {
  Normalized,  // sum_{n>=2} phi(n) (k-1)^2 / (k^n - 1), limit 1
  Plain        // sum_{n>=1} phi(n) / (k^n - 1), limit 1/(k-1) + 1/(k-1)^2
};

inline LambertSum lambert_partial(int k, int N, LambertForm form = LambertForm::Normalized) {
  if (k < 2) throw SpecError("lambert_partial: k must be >= 2");
  if (N < 2) throw SpecError("lambert_partial: N must be >= 2");
  const double kd = k;
  const double c = form == LambertForm::Normalized ? (kd - 1) * (kd - 1) : 1.0;
  LambertSum s;
  // smallest terms first
  for (int n = N; n >= (form == LambertForm::Normalized ? 2 : 1); --n)
    s.value += static_cast<double>(euler_phi(static_cast<std::uint64_t>(n))) * c / (std::pow(kd, n) - 1);
  s.tail_bound = detail::weighted_tail(1.0 / kd, c, N);
  s.limit = form == LambertForm::Normalized ? 1.0 : 1.0 / (kd - 1) + 1.0 / ((kd - 1) * (kd - 1));
  return s;
}

// Share of the spectrum carried by values first appearing at index m, read
// from an assembled report.
inline double empirical_index_proportion(const SpectrumReport& rep, int m) {
  std::int64_t total = 0;
  for (const auto& e : rep.entries)
    if (e.source.first_index == m && e.source.family_label.rfind("P^", 0) == 0) total += e.multiplicity;
  return static_cast<double>(total) / static_cast<double>(rep.total_dim);
}

}  // namespace bethe
