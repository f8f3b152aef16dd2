#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bethe/measure.hpp"
#include "oracles.hpp"

using namespace bethe;

namespace {

StaircaseCDF empirical(int k, int r, Normalization s = Normalization::SupportAffine) {
  return normalize_spectrum(assemble_spectrum(BranchingSpec::constant(k), r), s);
}

// sum_{n=from}^{N} phi(n) c / (k^n - 1) with the totient counted by gcd
double phi_series(int k, int from, int N, double c) {
  long double s = 0;
  for (int n = N; n >= from; --n) s += oracles::phi_by_gcd(n) * static_cast<long double>(c) / (std::pow(static_cast<long double>(k), n) - 1);
  return static_cast<double>(s);
}

}  // namespace

TEST(Normalize, Examples) {
  const auto s2 = BranchingSpec::constant(2);
  EXPECT_DOUBLE_EQ(detail::normalize_value(0.0, s2, Normalization::PaperAffine), 0.5);
  for (int b : {2, 3, 5})
    EXPECT_NEAR(detail::normalize_value(-2 * std::sqrt(b), BranchingSpec::constant(b), Normalization::SupportAffine), 0.0, 1e-15);
  EXPECT_NEAR(detail::normalize_value(2 * std::sqrt(2.0), s2, Normalization::PaperAffine), 1.2071067811865475, 1e-15);
  EXPECT_NEAR(detail::normalize_value(2 * std::sqrt(3.0), BranchingSpec::hat(4), Normalization::SupportAffine), 1.0, 1e-15);
}

TEST(Normalize, ParseScheme) {
  EXPECT_EQ(parse_normalization("support"), Normalization::SupportAffine);
  EXPECT_EQ(parse_normalization("paper"), Normalization::PaperAffine);
  EXPECT_THROW(parse_normalization("both"), SpecError);
}

TEST(Normalize, RejectsUnsupportedReports) {
  EXPECT_THROW(normalize_spectrum(assemble_spectrum(BranchingSpec::periodic({2, 3}), 2)), SpecError);
  EXPECT_THROW(normalize_spectrum(assemble_spectrum(BranchingSpec::constant(2), 2, OperatorKind::Laplacian)), SpecError);
}

TEST(EmpiricalCdf, Examples) {
  const auto single = empirical(2, 0);
  ASSERT_EQ(single.points.size(), 1u);
  EXPECT_DOUBLE_EQ(single.points[0].x, 0.5);
  EXPECT_DOUBLE_EQ(single.at(0.49), 0.0);
  EXPECT_DOUBLE_EQ(single.at(0.5), 1.0);

  const auto c = empirical(2, 2);
  ASSERT_EQ(c.points.size(), 5u);
  const std::vector<double> heights{1.0 / 7, 1.0 / 7, 3.0 / 7, 1.0 / 7, 1.0 / 7};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(c.points[i].weight, heights[i], 1e-15);
  EXPECT_DOUBLE_EQ(c.cumulative.back(), 1.0);
}

TEST(EmpiricalCdf, SortsAndChecksWeights) {
  StaircaseCDF raw;
  raw.points = {{0.8, 0.5, 0}, {0.2, 0.5, 0}};
  const auto c = empirical_cdf(raw);
  EXPECT_DOUBLE_EQ(c.points[0].x, 0.2);
  EXPECT_DOUBLE_EQ(c.at(0.5), 0.5);
  raw.points[0].weight = 0;
  EXPECT_THROW(empirical_cdf(raw), SpecError);
  EXPECT_THROW(empirical_cdf(StaircaseCDF{}), SpecError);
}

TEST(EmpiricalCdf, Invariants) {
  for (int k : {2, 3})
    for (int r = 1; r <= 8; ++r) {
      const auto c = empirical(k, r);
      EXPECT_NEAR(c.cumulative.back(), 1.0, 1e-12);
      for (std::size_t i = 1; i < c.points.size(); ++i) {
        EXPECT_LT(c.points[i - 1].x, c.points[i].x);
        EXPECT_LE(c.cumulative[i - 1], c.cumulative[i]);
      }
      EXPECT_GE(c.points.front().x, 0.0);
      EXPECT_LE(c.points.back().x, 1.0);
    }
}

TEST(LimitProportion, Examples) {
  EXPECT_DOUBLE_EQ(limit_proportion(BranchingSpec::constant(2), 2), 1.0 / 3);
  EXPECT_DOUBLE_EQ(limit_proportion(BranchingSpec::hat(4), 2), 0.5);
  double prev = 1;
  for (int m = 2; m <= 40; ++m) {
    const double p = limit_proportion(BranchingSpec::constant(3), m);
    EXPECT_LT(p, prev);
    prev = p;
  }
  EXPECT_THROW(limit_proportion(BranchingSpec::constant(2), 1), SpecError);
  EXPECT_THROW(limit_proportion(BranchingSpec::periodic({2, 3}), 2), SpecError);
}

TEST(LimitProportion, GeometricConvergence) {
  for (int k : {2, 3})
    for (int m = 2; m <= 10; ++m)
      for (int r = m + 2; r <= (k == 2 ? 14 : 10); ++r) {
        const auto rep = assemble_spectrum(BranchingSpec::constant(k), r);
        const double emp = empirical_index_proportion(rep, m) / oracles::phi_by_gcd(m);
        EXPECT_LE(std::abs(emp - limit_proportion(BranchingSpec::constant(k), m)), 4 * std::pow(k, m - r))
            << "k=" << k << " m=" << m << " r=" << r;
      }
}

TEST(Endpoints, MedianPlateau) {
  const auto e = staircase_endpoints(BranchingSpec::constant(2), 2, 1, 60);
  EXPECT_NEAR(e.left, 1.0 / 3, 1e-9);
  EXPECT_NEAR(e.right, 2.0 / 3, 1e-9);
  EXPECT_NEAR(e.width, 1.0 / 3, 1e-15);
}

TEST(Endpoints, AgreeWithDeepEmpiricalCdf) {
  const auto spec = BranchingSpec::constant(2);
  const auto emp = empirical(2, 14);
  for (int m = 2; m <= 6; ++m)
    for (int a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const auto e = staircase_endpoints(spec, m, a, 60);
      const double x = detail::normalize_value(2 * std::sqrt(2.0) * std::cos(a * std::numbers::pi / m), spec, Normalization::SupportAffine);
      // strictly-below mass at depth 14 and the plateau top
      EXPECT_NEAR(e.left, emp.at(x - 1e-9), 2e-3) << "m=" << m << " a=" << a;
      EXPECT_NEAR(e.right, emp.at(x + 1e-9), 2e-3) << "m=" << m << " a=" << a;
    }
}

TEST(Endpoints, MinusRootTwoPlateauStartsAtOneSeventh) {
  const auto e = staircase_endpoints(BranchingSpec::constant(2), 3, 2, 60);
  EXPECT_NEAR(e.left, 1.0 / 7, 1e-9);
  EXPECT_NEAR(e.width, 1.0 / 7, 1e-15);
}

TEST(Endpoints, SchemeIndependentAndSymmetric) {
  for (int m = 2; m <= 9; ++m)
    for (int a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const auto e = staircase_endpoints(BranchingSpec::constant(3), m, a, 60);
      const auto f = staircase_endpoints(BranchingSpec::constant(3), m, m - a, 60);
      EXPECT_NEAR(e.left, 1 - f.right, 1e-9);
      EXPECT_GE(e.left, 0);
      EXPECT_LE(e.right, 1);
      EXPECT_NEAR(e.right - e.left, e.width, 1e-15);
    }
}

TEST(Endpoints, WidthsTileTheUnitInterval) {
  double total = 0;
  for (int m = 2; m <= 30; ++m)
    for (int a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) total += staircase_endpoints(BranchingSpec::constant(2), m, a, 60).width;
  const double tail = detail::weighted_tail(0.5, 1.0, 30);
  EXPECT_GE(total + tail, 1 - 1e-9);
  EXPECT_LE(total, 1 + 1e-12);
}

TEST(Endpoints, Errors) {
  const auto s = BranchingSpec::constant(2);
  EXPECT_THROW(staircase_endpoints(s, 4, 2, 60), SpecError);
  EXPECT_THROW(staircase_endpoints(s, 3, 3, 60), SpecError);
  EXPECT_THROW(staircase_endpoints(s, 5, 1, 4), SpecError);
  EXPECT_THROW(staircase_endpoints(BranchingSpec::sequence({2, 3}), 3, 1, 60), SpecError);
}

TEST(Lambert, Identities) {
  const auto a = lambert_partial(2, 60, LambertForm::Normalized);
  EXPECT_NEAR(a.value, 1.0, 1e-12);
  EXPECT_NEAR(lambert_partial(2, 60, LambertForm::Plain).value, 2.0, 1e-12);
  EXPECT_NEAR(lambert_partial(3, 60, LambertForm::Normalized).value, 1.0, 1e-12);
  EXPECT_NEAR(a.value, phi_series(2, 2, 60, 1.0), 1e-14);
  EXPECT_THROW(lambert_partial(1, 60), SpecError);
  EXPECT_THROW(lambert_partial(2, 1), SpecError);
}

TEST(Lambert, MonotoneWithValidTail) {
  for (int k : {2, 3, 5})
    for (auto form : {LambertForm::Normalized, LambertForm::Plain}) {
      double prev = 0;
      for (int N = 2; N <= 40; ++N) {
        const auto s = lambert_partial(k, N, form);
        // once the added term drops below an ulp of the sum it can only stay put
        if (prev < s.limit * (1 - 1e-14))
          EXPECT_GT(s.value, prev);
        else
          EXPECT_GE(s.value, prev);
        EXPECT_LE(s.value, s.limit + 1e-15);
        EXPECT_GE(s.value + s.tail_bound, s.limit - 1e-15);
        prev = s.value;
      }
    }
}

TEST(LimitingCdf, CloseToDeepEmpiricalCdf) {
  const auto lim = limiting_cdf(BranchingSpec::constant(2), 60);
  EXPECT_LE(cdf_distance(empirical(2, 12), lim), 0.01);
  EXPECT_LE(lim.cumulative.back(), 1.0 + 1e-15);
  EXPECT_GE(lim.cumulative.back() + lim.tail_bound, 1.0 - 1e-12);
}

TEST(CdfDistance, Examples) {
  const auto c12 = empirical(2, 12);
  EXPECT_EQ(cdf_distance(c12, c12), 0.0);
  EXPECT_GT(cdf_distance(empirical(2, 4), c12), cdf_distance(empirical(2, 8), c12));
  EXPECT_THROW(cdf_distance(c12, empirical(2, 12, Normalization::PaperAffine)), SpecError);
}

TEST(PaperAffine, LeavesUnitIntervalForSmallK) {
  for (int k : {2, 3}) EXPECT_GT(empirical(k, 8, Normalization::PaperAffine).points.back().x, 1.0);
  EXPECT_LE(empirical(4, 8, Normalization::PaperAffine).points.back().x, 1.0);
}
