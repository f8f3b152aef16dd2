#include <gtest/gtest.h>

#include <cmath>

#include "bethe/certificates.hpp"
#include "oracles.hpp"

using namespace bethe;

namespace {

// max |(A v - lambda v)_u| / max |v| with a dense matrix product
double dense_residual(const oracles::Matrix& a, const std::vector<double>& v, double lambda) {
  double vmax = 0, res = 0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[i][j] * v[j];
    res = std::max(res, std::abs(s - lambda * v[i]));
  }
  return res / vmax;
}

oracles::Matrix adjacency_rows(const TreeGraph& g) {
  oracles::Matrix a(g.n_nodes(), std::vector<double>(g.n_nodes(), 0.0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

}  // namespace

TEST(Isotropic, BinaryDepthTwoAtTwo) {
  const auto g = build_tree(BranchingSpec::constant(2), 2);
  const auto c = isotropic_eigenvector(g, 2.0, make_family(constant_family(2), 4));
  const auto v = c.dense(g.n_nodes());
  EXPECT_DOUBLE_EQ(v[0], 2);
  EXPECT_DOUBLE_EQ(v[1], 2);
  EXPECT_DOUBLE_EQ(v[6], 1);
  EXPECT_LE(c.residual_inf, 1e-15);
  EXPECT_EQ(c.construction, Construction::Isotropic);
}

TEST(Isotropic, LeavesCarryOne) {
  for (int k : {2, 3})
    for (int r = 1; r <= 4; ++r) {
      const auto g = build_tree(BranchingSpec::constant(k), r);
      const auto fam = make_family(constant_family(k), r + 2);
      for (double lam : closed_form_roots(k, r + 2)) {
        const auto c = isotropic_eigenvector(g, lam, fam);
        const auto v = c.dense(g.n_nodes());
        EXPECT_DOUBLE_EQ(v.back(), 1.0);
        EXPECT_LE(dense_residual(adjacency_rows(g), v, lam), 1e-9);
      }
    }
}

TEST(Isotropic, FriendshipGraph) {
  const auto g = build_fan_graph(2, 3, 1);
  const double lam = (1 + std::sqrt(17.0)) / 2;
  const auto c = isotropic_eigenvector(g, lam, make_family(fan_family(2, 3), 3));
  const auto v = c.dense(5);
  EXPECT_NEAR(v[0], lam - 1, 1e-14);
  for (int i = 1; i < 5; ++i) EXPECT_DOUBLE_EQ(v[static_cast<std::size_t>(i)], 1.0);
  EXPECT_EQ(c.construction, Construction::Fan);
  EXPECT_LE(dense_residual(adjacency_rows(g), v, lam), 1e-12);
}

TEST(Isotropic, WrongEigenvalueIsRejected) {
  const auto g = build_tree(BranchingSpec::constant(2), 2);
  EXPECT_THROW(isotropic_eigenvector(g, 1.0, make_family(constant_family(2), 4)), ConsistencyError);
}

TEST(Typed, BinaryDepthTwoAtZero) {
  const auto g = build_tree(BranchingSpec::constant(2), 2);
  const auto certs = typed_eigenbasis(g, 0.0, 2, make_family(constant_family(2), 4));
  ASSERT_EQ(certs.size(), 2u);
  for (const auto& c : certs) {
    ASSERT_EQ(c.entries.size(), 2u);
    EXPECT_DOUBLE_EQ(c.entries[0].second, 1.0);
    EXPECT_DOUBLE_EQ(c.entries[1].second, -1.0);
    EXPECT_EQ(g.depth_of(c.entries[0].first), 2);
    EXPECT_EQ(g.parent(c.entries[0].first), g.parent(c.entries[1].first));
  }
}

TEST(Typed, RootValueVanishes) {
  for (int k : {2, 3})
    for (int r = 1; r <= 3; ++r) {
      const auto g = build_tree(BranchingSpec::constant(k), r);
      const auto fam = make_family(constant_family(k), r + 2);
      for (double lam : closed_form_roots(k, r + 1)) {
        const auto certs = typed_eigenbasis(g, lam, r + 1, fam);
        EXPECT_EQ(certs.size(), static_cast<std::size_t>(k - 1));
        for (const auto& c : certs) {
          EXPECT_EQ(c.dense(g.n_nodes())[0], 0.0);
          EXPECT_LE(dense_residual(adjacency_rows(g), c.dense(g.n_nodes()), lam), 1e-9);
        }
      }
    }
}

TEST(Typed, HatDepthTwoAtZero) {
  const auto g = build_tree(BranchingSpec::hat(3), 2);
  const auto certs = typed_eigenbasis(g, 0.0, 2, make_family(constant_family(2), 4));
  EXPECT_EQ(certs.size(), 3u);
  EXPECT_EQ(independent_count(certs), 3u);
}

TEST(Typed, RejectsBadIndex) {
  const auto g = build_tree(BranchingSpec::constant(2), 2);
  const auto fam = make_family(constant_family(2), 4);
  EXPECT_THROW(typed_eigenbasis(g, 0.0, 4, fam), SpecError);
  EXPECT_THROW(typed_eigenbasis(g, 0.0, 1, fam), SpecError);
  EXPECT_THROW(typed_eigenbasis(build_fan_graph(2, 3, 2), 0.0, 2, fam), SpecError);
}

TEST(VerifyEigenpair, Examples) {
  const auto star = build_tree(BranchingSpec::constant(2), 1);
  EXPECT_DOUBLE_EQ(verify_eigenpair(star, {1, 1, 1}, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(verify_eigenpair(build_tree(BranchingSpec::constant(2), 0), {1}, 0.0), 0.0);
  EXPECT_THROW(verify_eigenpair(star, {0, 0, 0}, 1.0), SpecError);
  EXPECT_THROW(verify_eigenpair(star, {1, 0}, 1.0), SpecError);
  const double r2 = std::sqrt(2.0);
  EXPECT_LE(verify_eigenpair(star, {r2, 1, 1}, r2), 1e-15);
}

TEST(IndependentCount, DetectsDependence) {
  EigvecCertificate a, b, c;
  a.entries = {{0, 1.0}, {1, -1.0}};
  b.entries = {{1, 1.0}, {2, -1.0}};
  c.entries = {{0, 1.0}, {2, -1.0}};  // a + b
  EXPECT_EQ(independent_count({a, b}), 2u);
  EXPECT_EQ(independent_count({a, b, c}), 2u);
  c.lambda = 1.0;  // different eigenvalue: orthogonal by assumption
  EXPECT_EQ(independent_count({a, b, c}), 3u);
}

TEST(CertifyTree, CompleteBasesForAllFamilies) {
  const std::vector<std::pair<BranchingSpec, int>> cases{
      {BranchingSpec::constant(2), 4}, {BranchingSpec::constant(3), 3}, {BranchingSpec::hat(3), 3},
      {BranchingSpec::hat(5), 2},      {BranchingSpec::periodic({3, 2}), 4}, {BranchingSpec::periodic({2, 3, 4}), 3},
      {BranchingSpec::sequence({2, 3, 5}), 3}, {BranchingSpec::constant(2), 0}};
  for (const auto& [spec, r] : cases) {
    const auto s = certify_tree(spec, r);
    EXPECT_LE(s.max_residual, 1e-9) << spec.label();
    EXPECT_EQ(s.independent, s.n_nodes) << spec.label();
    EXPECT_EQ(s.certificates.size(), s.n_nodes) << spec.label();
    const auto g = build_tree(spec, r);
    const auto a = adjacency_rows(g);
    for (const auto& c : s.certificates) EXPECT_LE(dense_residual(a, c.dense(g.n_nodes()), c.lambda), 1e-9);
  }
}

TEST(CertifyTree, LaplacianAndWalk) {
  for (auto op : {OperatorKind::Laplacian, OperatorKind::RandomWalk})
    for (const auto& spec : {BranchingSpec::constant(2), BranchingSpec::constant(3), BranchingSpec::hat(3)}) {
      const auto s = certify_tree(spec, 3, op);
      EXPECT_LE(s.max_residual, 1e-9);
      EXPECT_EQ(s.independent, s.n_nodes);
      // check against an independently built operator
      const auto g = build_tree(spec, 3);
      auto m = adjacency_rows(g);
      m = op == OperatorKind::Laplacian ? oracles::laplacian_of(m) : oracles::walk_of(m);
      for (const auto& c : s.certificates) EXPECT_LE(dense_residual(m, c.dense(g.n_nodes()), c.lambda), 1e-9);
    }
  EXPECT_THROW(certify_tree(BranchingSpec::constant(2), 0, OperatorKind::RandomWalk), SpecError);
}

TEST(CertifyFan, ClosingRootsCertified) {
  for (auto [k, d] : std::vector<std::pair<int, int>>{{2, 3}, {3, 3}, {2, 4}})
    for (int r = 1; r <= 3; ++r) {
      const auto s = certify_fan(k, d, r);
      EXPECT_EQ(s.certificates.size(), static_cast<std::size_t>(r + 1));
      EXPECT_LE(s.max_residual, 1e-9);
      EXPECT_EQ(s.independent, s.certificates.size());
    }
}

TEST(ExtendToBall, InteriorRelationHolds) {
  const auto spec = BranchingSpec::hat(3);
  const auto s = certify_tree(spec, 2);
  const auto big = build_tree(spec, 5);
  for (const auto& c : s.certificates) {
    const auto w = extend_to_ball(c.dense(10), c.lambda, spec, 2, 3);
    EXPECT_LE(interior_residual(big, w, c.lambda), 1e-9);
    // old values kept, first new ring zero
    for (NodeId u = 0; u < 10; ++u) EXPECT_EQ(w[u], c.dense(10)[u]);
    const auto [lo, hi] = big.level(3);
    for (NodeId u = lo; u < hi; ++u) EXPECT_EQ(w[u], 0.0);
  }
}

TEST(ExtendToBall, OneRingAndZeroEigenvalue) {
  const auto spec = BranchingSpec::hat(3);
  // 0-eigenvector of the 4-node star: leaves (1, -1, 0)
  const std::vector<double> v{0, 1, -1, 0};
  const auto w = extend_to_ball(v, 0.0, spec, 1, 2);
  const auto big = build_tree(spec, 3);
  EXPECT_LE(interior_residual(big, w, 0.0), 1e-12);
  const auto [lo, hi] = big.level(3);
  for (NodeId u = lo; u < hi; ++u) EXPECT_DOUBLE_EQ(w[u], -v[big.parent(big.parent(u))] / 2);
  EXPECT_EQ(extend_to_ball(v, 0.0, spec, 1, 1).size(), build_tree(spec, 2).n_nodes());
  EXPECT_THROW(extend_to_ball({1, 1, 1, 1}, 0.0, spec, 1, 1), SpecError);
  EXPECT_THROW(extend_to_ball(v, 0.0, spec, 1, 0), SpecError);
  EXPECT_THROW(extend_to_ball(v, 0.0, BranchingSpec::constant(3), 1, 1), SpecError);
}
