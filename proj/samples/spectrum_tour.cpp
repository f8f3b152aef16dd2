// Prints the spectra of a few small trees next to their dense-solver check.

#include <cstdio>

#include "bethe/bethe.hpp"

using namespace bethe;

namespace {

void show(const BranchingSpec& spec, int depth, OperatorKind op = OperatorKind::Adjacency) {
  const auto rep = assemble_spectrum(spec, depth, op);
  std::printf("%s depth %d, %s, %lld nodes\n", spec.label().c_str(), depth, to_string(op).c_str(),
              static_cast<long long>(rep.total_dim));
  for (const auto& e : rep.entries)
    std::printf("  %12.8f  x%-5lld  %s index %d\n", e.value, static_cast<long long>(e.multiplicity),
                e.source.family_label.c_str(), e.source.first_index);
  if (rep.total_dim <= 2000) {
    const TreeGraph g = build_tree(spec, depth);
    const auto cmp = compare_spectra(rep.clusters(), cluster_multiset(sym_eigenvalues(dense_operator(g, op))), 1e-8);
    std::printf("  dense check: %s (worst gap %.2e)\n", cmp.matched ? "matched" : "MISMATCH", cmp.worst_value_gap);
  }
  std::printf("\n");
}

}  // namespace

int main() {
  show(BranchingSpec::constant(2), 3);
  show(BranchingSpec::hat(3), 2);
  show(BranchingSpec::periodic({3, 2}), 4);
  show(BranchingSpec::constant(3), 2, OperatorKind::Laplacian);
  show(BranchingSpec::fan(2, 3), 2);

  const auto cert = certify_tree(BranchingSpec::hat(4), 3);
  std::printf("regular ball k=4 depth 3: %zu certificates, %zu independent, max residual %.2e\n",
              cert.certificates.size(), cert.independent, cert.max_residual);
  return 0;
}
