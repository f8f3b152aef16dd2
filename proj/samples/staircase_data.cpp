// Writes the normalized spectral CDFs of the binary tree at several depths,
// the truncated limiting CDF and its plateau endpoints, as CSV/JSON files
// in the directory given on the command line (default: current directory).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "bethe/bethe.hpp"

using namespace bethe;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
  std::filesystem::create_directories(dir);
  const auto spec = BranchingSpec::constant(2);
  const auto lim = limiting_cdf(spec, 60);

  for (int r : {4, 8, 12}) {
    const auto cdf = normalize_spectrum(assemble_spectrum(spec, r));
    std::ofstream f(dir / ("empirical_depth" + std::to_string(r) + ".csv"));
    write_cdf_csv(f, cdf);
    std::printf("depth %2d: %zu steps, distance to limit %.5f\n", r, cdf.points.size(), cdf_distance(cdf, lim));
  }
  {
    std::ofstream f(dir / "limiting_N60.csv");
    write_cdf_csv(f, lim);
  }
  std::vector<EndpointRecord> recs;
  for (int m = 2; m <= 8; ++m)
    for (int a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) recs.push_back(staircase_endpoints(spec, m, a, 60));
  std::ofstream(dir / "endpoints.json") << endpoints_to_json(recs).dump(2) << '\n';
  std::printf("wrote %zu endpoint records to %s\n", recs.size(), dir.string().c_str());
  return 0;
}
