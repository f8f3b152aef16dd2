#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bethe/bethe.hpp"

namespace {

using namespace bethe;

struct Options {
  std::string family = "constant";
  int k = 2;
  int d = 2;
  std::string alphas;
  int depth = 2;
  std::string op = "adjacency";
  std::string out;
  std::string format = "json";
  double tol = 1e-8;
  int trunc = 60;
  std::string scheme = "support";
  int m_max = 6;
  bool limiting = false;
};

std::vector<int> parse_alphas(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw SpecError("");
    } catch (const std::exception&) {
      throw SpecError("--alphas must be a comma-separated list of integers, got '" + s + "'");
    }
  }
  return out;
}

BranchingSpec make_spec(const Options& o) {
  BranchingSpec spec;
  if (o.family == "constant")
    spec = BranchingSpec::constant(o.k);
  else if (o.family == "hat")
    spec = BranchingSpec::hat(o.k);
  else if (o.family == "periodic")
    spec = BranchingSpec::periodic(parse_alphas(o.alphas));
  else if (o.family == "sequence")
    spec = BranchingSpec::sequence(parse_alphas(o.alphas));
  else if (o.family == "fan")
    spec = BranchingSpec::fan(o.k, o.d);
  else
    throw SpecError("unknown family '" + o.family + "' (constant, hat, periodic, sequence, fan)");
  spec.validate(o.depth);
  return spec;
}

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw SpecError("cannot open '" + o.out + "' for writing");
  f << text;
}

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw SpecError("--format must be json or csv");
}

int cmd_spectrum(const Options& o) {
  check_format(o);
  const auto rep = assemble_spectrum(make_spec(o), o.depth, parse_operator(o.op));
  std::ostringstream os;
  if (o.format == "json")
    os << spectrum_to_json(rep).dump(2) << '\n';
  else
    write_spectrum_csv(os, rep);
  emit(o, os.str());
  return 0;
}

int cmd_verify(const Options& o) {
  const auto spec = make_spec(o);
  CertificationSummary s;
  if (spec.is<Fan>() && spec.as<Fan>().d > 2)
    s = certify_fan(o.k, o.d, o.depth);
  else
    s = certify_tree(spec.is<Fan>() ? BranchingSpec::constant(o.k) : spec, o.depth, parse_operator(o.op));
  const bool full = spec.is<Fan>() && spec.as<Fan>().d > 2 ? true : s.independent == s.n_nodes;
  std::ostringstream os;
  os << "certificates " << s.certificates.size() << "\nindependent " << s.independent << "\nnodes " << s.n_nodes
     << "\nmax_residual " << format_double(s.max_residual) << '\n';
  emit(o, os.str());
  return (s.max_residual <= kCertificateTol && full) ? 0 : 1;
}

int cmd_staircase(const Options& o) {
  check_format(o);
  const auto spec = make_spec(o);
  const auto scheme = parse_normalization(o.scheme);
  const auto cdf = o.limiting ? limiting_cdf(spec, o.trunc, scheme) : normalize_spectrum(assemble_spectrum(spec, o.depth), scheme);
  std::ostringstream os;
  if (o.format == "json")
    os << cdf_to_json(cdf).dump(2) << '\n';
  else
    write_cdf_csv(os, cdf);
  emit(o, os.str());
  return 0;
}

int cmd_endpoints(const Options& o) {
  const auto spec = make_spec(o);
  if (o.m_max < 2) throw SpecError("--m-max must be >= 2");
  std::vector<EndpointRecord> recs;
  for (int m = 2; m <= o.m_max; ++m)
    for (int a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) recs.push_back(staircase_endpoints(spec, m, a, o.trunc));
  std::ostringstream os;
  if (o.format == "csv") {
    os << "m,a,left,right,width,tail_bound\n";
    for (const auto& e : recs)
      os << e.m << ',' << e.a << ',' << format_double(e.left) << ',' << format_double(e.right) << ','
         << format_double(e.width) << ',' << format_double(e.tail_bound) << '\n';
  } else {
    check_format(o);
    os << endpoints_to_json(recs).dump(2) << '\n';
  }
  emit(o, os.str());
  return 0;
}

int cmd_oracle_compare(const Options& o) {
  const auto spec = make_spec(o);
  const auto op = parse_operator(o.op);
  const auto rep = assemble_spectrum(spec, o.depth, op);
  const TreeGraph g = spec.is<Fan>() ? build_fan_graph(o.k, o.d, o.depth) : build_tree(spec, o.depth);
  const auto oracle = cluster_multiset(sym_eigenvalues(dense_operator(g, op)));
  const auto cmp = compare_spectra(rep.clusters(), oracle, o.tol);
  std::ostringstream os;
  os << "spec " << spec.label() << " depth " << o.depth << " operator " << to_string(op) << "\nnodes " << g.n_nodes()
     << "\nassembled_values " << rep.entries.size() << "\noracle_values " << oracle.size() << "\nworst_value_gap "
     << format_double(cmp.worst_value_gap) << "\nmatched " << (cmp.matched ? "yes" : "no") << '\n';
  for (const auto& m : cmp.mult_mismatches)
    os << "mismatch value " << format_double(m.value) << " assembled " << m.mult_a << " oracle " << m.mult_b << '\n';
  emit(o, os.str());
  return cmp.matched ? 0 : 1;
}

int cmd_identities(const Options& o) {
  std::ostringstream os;
  const auto n = lambert_partial(o.k, o.trunc, LambertForm::Normalized);
  const auto p = lambert_partial(o.k, o.trunc, LambertForm::Plain);
  os << "normalized_sum " << format_double(n.value) << " limit " << format_double(n.limit) << " tail_bound "
     << format_double(n.tail_bound) << '\n';
  os << "plain_sum " << format_double(p.value) << " limit " << format_double(p.limit) << " tail_bound "
     << format_double(p.tail_bound) << '\n';
  emit(o, os.str());
  return 0;
}

int cmd_fan(const Options& o) {
  const auto spec = BranchingSpec::fan(o.k, o.d);
  spec.validate(o.depth);
  const TreeGraph g = build_fan_graph(o.k, o.d, o.depth);
  const auto eig = sym_eigenvalues(dense_operator(g, OperatorKind::Adjacency));
  const auto roots = fan_closing_roots(o.k, o.d, o.depth);
  double worst = 0;
  for (double r : roots) {
    double best = 1e300;
    for (double e : eig) best = std::min(best, std::abs(e - r));
    worst = std::max(worst, best);
  }
  const auto certs = certify_fan(o.k, o.d, o.depth);
  std::ostringstream os;
  os << "fan k " << o.k << " d " << o.d << " depth " << o.depth << "\nnodes " << g.n_nodes() << "\nclosing_roots "
     << roots.size() << "\nworst_root_gap " << format_double(worst) << "\nmax_residual "
     << format_double(certs.max_residual) << '\n';
  bool ok = worst <= o.tol && certs.max_residual <= kCertificateTol;
  if (o.d == 2) {
    const auto cmp = compare_spectra(assemble_spectrum(BranchingSpec::constant(o.k), o.depth).clusters(),
                                     cluster_multiset(eig), o.tol);
    os << "matches_constant_tree " << (cmp.matched ? "yes" : "no") << '\n';
    ok = ok && cmp.matched;
  }
  emit(o, os.str());
  return ok ? 0 : 1;
}

int cmd_report(const Options& o) {
  const auto items = discrepancy_report();
  std::ostringstream os;
  if (o.format == "json") {
    Json j = Json::array();
    for (const auto& d : items)
      j.push_back({{"topic", d.topic}, {"instance", d.instance}, {"stated", d.stated}, {"observed", d.observed},
                   {"consistent", d.consistent}});
    os << j.dump(2) << '\n';
  } else {
    for (const auto& d : items)
      os << (d.consistent ? "ok   " : "FLAG ") << d.topic << " | " << d.instance << " | " << d.stated << " | "
         << d.observed << '\n';
  }
  emit(o, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of rooted homogeneous trees"};
  app.require_subcommand(1);
  Options o;

  auto add_spec = [&o](CLI::App* c) {
    c->add_option("--family", o.family, "constant, hat, periodic, sequence or fan");
    c->add_option("--k", o.k, "branching parameter");
    c->add_option("--d", o.d, "fan dimension");
    c->add_option("--alphas", o.alphas, "comma-separated branching numbers");
    c->add_option("--depth", o.depth, "tree depth");
    c->add_option("--operator", o.op, "adjacency, laplacian or randomwalk");
  };
  auto add_out = [&o](CLI::App* c) {
    c->add_option("--out", o.out, "output file (stdout when omitted)");
    c->add_option("--format", o.format, "json or csv");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues with multiplicities");
  add_spec(spectrum);
  add_out(spectrum);
  auto* verify = app.add_subcommand("verify", "build and check every eigenvector certificate");
  add_spec(verify);
  add_out(verify);
  auto* staircase = app.add_subcommand("staircase", "normalized spectral CDF");
  add_spec(staircase);
  add_out(staircase);
  staircase->add_option("--scheme", o.scheme, "support or paper");
  staircase->add_option("--trunc", o.trunc, "truncation index for --limiting");
  staircase->add_flag("--limiting", o.limiting, "emit the truncated limiting CDF");
  auto* endpoints = app.add_subcommand("endpoints", "plateau endpoints of the limiting CDF");
  add_spec(endpoints);
  add_out(endpoints);
  endpoints->add_option("--trunc", o.trunc, "truncation index");
  endpoints->add_option("--m-max", o.m_max, "largest first-appearance index");
  auto* compare = app.add_subcommand("oracle-compare", "compare assembled and dense spectra");
  add_spec(compare);
  add_out(compare);
  compare->add_option("--tol", o.tol, "value tolerance");
  auto* identities = app.add_subcommand("identities", "totient series partial sums");
  identities->add_option("--k", o.k, "base");
  identities->add_option("--trunc", o.trunc, "last index");
  add_out(identities);
  auto* fan = app.add_subcommand("fan", "fan closing roots against the dense spectrum");
  fan->add_option("--k", o.k, "cliques per node");
  fan->add_option("--d", o.d, "fan dimension");
  fan->add_option("--depth", o.depth, "depth");
  fan->add_option("--tol", o.tol, "root tolerance");
  add_out(fan);
  auto* report = app.add_subcommand("report", "published statements against computed values");
  std::string report_format = "text";
  report->add_option("--out", o.out, "output file (stdout when omitted)");
  report->add_option("--format", report_format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*verify) return cmd_verify(o);
    if (*staircase) return cmd_staircase(o);
    if (*endpoints) return cmd_endpoints(o);
    if (*compare) return cmd_oracle_compare(o);
    if (*identities) return cmd_identities(o);
    if (*fan) return cmd_fan(o);
    if (*report) {
      o.format = report_format;
      return cmd_report(o);
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
