#include <gtest/gtest.h>

#include <sstream>

#include "bethe/io.hpp"

using namespace bethe;

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.0, -0.0, 1.0 / 3, std::sqrt(2.0), -1e-300, 6.02214076e23, 2.718281828459045})
    EXPECT_EQ(parse_double(format_double(v)), v);
  EXPECT_THROW(parse_double("1.5x"), SpecError);
  EXPECT_THROW(parse_double(""), SpecError);
}

TEST(Io, SpecRoundTrip) {
  for (const auto& s : {BranchingSpec::constant(3), BranchingSpec::hat(4), BranchingSpec::periodic({2, 3, 4}),
                        BranchingSpec::sequence({2, 3, 5}), BranchingSpec::fan(2, 3)})
    EXPECT_EQ(spec_from_json(spec_to_json(s)), s);
  EXPECT_THROW(spec_from_json(Json{{"family", "cube"}}), SpecError);
  EXPECT_THROW(spec_from_json(Json{{"family", "hat"}}), SpecError);
}

TEST(Io, PolynomialRoundTrip) {
  const Polynomial p = Polynomial{-4, -1, 1} * Polynomial{123456789, 0, 0, -987654321} * Polynomial{123456789, 1};
  const auto j = polynomial_to_json(p);
  EXPECT_TRUE(j[0].is_string());
  EXPECT_EQ(polynomial_from_json(j), p);
  EXPECT_EQ(polynomial_to_json(Polynomial{}).dump(), "[]");
  EXPECT_EQ(polynomial_to_json(Polynomial{-2, 0, 1}).dump(), R"(["-2","0","1"])");
  EXPECT_THROW(polynomial_from_json(Json::array({1, 2})), SpecError);
  EXPECT_THROW(polynomial_from_json(Json::array({"1", "two"})), SpecError);
}

TEST(Io, SpectrumJsonRoundTrip) {
  const auto rep = assemble_spectrum(BranchingSpec::hat(3), 3);
  const auto back = spectrum_from_json(Json::parse(spectrum_to_json(rep).dump()));
  EXPECT_EQ(back.spec, rep.spec);
  EXPECT_EQ(back.depth, rep.depth);
  EXPECT_EQ(back.total_dim, rep.total_dim);
  ASSERT_EQ(back.entries.size(), rep.entries.size());
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].value, rep.entries[i].value);
    EXPECT_EQ(back.entries[i].multiplicity, rep.entries[i].multiplicity);
    EXPECT_EQ(back.entries[i].source.first_index, rep.entries[i].source.first_index);
    EXPECT_EQ(back.entries[i].source.family_label, rep.entries[i].source.family_label);
  }
  EXPECT_THROW(spectrum_from_json(Json{{"depth", 2}}), SpecError);
}

TEST(Io, SpectrumCsvRoundTrip) {
  const auto rep = assemble_spectrum(BranchingSpec::constant(2), 5);
  std::stringstream ss;
  write_spectrum_csv(ss, rep);
  EXPECT_EQ(ss.str().substr(0, 22), "value,mult,first_index");
  const auto rows = read_spectrum_csv(ss);
  ASSERT_EQ(rows.size(), rep.entries.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].value, rep.entries[i].value);
    EXPECT_EQ(rows[i].mult, rep.entries[i].multiplicity);
    EXPECT_EQ(rows[i].first_index, rep.entries[i].source.first_index);
  }
}

TEST(Io, CsvErrors) {
  std::stringstream bad_header("v,m\n1,2\n");
  EXPECT_THROW(read_spectrum_csv(bad_header), SpecError);
  std::stringstream short_row("value,mult,first_index\n1,2\n");
  EXPECT_THROW(read_spectrum_csv(short_row), SpecError);
}

TEST(Io, CdfCsvRoundTrip) {
  const auto cdf = normalize_spectrum(assemble_spectrum(BranchingSpec::constant(3), 4));
  std::stringstream ss;
  write_cdf_csv(ss, cdf);
  const auto rows = read_cdf_csv(ss);
  ASSERT_EQ(rows.size(), cdf.points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].first, cdf.points[i].x);
    EXPECT_EQ(rows[i].second, cdf.cumulative[i]);
  }
}

TEST(Io, CdfJsonShape) {
  const auto lim = limiting_cdf(BranchingSpec::constant(2), 10);
  const auto j = cdf_to_json(lim);
  EXPECT_EQ(j["kind"], "limiting");
  EXPECT_EQ(j["truncation"], 10);
  EXPECT_EQ(j["points"].size(), lim.points.size());
  EXPECT_FALSE(j.contains("depth"));
}

TEST(Io, EndpointsJsonRoundTrip) {
  std::vector<EndpointRecord> recs;
  for (int a : {1, 2}) recs.push_back(staircase_endpoints(BranchingSpec::constant(2), 3, a, 40));
  const auto back = endpoints_from_json(Json::parse(endpoints_to_json(recs).dump()));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].m, recs[i].m);
    EXPECT_EQ(back[i].a, recs[i].a);
    EXPECT_EQ(back[i].left, recs[i].left);
    EXPECT_EQ(back[i].right, recs[i].right);
    EXPECT_EQ(back[i].tail_bound, recs[i].tail_bound);
  }
}
