#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lsweep/bench.hpp"

using namespace lsweep;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(LSWEEP_GOLDEN_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Csv, WavesMatchesGolden) {
  std::ostringstream out;
  write_waves_csv(out, {{0, 0.0, 5, 12, true, 3.5e-11, 0.25}, {1, 1.5, 7, 20, false, 0.01, 1.0}});
  EXPECT_EQ(out.str(), golden("waves.csv"));
}

TEST(Csv, SummaryMatchesGolden) {
  std::ostringstream out;
  SolveSummary s{64, 4096, 64.0, 1, 8, 6.5, 14.25, 0.5, 1.75, true};
  write_summary_csv(out, s);
  EXPECT_EQ(out.str(), golden("summary.csv"));
}

TEST(Csv, SparseMatchesGolden) {
  std::ostringstream out;
  write_sparse_csv(out, {{0, 0.0, "bd", 3, true, 2e-7, 42, 0.125}, {0, 0.0, "gs", 6, true, 5e-7, 42, 0.25}});
  EXPECT_EQ(out.str(), golden("sparse_bench.csv"));
}

TEST(Csv, ScalingAndFitMatchGolden) {
  std::ostringstream out;
  write_scaling_csv(out, {{64, 4096, 64.0, 1, 0.5, 0.25, 6, 12, 2}, {128, 16384, 128.0, 3, 2.0, 1.0, 6.5, 14, 2.5}});
  EXPECT_EQ(out.str(), golden("scaling.csv"));
  std::ostringstream fit;
  write_fit_csv(fit, {{"offline_seconds", 1.0, -8.5}});
  EXPECT_EQ(fit.str(), golden("scaling_fit.csv"));
}

TEST(Csv, FieldMatchesGolden) {
  std::ostringstream out;
  const Grid g = make_grid(4, 4, 0.25, 1.0);
  Field u(16);
  for (int k = 0; k < 16; ++k) u[k] = cplx(k, -0.5 * k);
  write_field_csv(out, g, u);
  EXPECT_EQ(out.str(), golden("field.csv"));
}

TEST(Csv, EveryRowCarriesTheSchemaTag) {
  std::ostringstream out;
  write_waves_csv(out, {{0, 0.0, 1, 1, true, 0, 0}});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.substr(0, 7), "schema,");
  EXPECT_EQ(row.substr(0, row.find(',')), kCsvSchema);
}

TEST(Bench, FitAndMedian) {
  const ScalingFit f = loglog_fit("x", {1, 10, 100}, {3, 30, 300});
  EXPECT_NEAR(f.slope, 1.0, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_THROW(loglog_fit("x", {1}, {1}), std::invalid_argument);
  EXPECT_THROW(loglog_fit("x", {1, 2}, {1, 0}), std::invalid_argument);
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(5, 2, [](int i) { if (i == 3) throw std::runtime_error("x"); }), std::runtime_error);
}
