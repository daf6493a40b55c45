#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "vrm/errors.hpp"
#include "vrm/generate.hpp"
#include "vrm/report.hpp"

namespace vrm {
namespace {

TEST(MGrid, ListsAndProgressions) {
  EXPECT_EQ(parse_m_grid("4,8,16"), (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(parse_m_grid("4,8,...,1024"), (std::vector<int>{4, 8, 16, 32, 64, 128, 256, 512, 1024}));
  EXPECT_EQ(parse_m_grid("2,5,...,11"), (std::vector<int>{2, 5, 8, 11}));
  EXPECT_EQ(parse_m_grid("1,2,3,...,6"), (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(parse_m_grid("7"), (std::vector<int>{7}));
}

TEST(MGrid, RejectsMalformedGrids) {
  for (const char* bad : {"", "4,...", "4,8,...", "8,4,...,64", "4,8,...,100", "0,1", "a,b", "4,...,8,16"}) {
    EXPECT_THROW(parse_m_grid(bad), ConfigError) << bad;
  }
}

TEST(CostRatio, ZeroOverZeroIsOne) {
  EXPECT_EQ(cost_ratio(Rational(0), Rational(0)), Rational(1));
  EXPECT_EQ(cost_ratio(Rational(3), Rational(0)), std::nullopt);
  EXPECT_EQ(cost_ratio(Rational(33), Rational(11)), Rational(3));
}

TEST(NormalizedRatio, Formula) {
  EXPECT_NEAR(normalized_ratio(Rational(3), 4), 3.0 / (2.0 * std::pow(std::log(6.0), 2)), 1e-12);
}

TEST(ScalingCsv, RoundTrip) {
  const std::vector<ScalingRow> rows{
      {"uniform", 4, 20, Rational(7, 3), Rational(3, 2), normalized_ratio(Rational(7, 3), 4)},
      {"poisson", 1024, 20, Rational(101, 100), Rational(1), normalized_ratio(Rational(101, 100), 1024)}};
  std::ostringstream out;
  write_scaling_csv(out, rows, std::nullopt);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("schema_version,family,m,instances,max_ratio,mean_ratio,normalized\n", 0), 0u);
  const auto back = read_scaling_csv(text);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k].family, rows[k].family);
    EXPECT_EQ(back[k].m, rows[k].m);
    EXPECT_EQ(back[k].max_ratio, rows[k].max_ratio);
    EXPECT_EQ(back[k].mean_ratio, rows[k].mean_ratio);
    EXPECT_NEAR(back[k].normalized, rows[k].normalized, 1e-8 * rows[k].normalized);
  }
  EXPECT_THROW(read_scaling_csv("schema_version,family\n2,uniform\n"), ParseError);
}

TEST(Scaling, SeedsAreDistinctPerPoint) {
  EXPECT_NE(scaling_seed(0, Family::Uniform, 4, 0), scaling_seed(0, Family::Uniform, 4, 1));
  EXPECT_NE(scaling_seed(0, Family::Uniform, 4, 0), scaling_seed(0, Family::Poisson, 4, 0));
  EXPECT_NE(scaling_seed(0, Family::Uniform, 4, 0), scaling_seed(0, Family::Uniform, 8, 0));
  EXPECT_EQ(scaling_seed(5, Family::Clustered, 16, 3), scaling_seed(5, Family::Clustered, 16, 3));
}

TEST(Scaling, SmallSweepIsDeterministic) {
  ScalingConfig cfg;
  cfg.m_grid = {2, 4};
  cfg.per_point = 3;
  cfg.seed = 8;
  const auto a = run_scaling(cfg);
  const auto b = run_scaling(cfg);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].max_ratio, b[k].max_ratio);
    EXPECT_GE(a[k].max_ratio, 1);
    EXPECT_LE(a[k].mean_ratio, a[k].max_ratio);
    EXPECT_EQ(a[k].instances, 3);
  }
}

TEST(Report, TwoByTwo) {
  const RunReport rep = report_instance(test::two_by_two(), Gamma::standard(), {.audit = true});
  EXPECT_EQ(rep.cost_vrm, Rational(33));
  EXPECT_EQ(rep.cost_opt, Rational(11));
  EXPECT_EQ(rep.cost_greedy, Rational(22));
  EXPECT_EQ(rep.ratio, Rational(3));
  EXPECT_EQ(rep.total_phi, Rational(33));
  EXPECT_EQ(rep.audit_ok, true);
  const std::string json = run_report_json(rep, std::nullopt);
  EXPECT_NE(json.find("\"33/1\""), std::string::npos);
}

TEST(Report, CompareTable) {
  const auto rows = compare_algorithms(test::two_by_two(), Gamma::standard());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].algorithm, "vrm");
  EXPECT_EQ(rows[1].cost, Rational(11));
  EXPECT_EQ(rows[2].ratio, Rational(2));
  std::ostringstream out;
  write_compare_table(out, rows, 2);
  EXPECT_NE(out.str().find("33.00"), std::string::npos);
}

TEST(Report, OptMethodsAndSuites) {
  EXPECT_EQ(parse_opt_method("hungarian"), OptMethod::Hungarian);
  EXPECT_THROW(parse_opt_method("simplex"), ConfigError);
  EXPECT_EQ(parse_suite("full"), Suite::Full);
  EXPECT_THROW(parse_suite("huge"), ConfigError);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(suite_case(Suite::Small, 1, k).m, 8);
    EXPECT_LE(suite_case(Suite::Full, 1, k).m, 16);
  }
}

TEST(Suite, SmallRunIsClean) {
  const AuditReport rep = run_suite(Suite::Small, 3, 12, Gamma::standard());
  EXPECT_TRUE(rep.ok()) << rep.error;
  EXPECT_GT(rep.checks.at(check::kDifferential).checks, 0u);
}

}  // namespace
}  // namespace vrm
