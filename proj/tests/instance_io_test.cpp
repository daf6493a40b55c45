#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "support.hpp"
#include "vrm/errors.hpp"
#include "vrm/generate.hpp"
#include "vrm/instance_io.hpp"

namespace vrm {
namespace {

std::string parse_error_path(const std::string& text) {
  try {
    read_instance(text);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(InstanceIo, ReadsMinimalInstance) {
  const Instance inst = read_instance(
      R"({"m":1,"requests":[{"id":1,"pos":"0","arrival":"0"}],"servers":[{"id":1,"pos":"4","arrival":"0"}]})");
  EXPECT_EQ(inst.m(), 1);
  EXPECT_EQ(inst.server(ServerId(1)).pos, Rational(4));
}

TEST(InstanceIo, AcceptsFractionsAndIntegers) {
  const Instance inst = read_instance(
      R"({"requests":[{"id":1,"pos":"-1/3","arrival":2}],"servers":[{"id":1,"pos":"0.25","arrival":"7/2"}]})");
  EXPECT_EQ(inst.request(RequestId(1)).pos, Rational(-1, 3));
  EXPECT_EQ(inst.request(RequestId(1)).arrival, Rational(2));
  EXPECT_EQ(inst.server(ServerId(1)).pos, Rational(1, 4));
  EXPECT_EQ(inst.server(ServerId(1)).arrival, Rational(7, 2));
}

TEST(InstanceIo, CardinalityMismatch) {
  try {
    read_instance(R"({"requests":[{"id":1,"pos":"0","arrival":"0"},{"id":2,"pos":"0","arrival":"0"}],
                      "servers":[{"id":1,"pos":"0","arrival":"0"}]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("cardinality mismatch"), std::string::npos);
  }
}

TEST(InstanceIo, ErrorsCarryTheFieldPath) {
  EXPECT_EQ(parse_error_path(
                R"({"requests":[{"id":1,"pos":"0","arrival":"0"},{"id":2,"pos":"0","arrival":"-1"}],
                    "servers":[{"id":1,"pos":"0","arrival":"0"},{"id":2,"pos":"0","arrival":"0"}]})"),
            "/requests/1/arrival");
  EXPECT_EQ(parse_error_path(
                R"({"requests":[{"id":1,"pos":"zero","arrival":"0"}],"servers":[{"id":1,"pos":"0","arrival":"0"}]})"),
            "/requests/0/pos");
  EXPECT_EQ(parse_error_path(
                R"({"requests":[{"id":1,"pos":"0","arrival":"0"}],"servers":[{"id":1,"pos":0.5,"arrival":"0"}]})"),
            "/servers/0/pos");
  EXPECT_EQ(parse_error_path(R"({"requests":[{"id":1,"pos":"0"}],"servers":[]})"), "/requests/0/arrival");
  EXPECT_EQ(parse_error_path(R"({"requests":[],"servers":[]})"), "");
  EXPECT_THROW(read_instance("{not json"), ParseError);
  EXPECT_THROW(read_instance("[1,2]"), ParseError);
}

TEST(InstanceIo, RoundTripsARandomHundredAgentInstance) {
  std::mt19937_64 rng(20261017);
  std::uniform_int_distribution<int> num(-5000, 5000), den(1, 97), arr(0, 9000);
  std::vector<Agent> rs, ss;
  for (int i = 1; i <= 50; ++i) {
    rs.push_back({i, Role::Request, Rational(num(rng), den(rng)), Rational(arr(rng), den(rng))});
    ss.push_back({i, Role::Server, Rational(num(rng), den(rng)), Rational(arr(rng), den(rng))});
  }
  const Instance inst(rs, ss);
  const std::string text = write_instance(inst);
  EXPECT_EQ(read_instance(text), inst);
  EXPECT_EQ(write_instance(read_instance(text)), text);
}

TEST(InstanceIo, FileRoundTripAndMissingFile) {
  const Instance inst = generate({Family::Clustered, 12, 5});
  const auto path = std::filesystem::temp_directory_path() / "vrm_io_roundtrip.json";
  save_instance(inst, path.string());
  EXPECT_EQ(load_instance(path.string()), inst);
  std::filesystem::remove(path);
  EXPECT_THROW(load_instance(path.string()), IoError);
}

TEST(SolutionIo, RoundTripsPairsAndReportsBreakdown) {
  const Instance inst = test::two_by_two();
  const Solution sol{{{RequestId(1), ServerId(1), Rational(1)}, {RequestId(2), ServerId(2), Rational(10)}}};
  const std::string text = write_solution(inst, sol);
  EXPECT_EQ(read_solution(text), sol);
  EXPECT_NE(text.find("\"total\": \"33/1\""), std::string::npos);
  EXPECT_NE(write_solution(inst, sol, 2).find("\"total\": \"33.00\""), std::string::npos);
}

}  // namespace
}  // namespace vrm
