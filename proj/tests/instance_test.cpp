#include <gtest/gtest.h>

#include "support.hpp"
#include "vrm/errors.hpp"
#include "vrm/instance.hpp"

namespace vrm {
namespace {

using test::q;

Agent req(int id, const char* pos, const char* arr) { return {id, Role::Request, q(pos), q(arr)}; }
Agent srv(int id, const char* pos, const char* arr) { return {id, Role::Server, q(pos), q(arr)}; }

TEST(TaDistance, DefinitionExamples) {
  EXPECT_EQ(ta_distance(req(1, "0", "0"), srv(1, "2", "1")), Rational(3));
  EXPECT_EQ(ta_distance(req(1, "7", "3"), req(2, "7", "3")), Rational(0));
  EXPECT_EQ(ta_distance(req(1, "-5", "2"), srv(1, "1", "0")), Rational(8));
}

TEST(TaDistance, IsSymmetricAndExact) {
  const Agent a = req(1, "1/3", "2/7");
  const Agent b = srv(1, "-1/6", "5");
  EXPECT_EQ(ta_distance(a, b), ta_distance(b, a));
  EXPECT_EQ(ta_distance(a, b), Rational(1, 2) + Rational(33, 7));
}

TEST(MvDistance, WaitingTime) {
  EXPECT_EQ(mv_distance(req(1, "0", "2"), q("5")), Rational(3));
  EXPECT_EQ(mv_distance(req(1, "0", "0"), q("0")), Rational(0));
  EXPECT_EQ(mv_distance(req(1, "0", "1/3"), q("4/3")), Rational(1));
}

TEST(MvDistance, RejectsTimeBeforeArrival) {
  EXPECT_THROW(mv_distance(req(1, "0", "2"), q("1")), PreconditionError);
}

TEST(SolutionCost, SinglePairWithDelay) {
  const Instance inst = test::single_pair();
  const Solution sol{{{RequestId(1), ServerId(1), q("4")}}};
  const CostBreakdown c = solution_cost(inst, sol);
  EXPECT_EQ(c.distance_total, Rational(4));
  EXPECT_EQ(c.delay_total, Rational(8));
  EXPECT_EQ(c.total, Rational(12));
}

TEST(SolutionCost, SinglePairWithoutDelay) {
  const Solution sol{{{RequestId(1), ServerId(1), q("0")}}};
  EXPECT_EQ(solution_cost(test::single_pair(), sol).total, Rational(4));
}

TEST(SolutionCost, TwoPairsMatchesTermwiseOracle) {
  const Instance inst = test::two_by_two();
  const Solution sol{{{RequestId(1), ServerId(1), q("1")}, {RequestId(2), ServerId(2), q("10")}}};
  EXPECT_EQ(test::oracle_cost(inst, sol), Rational(33));
  EXPECT_EQ(solution_cost(inst, sol).total, Rational(33));
  const PairCost p = pair_cost(inst, sol.pairs[1]);
  EXPECT_EQ(p.distance, Rational(10));
  EXPECT_EQ(p.delay_request, Rational(10));
  EXPECT_EQ(p.delay_server, Rational(10));
}

TEST(SolutionCost, RejectsNonPerfectMatching) {
  const Instance inst = test::two_by_two();
  const Solution one{{{RequestId(1), ServerId(1), q("1")}}};
  EXPECT_THROW(solution_cost(inst, one), ValidationError);
  const Solution twice{{{RequestId(1), ServerId(1), q("1")}, {RequestId(2), ServerId(1), q("1")}}};
  EXPECT_THROW(solution_cost(inst, twice), ValidationError);
}

TEST(SolutionCost, RejectsMatchBeforeArrivalNamingThePair) {
  const Instance inst = test::make_instance({{"0", "0"}}, {{"4", "3"}});
  const Solution early{{{RequestId(1), ServerId(1), q("2")}}};
  try {
    validate_solution(inst, early);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(r1,s1)"), std::string::npos);
  }
}

TEST(MatchingTaCost, Examples) {
  const Instance inst = test::single_pair();
  EXPECT_EQ(matching_ta_cost(inst, {{RequestId(1), ServerId(1)}}), Rational(4));
  const Instance other = test::make_instance({{"0", "0"}}, {{"2", "1"}});
  EXPECT_EQ(matching_ta_cost(other, {{RequestId(1), ServerId(1)}}), Rational(3));
  const Instance two = test::two_by_two();
  EXPECT_EQ(matching_ta_cost(two, {{RequestId(1), ServerId(1)}, {RequestId(2), ServerId(2)}}),
            Rational(11));
  EXPECT_EQ(matching_ta_cost(two, {{RequestId(1), ServerId(2)}, {RequestId(2), ServerId(1)}}),
            Rational(11));
}

TEST(MatchingTaCost, RejectsRepeatedAgent) {
  const Instance two = test::two_by_two();
  EXPECT_THROW(matching_ta_cost(two, {{RequestId(1), ServerId(1)}, {RequestId(1), ServerId(2)}}),
               ValidationError);
}

TEST(Instance, ValidatesShape) {
  EXPECT_THROW(Instance({req(1, "0", "0"), req(2, "0", "0")}, {srv(1, "0", "0")}), ValidationError);
  EXPECT_THROW(Instance({req(1, "0", "-1")}, {srv(1, "0", "0")}), ValidationError);
  EXPECT_THROW(Instance({req(2, "0", "0")}, {srv(1, "0", "0")}), ValidationError);
  EXPECT_THROW(Instance({}, {}), ValidationError);
  const Instance ok({req(2, "1", "0"), req(1, "0", "0")}, {srv(1, "0", "0"), srv(2, "0", "0")});
  EXPECT_EQ(ok.request(RequestId(1)).pos, Rational(0));
}

TEST(EarliestSolution, MatchesAtLaterArrival) {
  const Instance inst = test::make_instance({{"0", "2"}}, {{"4", "5"}});
  const Solution sol = earliest_solution(inst, {{RequestId(1), ServerId(1)}});
  EXPECT_EQ(sol.pairs.at(0).match_time, Rational(5));
}

}  // namespace
}  // namespace vrm
