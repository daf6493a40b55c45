#include <gtest/gtest.h>

#include "support.hpp"
#include "vrm/audit.hpp"
#include "vrm/engine.hpp"
#include "vrm/generate.hpp"
#include "vrm/lattice.hpp"
#include "vrm/slack_duals.hpp"

namespace vrm {
namespace {

GenSpec small_case(std::uint64_t seed, int max_m) {
  GenSpec spec{static_cast<Family>(seed % 4), 1 + static_cast<int>((seed / 4) % static_cast<std::uint64_t>(max_m)),
               seed};
  // Coarse grids produce ties and simultaneous arrivals.
  spec.resolution = seed % 3 == 0 ? 1 : (seed % 3 == 1 ? 4 : 1000);
  spec.pos_range = Rational(seed % 5 == 0 ? 6 : 100);
  spec.horizon = Rational(seed % 5 == 0 ? 3 : 100);
  return spec;
}

class DualAuditor : public EngineObserver {
 public:
  DualAuditor(const Instance& inst, const Gamma& gamma) : metric_(inst, gamma) {}
  void after_dual_update(const EngineSnapshot& s) override { audit(s); }
  void after_event(const EngineSnapshot& s) override { audit(s); }

  int audits = 0;
  std::vector<std::string> failures;

 private:
  void audit(const EngineSnapshot& s) {
    ++audits;
    const InvariantReport rep = check_invariants(metric_, s.duals, s.m_off, s.now);
    for (const auto& v : rep.violations) failures.push_back(to_string(v.kind) + " " + v.detail);
  }
  RationalMetric metric_;
};

TEST(Property, EngineEqualsNaiveSimulation) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = generate(small_case(seed, 6));
    const Rational g = seed % 2 ? Rational(3) : Rational(7, 4);
    const RunResult res = run(inst, Gamma(g));
    const auto naive = test::naive_vrm(inst, g);
    ASSERT_EQ(res.solution, naive.solution) << "seed " << seed;
    for (int i = 0; i < inst.m(); ++i) {
      EXPECT_EQ(res.trace.matches[static_cast<std::size_t>(i)].phi, naive.phi[static_cast<std::size_t>(i)])
          << "seed " << seed << " r" << i + 1;
    }
  }
}

TEST(Property, DualInvariantsAfterEveryEvent) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = generate(small_case(seed, 12));
    DualAuditor auditor(inst, Gamma::standard());
    run(inst, Gamma::standard(), {.observer = &auditor});
    EXPECT_GT(auditor.audits, 0);
    EXPECT_TRUE(auditor.failures.empty()) << "seed " << seed << ": " << auditor.failures.front();
  }
}

TEST(Property, MatchTimesAndPhi) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = generate(small_case(seed, 16));
    const Gamma gamma = Gamma::standard();
    const RunResult res = run(inst, gamma);
    Rational sum(0);
    for (const RequestRecord& rec : res.trace.matches) {
      const Rational waited = res.solution.pairs[rec.request.index()].match_time - inst.request(rec.request).arrival;
      EXPECT_GE(rec.phi, 0) << seed;
      // A request is matched exactly when gamma * waiting time reaches its phi.
      EXPECT_EQ(gamma.value() * waited, rec.phi) << seed;
      EXPECT_GE(res.solution.pairs[rec.request.index()].match_time, inst.server(rec.server).arrival) << seed;
      sum += rec.phi;
    }
    EXPECT_EQ(sum, res.trace.total_phi());
    // The online cost never beats OPT; cost and TA distance are bounded by sum phi.
    const CostBreakdown c = solution_cost(inst, res.solution);
    if (inst.m() <= 7) {
      EXPECT_GE(c.total, test::oracle_opt(inst)) << seed;
    }
    PairList pairs;
    for (const MatchRecord& rec : res.solution.pairs) pairs.emplace_back(rec.request, rec.server);
    const Rational d = matching_ta_cost(inst, pairs);
    EXPECT_LE(c.total, d + Rational(2) / gamma.value() * sum) << seed;
    EXPECT_LE(d, Rational(2) / (gamma.value() - 1) * sum) << seed;
  }
}

TEST(Property, AuditSuiteOnSmallInstances) {
  AuditReport total;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = generate(small_case(seed, 7));
    total.merge(audit_instance(inst), 5);
  }
  for (const auto& [name, tally] : total.checks) {
    EXPECT_TRUE(tally.ok()) << name << ": " << (tally.messages.empty() ? "" : tally.messages.front());
  }
  EXPECT_TRUE(total.error.empty()) << total.error;
}

}  // namespace
}  // namespace vrm
