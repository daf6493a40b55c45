#pragma once
// Shared fixtures and independent oracles for the test suites. Nothing here
// reuses the engine's dual machinery.

#include <string>
#include <utility>
#include <vector>

#include "vrm/engine.hpp"
#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"
#include "vrm/rational.hpp"

namespace vrm::test {

inline Rational q(const std::string& text) { return parse_rational(text); }

// (pos, arrival) pairs given as exact strings.
using Spot = std::pair<std::string, std::string>;
Instance make_instance(const std::vector<Spot>& requests, const std::vector<Spot>& servers);

// The m=1 instance r(0,0), s(4,0).
Instance single_pair();
// r1(0,0), r2(0,0), s1(1,0), s2(10,0).
Instance two_by_two();

// Sum over pairs of |dx| + (t - a_r) + (t - a_s), accumulated term by term.
Rational oracle_cost(const Instance& inst, const Solution& sol);

// Net cost evaluated edge by edge from coordinates; a trailing MV vertex
// contributes gamma*(t - a(owner)).
Rational oracle_net_cost(const Instance& inst, const std::vector<Vertex>& path,
                         const Rational& gamma, const Rational& t = Rational(0));

// Minimum TA cost over all m! assignments via std::next_permutation.
Rational oracle_opt(const Instance& inst);

struct NaiveResult {
  Solution solution;
  std::vector<Rational> phi;  // by request id - 1, net cost when matched
};

// Dual-free simulation: after every event each free request's minimum
// net-cost augmenting path is recomputed by exhaustive enumeration; a
// request fires once gamma*(t - a) reaches it. Same event order as the
// engine. Intended for m <= 6.
NaiveResult naive_vrm(const Instance& inst, const Rational& gamma);

}  // namespace vrm::test
