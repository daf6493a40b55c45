#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vrm/ids.hpp"
#include "vrm/rational.hpp"

namespace vrm {

// A request or server: a point on the line that appears at `arrival`.
struct Agent {
  int id = 0;
  Role role = Role::Request;
  Rational pos;
  Rational arrival;

  friend bool operator==(const Agent&, const Agent&) = default;
};

// m requests and m servers with ids 1..m per role. Immutable once built.
class Instance {
 public:
  Instance() = default;
  // Validates cardinality, id density and arrival >= 0; stores agents sorted by id.
  Instance(std::vector<Agent> requests, std::vector<Agent> servers);

  int m() const { return static_cast<int>(requests_.size()); }
  const Agent& request(RequestId r) const { return requests_.at(r.index()); }
  const Agent& server(ServerId s) const { return servers_.at(s.index()); }
  std::span<const Agent> requests() const { return requests_; }
  std::span<const Agent> servers() const { return servers_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<Agent> requests_;
  std::vector<Agent> servers_;
};

struct MatchRecord {
  RequestId request;
  ServerId server;
  Rational match_time;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// A perfect matching with match times, sorted by request id.
struct Solution {
  std::vector<MatchRecord> pairs;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct PairCost {
  Rational distance;
  Rational delay_request;
  Rational delay_server;

  Rational total() const { return distance + delay_request + delay_server; }
};

struct CostBreakdown {
  Rational distance_total;
  Rational delay_total;
  Rational total;
};

using PairList = std::vector<std::pair<RequestId, ServerId>>;

// Manhattan distance in the (position, arrival) plane.
Rational ta_distance(const Agent& u, const Agent& v);

// Distance between a request and its moving virtual server at time t: t - a(r).
Rational mv_distance(const Agent& request, const Rational& t);

// Throws ValidationError naming the first offending pair.
void validate_solution(const Instance& inst, const Solution& sol);

PairCost pair_cost(const Instance& inst, const MatchRecord& rec);
CostBreakdown solution_cost(const Instance& inst, const Solution& sol);

// Sum of ta_distance over pairs. Throws ValidationError on a repeated agent.
Rational matching_ta_cost(const Instance& inst, const PairList& pairs);

// The solution that matches every pair at max(a(r), a(s)).
Solution earliest_solution(const Instance& inst, const PairList& pairs);

}  // namespace vrm
