#include "vrm/instance.hpp"

#include <algorithm>
#include <string>

#include "vrm/errors.hpp"

namespace vrm {
namespace {

std::string name(Role role, int id) { return (role == Role::Request ? "r" : "s") + std::to_string(id); }

void check_side(std::vector<Agent>& agents, Role role) {
  const int m = static_cast<int>(agents.size());
  std::sort(agents.begin(), agents.end(), [](const Agent& a, const Agent& b) { return a.id < b.id; });
  for (int i = 0; i < m; ++i) {
    const Agent& a = agents[static_cast<std::size_t>(i)];
    if (a.role != role) throw ValidationError(name(a.role, a.id) + " listed with the wrong role");
    if (a.id != i + 1) {
      throw ValidationError(std::string(role == Role::Request ? "request" : "server") +
                            " ids must be 1.." + std::to_string(m) + " without gaps or repeats");
    }
    if (a.arrival < 0) throw ValidationError(name(role, a.id) + " has a negative arrival");
  }
}

}  // namespace

Instance::Instance(std::vector<Agent> requests, std::vector<Agent> servers)
    : requests_(std::move(requests)), servers_(std::move(servers)) {
  if (requests_.size() != servers_.size()) throw ValidationError("cardinality mismatch");
  if (requests_.empty()) throw ValidationError("an instance needs m >= 1");
  check_side(requests_, Role::Request);
  check_side(servers_, Role::Server);
}

Rational ta_distance(const Agent& u, const Agent& v) {
  return abs(u.pos - v.pos) + abs(u.arrival - v.arrival);
}

Rational mv_distance(const Agent& request, const Rational& t) {
  if (t < request.arrival) {
    throw PreconditionError("time " + to_fraction_string(t) + " precedes the arrival of r" +
                            std::to_string(request.id));
  }
  return t - request.arrival;
}

void validate_solution(const Instance& inst, const Solution& sol) {
  const int m = inst.m();
  std::vector<unsigned char> seen_r(static_cast<std::size_t>(m), 0);
  std::vector<unsigned char> seen_s(static_cast<std::size_t>(m), 0);
  for (const MatchRecord& rec : sol.pairs) {
    const std::string pair = "(r" + std::to_string(rec.request.value) + ",s" +
                             std::to_string(rec.server.value) + ")";
    if (rec.request.value < 1 || rec.request.value > m || rec.server.value < 1 ||
        rec.server.value > m) {
      throw ValidationError("pair " + pair + " refers to an unknown agent");
    }
    if (seen_r[rec.request.index()]++ || seen_s[rec.server.index()]++) {
      throw ValidationError("pair " + pair + " reuses an agent");
    }
    const Agent& r = inst.request(rec.request);
    const Agent& s = inst.server(rec.server);
    if (rec.match_time < r.arrival || rec.match_time < s.arrival) {
      throw ValidationError("pair " + pair + " is matched before both endpoints arrived");
    }
  }
  if (sol.pairs.size() != static_cast<std::size_t>(m)) {
    throw ValidationError("solution is not a perfect matching (" + std::to_string(sol.pairs.size()) +
                          " of " + std::to_string(m) + " pairs)");
  }
}

PairCost pair_cost(const Instance& inst, const MatchRecord& rec) {
  const Agent& r = inst.request(rec.request);
  const Agent& s = inst.server(rec.server);
  return {abs(r.pos - s.pos), rec.match_time - r.arrival, rec.match_time - s.arrival};
}

CostBreakdown solution_cost(const Instance& inst, const Solution& sol) {
  validate_solution(inst, sol);
  CostBreakdown out;
  for (const MatchRecord& rec : sol.pairs) {
    const PairCost c = pair_cost(inst, rec);
    out.distance_total += c.distance;
    out.delay_total += c.delay_request + c.delay_server;
  }
  out.total = out.distance_total + out.delay_total;
  return out;
}

Rational matching_ta_cost(const Instance& inst, const PairList& pairs) {
  const int m = inst.m();
  std::vector<unsigned char> seen_r(static_cast<std::size_t>(m), 0);
  std::vector<unsigned char> seen_s(static_cast<std::size_t>(m), 0);
  Rational total;
  for (const auto& [r, s] : pairs) {
    if (r.value < 1 || r.value > m || s.value < 1 || s.value > m) {
      throw ValidationError("pair refers to an unknown agent");
    }
    if (seen_r[r.index()]++ || seen_s[s.index()]++) {
      throw ValidationError("pair (r" + std::to_string(r.value) + ",s" + std::to_string(s.value) +
                            ") repeats an agent");
    }
    total += ta_distance(inst.request(r), inst.server(s));
  }
  return total;
}

Solution earliest_solution(const Instance& inst, const PairList& pairs) {
  Solution sol;
  for (const auto& [r, s] : pairs) {
    sol.pairs.push_back({r, s, std::max(inst.request(r).arrival, inst.server(s).arrival)});
  }
  std::sort(sol.pairs.begin(), sol.pairs.end(),
            [](const MatchRecord& a, const MatchRecord& b) { return a.request < b.request; });
  return sol;
}

}  // namespace vrm
