#include "vrm/oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <type_traits>

#include "vrm/errors.hpp"
#include "vrm/hungarian.hpp"
#include "vrm/lattice.hpp"

namespace vrm {
namespace {

class Enumerator {
 public:
  Enumerator(const Instance& inst, const Matching& m_off, const Gamma& gamma,
             const EnumerationQuery& q, const OracleConfig& config)
      : inst_(inst), m_off_(m_off), gamma_(gamma.value()), q_(q), config_(config), m_(inst.m()) {
    dist_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        dist_[static_cast<std::size_t>(i)].push_back(
            ta_distance(inst.request(RequestId(i + 1)), inst.server(ServerId(j + 1))));
      }
    }
    usable_.assign(static_cast<std::size_t>(m_), q.include_unarrived_terminals ? 1 : 0);
    arrived_.assign(static_cast<std::size_t>(m_), 0);
    for (ServerId s : q.arrived_servers) {
      usable_.at(s.index()) = 1;
      arrived_.at(s.index()) = 1;
    }
    on_path_r_.assign(static_cast<std::size_t>(m_), 0);
    on_path_s_.assign(static_cast<std::size_t>(m_), 0);
  }

  EnumerationResult run() {
    path_.push_back(Vertex::request(q_.source));
    on_path_r_[q_.source.index()] = 1;
    visit(q_.source, Rational(0), Rational(0));
    return std::move(result_);
  }

 private:
  const Rational& d(RequestId r, ServerId s) const { return dist_[r.index()][s.index()]; }

  void complete(Rational phi, bool counts_for_best) {
    if (++result_.paths > config_.max_enumerated_paths) {
      throw CapacityError("path enumeration exceeded its cap");
    }
    if (!result_.min_phi_all || phi < *result_.min_phi_all) result_.min_phi_all = phi;
    if (counts_for_best && (!result_.phi || phi < *result_.phi)) {
      result_.phi = std::move(phi);
      result_.best = AugPath(path_);
    }
  }

  // forward: sum of D over r->s edges so far; backward: over s->r edges.
  void visit(RequestId r, const Rational& forward, const Rational& backward) {
    const auto mate = m_off_.mate(r);
    for (int j = 1; j <= m_; ++j) {
      const ServerId s(j);
      if (!usable_[s.index()] || on_path_s_[s.index()] || (mate && *mate == s)) continue;
      const Rational f = forward + d(r, s);
      path_.push_back(Vertex::server(s));
      on_path_s_[s.index()] = 1;
      if (auto next = m_off_.mate(s)) {
        if (!on_path_r_[next->index()]) {
          path_.push_back(Vertex::request(*next));
          on_path_r_[next->index()] = 1;
          visit(*next, f, backward + d(*next, s));
          on_path_r_[next->index()] = 0;
          path_.pop_back();
        }
      } else if (!q_.virtual_paths) {
        complete(gamma_ * f - backward, arrived_[s.index()] != 0);
      }
      on_path_s_[s.index()] = 0;
      path_.pop_back();
    }
    if (q_.virtual_paths) {
      path_.push_back(Vertex::mv_server(r));
      complete(gamma_ * forward - backward + gamma_ * mv_distance(inst_.request(r), q_.time), true);
      path_.pop_back();
    }
  }

  const Instance& inst_;
  const Matching& m_off_;
  Rational gamma_;
  const EnumerationQuery& q_;
  const OracleConfig& config_;
  int m_;
  std::vector<std::vector<Rational>> dist_;
  std::vector<unsigned char> usable_;
  std::vector<unsigned char> arrived_;
  std::vector<unsigned char> on_path_r_;
  std::vector<unsigned char> on_path_s_;
  std::vector<Vertex> path_;
  EnumerationResult result_;
};

template <class Int>
std::vector<int> lattice_assignment(const Instance& inst, std::span<const RequestId> requests,
                                    std::span<const ServerId> servers) {
  const LatticeMetric<Int> metric(inst, Gamma::standard());
  if constexpr (std::is_same_v<Int, Checked64>) {
    std::vector<std::int64_t> flat;
    flat.reserve(requests.size() * servers.size());
    for (RequestId r : requests) {
      for (ServerId s : servers) flat.push_back(metric.scaled_distance(r, s).value());
    }
    return hungarian_assignment_int64(flat, static_cast<int>(requests.size()));
  }
  std::vector<std::vector<Int>> cost(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    cost[i].reserve(servers.size());
    for (ServerId s : servers) cost[i].push_back(metric.scaled_distance(requests[i], s));
  }
  return hungarian_assignment(cost);
}

std::vector<int> exact_assignment(const Instance& inst, std::span<const RequestId> requests,
                                  std::span<const ServerId> servers) {
  try {
    return lattice_assignment<Checked64>(inst, requests, servers);
  } catch (const LatticeOverflow&) {
    return lattice_assignment<BigInt>(inst, requests, servers);
  }
}

OptResult from_assignment(const Instance& inst, const std::vector<int>& col_of_row) {
  OptResult out;
  for (std::size_t i = 0; i < col_of_row.size(); ++i) {
    out.pairs.emplace_back(RequestId(static_cast<int>(i) + 1), ServerId(col_of_row[i] + 1));
  }
  out.cost = matching_ta_cost(inst, out.pairs);
  return out;
}

std::vector<RequestId> all_requests(int m) {
  std::vector<RequestId> out;
  for (int i = 1; i <= m; ++i) out.emplace_back(i);
  return out;
}

std::vector<ServerId> all_servers(int m) {
  std::vector<ServerId> out;
  for (int i = 1; i <= m; ++i) out.emplace_back(i);
  return out;
}

}  // namespace

EnumerationResult enumerate_min_aug_path(const Instance& inst, const Matching& m_off,
                                         const Gamma& gamma, const EnumerationQuery& query,
                                         const OracleConfig& config) {
  if (inst.m() > config.max_m_bruteforce) {
    throw CapacityError("path enumeration is limited to m <= " +
                        std::to_string(config.max_m_bruteforce));
  }
  if (m_off.saturated(query.source)) throw PreconditionError("enumeration source is saturated");
  EnumerationResult res = Enumerator(inst, m_off, gamma, query, config).run();
  if (res.best) {
    const Rational check = query.virtual_paths ? virtual_net_cost(inst, *res.best, query.time, gamma)
                                               : net_cost(inst, *res.best, gamma);
    if (check != *res.phi) throw InvariantError("incremental path cost disagrees with net_cost");
  }
  return res;
}

OptResult opt_bruteforce(const Instance& inst, const OracleConfig& config) {
  const int m = inst.m();
  if (m > config.max_m_bruteforce) {
    throw CapacityError("brute-force OPT is limited to m <= " + std::to_string(config.max_m_bruteforce));
  }
  std::vector<std::vector<Rational>> dist(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      dist[static_cast<std::size_t>(i)].push_back(
          ta_distance(inst.request(RequestId(i + 1)), inst.server(ServerId(j + 1))));
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Rational> best;
  std::vector<int> best_perm;
  do {
    Rational total;
    for (int i = 0; i < m; ++i) {
      total += dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    if (!best || total < *best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return from_assignment(inst, best_perm);
}

OptResult opt_hungarian(const Instance& inst) {
  const int m = inst.m();
  std::vector<std::vector<Rational>> cost(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      cost[static_cast<std::size_t>(i)].push_back(
          ta_distance(inst.request(RequestId(i + 1)), inst.server(ServerId(j + 1))));
    }
  }
  return from_assignment(inst, hungarian_assignment(cost));
}

OptResult opt_hungarian_lattice(const Instance& inst) {
  const auto requests = all_requests(inst.m());
  const auto servers = all_servers(inst.m());
  return from_assignment(inst, exact_assignment(inst, requests, servers));
}

Rational min_matching_cost(const Instance& inst, std::span<const RequestId> requests,
                           std::span<const ServerId> servers) {
  if (requests.size() != servers.size()) {
    throw PreconditionError("min_matching_cost needs equally many requests and servers");
  }
  const std::vector<int> col = exact_assignment(inst, requests, servers);
  Rational total;
  for (std::size_t i = 0; i < col.size(); ++i) {
    total += ta_distance(inst.request(requests[i]), inst.server(servers[static_cast<std::size_t>(col[i])]));
  }
  return total;
}

Solution greedy_baseline(const Instance& inst) {
  const int m = inst.m();
  std::vector<std::tuple<Rational, int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (const Agent& r : inst.requests()) {
    for (const Agent& s : inst.servers()) {
      const Rational both = std::max(r.arrival, s.arrival);
      const Rational waited = (r.arrival + s.arrival + abs(r.pos - s.pos)) / 2;
      pairs.emplace_back(std::max(both, waited), r.id, s.id);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  Matching taken(m);
  Solution sol;
  for (auto& [t, r, s] : pairs) {
    if (taken.saturated(RequestId(r)) || taken.saturated(ServerId(s))) continue;
    taken.add(RequestId(r), ServerId(s));
    sol.pairs.push_back({RequestId(r), ServerId(s), t});
    if (taken.size() == static_cast<std::size_t>(m)) break;
  }
  std::sort(sol.pairs.begin(), sol.pairs.end(),
            [](const MatchRecord& a, const MatchRecord& b) { return a.request < b.request; });
  return sol;
}

}  // namespace vrm
