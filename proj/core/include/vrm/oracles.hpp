#pragma once

// Independent verification routes: exhaustive augmenting-path enumeration,
// offline optimal matchings, and a greedy baseline.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"

namespace vrm {

struct OracleConfig {
  int max_m_bruteforce = 8;
  std::uint64_t max_enumerated_paths = 50'000'000;
  std::uint64_t seed = 0;
};

struct EnumerationResult {
  std::optional<AugPath> best;  // nullopt: no free server reachable
  std::optional<Rational> phi;
  // Minimum over every enumerated path, including the extra terminals below.
  std::optional<Rational> min_phi_all;
  std::uint64_t paths = 0;
};

struct EnumerationQuery {
  RequestId source;
  std::vector<ServerId> arrived_servers;
  bool virtual_paths = false;  // terminals are MV servers instead of free real servers
  Rational time;               // evaluation time for virtual paths
  // Also enumerate paths ending at unarrived servers; they only contribute to
  // min_phi_all.
  bool include_unarrived_terminals = false;
};

// Exhaustive DFS over simple alternating paths from `source`, evaluated with
// net_cost / virtual_net_cost; ties resolved by lexicographically smallest
// vertex sequence. Throws CapacityError when m exceeds the configured cap.
EnumerationResult enumerate_min_aug_path(const Instance& inst, const Matching& m_off,
                                         const Gamma& gamma, const EnumerationQuery& query,
                                         const OracleConfig& config = {});

struct OptResult {
  PairList pairs;  // sorted by request id
  Rational cost;   // sum of TA distances
};

// All m! assignments; first minimum in lexicographic permutation order.
OptResult opt_bruteforce(const Instance& inst, const OracleConfig& config = {});
// Kuhn-Munkres on exact rationals.
OptResult opt_hungarian(const Instance& inst);
// Kuhn-Munkres on the scaled integer lattice (exact; falls back to big integers).
OptResult opt_hungarian_lattice(const Instance& inst);

// Minimum TA cost of a perfect matching between the given equal-size sets.
Rational min_matching_cost(const Instance& inst, std::span<const RequestId> requests,
                           std::span<const ServerId> servers);

// Matches (r, s) at the earliest t >= max(a(r), a(s)) with
// (t - a(r)) + (t - a(s)) >= |pos(r) - pos(s)|, earliest trigger first, ties by
// (request id, server id).
Solution greedy_baseline(const Instance& inst);

}  // namespace vrm
