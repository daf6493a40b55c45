#pragma once

// Runs one instance through the engine and every independent check that
// applies at its size, tallying each property separately.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrm/engine.hpp"
#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"
#include "vrm/oracles.hpp"

namespace vrm {

// Property names used as AuditReport::checks keys.
namespace check {
inline constexpr const char* kDifferential = "mv_differential";      // engine == MV reference
inline constexpr const char* kMvWaitingCost = "mv_waiting_cost";     // virtual phi = gamma*wait
inline constexpr const char* kMvVirtualBelowReal = "mv_virtual_below_real";
inline constexpr const char* kRealPathOracle = "real_path_oracle";   // Dijkstra phi == enumeration
inline constexpr const char* kVirtualPathOracle = "virtual_path_oracle";
inline constexpr const char* kAugPathOracle = "aug_path_oracle";     // chosen path == enumeration
inline constexpr const char* kRationalSlack = "rational_slack";      // engine phi == rational graph
inline constexpr const char* kBellmanFord = "bellman_ford";
inline constexpr const char* kDualUpdate = "dual_update";            // engine duals == rational update
inline constexpr const char* kInvariants = "invariants";
inline constexpr const char* kNonNegative = "nonnegative";
inline constexpr const char* kMatchTime = "match_time";
inline constexpr const char* kAuMonotone = "au_monotone";
inline constexpr const char* kWaitLowerBound = "wait_lower_bound";   // phi >= gamma*wait
inline constexpr const char* kBoundDistance = "bound_distance";      // D(M) <= 2/(g-1) sum phi
inline constexpr const char* kBoundCost = "bound_cost";              // cost <= D + 2/g sum phi
inline constexpr const char* kBoundPhiOpt = "bound_phi_opt";         // phi_i <= g D(OPT)
inline constexpr const char* kBoundOffline = "bound_offline";        // D(M_off) <= g D(min on sat)
inline constexpr const char* kRatio = "ratio_at_least_one";
inline constexpr const char* kOptCross = "opt_cross";                // brute force == Hungarian
}  // namespace check

struct CheckTally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> messages;  // first few violations

  void pass() { ++checks; }
  void fail(std::string message, std::size_t keep);
  void merge(const CheckTally& other, std::size_t keep);
  bool ok() const { return violations == 0; }
};

struct AuditOptions {
  Gamma gamma = Gamma::standard();
  // Exhaustive path enumeration at every event; requires m <= max_m_bruteforce.
  bool enumerate_paths = true;
  // Include paths ending at servers that have not yet arrived in the
  // non-negativity check.
  bool enumerate_unarrived = true;
  bool mv_differential = true;
  bool offline_bound = true;   // D(M_off) check after every augmentation
  bool opt_cross = true;       // brute force vs Hungarian when m <= max_m_bruteforce
  OracleConfig oracle;
  std::size_t keep_messages = 5;
};

struct AuditReport {
  std::map<std::string, CheckTally> checks;
  Rational cost_vrm;
  Rational cost_opt;
  Rational distance_vrm;
  Rational total_phi;
  std::string error;  // exception text if a component threw

  bool ok() const;
  void merge(const AuditReport& other, std::size_t keep);
  CheckTally& operator[](const std::string& name) { return checks[name]; }
};

AuditReport audit_instance(const Instance& inst, const AuditOptions& options = {});

}  // namespace vrm
