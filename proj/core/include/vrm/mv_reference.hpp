#pragma once

// Reference implementation that keeps every free request's virtual minimum
// augmenting path explicitly (moving virtual servers in the slack graph) and
// fires readiness on phi_t(virtual) >= phi(real). It has its own event loop
// and exists to be compared against VrmEngine.

#include <cstdint>
#include <string>
#include <vector>

#include "vrm/engine.hpp"
#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"

namespace vrm {

struct MvEvent {
  Rational time;
  EventKind kind = EventKind::RequestArrival;
  int id = 0;
  std::optional<ServerId> partner;
};

struct MvTrace {
  std::vector<MvEvent> events;
  // Whenever a virtual path is recomputed its net cost must equal gamma*(t - a(r_i)).
  std::uint64_t waiting_cost_checks = 0;
  std::vector<std::string> waiting_cost_violations;
  // After every event, phi_t(virtual) <= phi(real) for every free request.
  std::uint64_t virtual_below_real_checks = 0;
  std::vector<std::string> virtual_below_real_violations;
};

struct MvRunResult {
  Solution solution;
  MvTrace trace;
};

MvRunResult vrm_with_mv_servers(const Instance& inst, const Gamma& gamma,
                                Backend backend = Backend::Auto);

}  // namespace vrm
