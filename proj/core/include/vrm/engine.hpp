#pragma once

// Event-driven online matching with delays on the line.
//
// Each free request r_i keeps its minimum net-cost real augmenting path P_i
// with net cost phi_i. It becomes ready once gamma*(t - a(r_i)) >= phi_i; the
// engine then augments the offline matching along P_i, commits (r_i, ter(P_i))
// to the online output at time t, updates the duals and recomputes phi for all
// free requests. Simultaneous events run in a fixed order: server arrivals by
// id, request arrivals by id, then the lowest-id ready request, repeatedly.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"
#include "vrm/rational.hpp"
#include "vrm/slack_duals.hpp"

namespace vrm {

enum class EventKind { ServerArrival, RequestArrival, Augmentation };

// "SA", "RA", "AU".
const char* to_string(EventKind kind);

struct Event {
  Rational time;
  EventKind kind = EventKind::RequestArrival;
  int id = 0;  // server id for SA, request id for RA/AU

  friend bool operator==(const Event&, const Event&) = default;
};

// Net cost of a free request's real minimum augmenting path; nullopt = +infinity.
struct PhiEntry {
  RequestId request;
  std::optional<Rational> phi;

  friend bool operator==(const PhiEntry&, const PhiEntry&) = default;
};

struct TraceEvent {
  Rational time;
  EventKind kind = EventKind::RequestArrival;
  int id = 0;
  // Augmentation only.
  std::optional<ServerId> partner;
  AugPath path;
  std::optional<Rational> phi;
  std::vector<PhiEntry> phi_before;  // free requests before the augmentation
  // Free requests after the event, including the arriving request for RA.
  std::vector<PhiEntry> phi_after;
};

struct RequestRecord {
  RequestId request;
  ServerId server;
  Rational match_time;
  Rational phi;  // net cost of P*_i when r_i was matched
};

struct Trace {
  std::vector<TraceEvent> events;
  std::vector<RequestRecord> matches;  // indexed by request id - 1; server 0 until matched

  Rational total_phi() const;
};

struct RunResult {
  Solution solution;
  Trace trace;
};

// Read-only view handed to observers; values converted to rationals.
struct EngineSnapshot {
  Rational now;
  Event event;
  Matching m_off;
  Matching m_online;
  DualStore<Rational> duals;
  std::vector<ServerId> arrived_servers;
  std::vector<RequestId> free_requests;
  std::vector<std::optional<Rational>> phi;  // by request id - 1; free requests only
};

class EngineObserver {
 public:
  virtual ~EngineObserver() = default;
  virtual void after_event(const EngineSnapshot&) {}
  // Right after an augmentation's dual update; `phi` is left empty.
  virtual void after_dual_update(const EngineSnapshot&) {}
  // A 64-bit run overflowed and is restarting on big integers.
  virtual void restarted() {}
};

enum class Backend { Auto, Int64, BigInt };

struct EngineOptions {
  Backend backend = Backend::Auto;
  bool record_phi = true;      // phi_before / phi_after snapshots in the trace
  bool check_invariants = false;  // audit the duals after every update; throws InvariantError
  EngineObserver* observer = nullptr;
};

// t + (phi - gamma*(t - a_r))/gamma, the instant gamma*(waiting time) reaches
// phi. nullopt when phi is infinite. Throws PreconditionError if now < a_r or
// the request is already ready.
std::optional<Rational> ready_timing(const Rational& a_r, const Rational& now,
                                     const std::optional<Rational>& phi, const Gamma& gamma);

class EngineCore;

// Stepwise interface; `run` drives it to completion.
class VrmEngine {
 public:
  VrmEngine(const Instance& inst, Gamma gamma, EngineOptions options = {});
  VrmEngine(VrmEngine&&) noexcept;
  VrmEngine& operator=(VrmEngine&&) noexcept;
  ~VrmEngine();

  bool done() const;
  const Rational& now() const;
  Backend backend() const;
  // Time of the next arrival or ready timing.
  std::optional<Rational> next_time() const;
  // Processes every event at next_time().
  void step();
  // Applies the arrivals in `batch`, then fires ready requests at `time`.
  // Throws PreconditionError for events in the past, events before `time`
  // still pending, or malformed batches.
  void process_tick(const Rational& time, std::span<const Event> batch);

  std::optional<Rational> phi(RequestId r) const;
  const Matching& offline_matching() const;
  const Trace& trace() const;
  // Throws PreconditionError until done().
  Solution solution() const;

 private:
  std::unique_ptr<EngineCore> core_;
};

// Runs the instance to completion. With Backend::Auto a 64-bit overflow
// restarts the run on big integers.
RunResult run(const Instance& inst, const Gamma& gamma, EngineOptions options = {});

}  // namespace vrm
