#include "vrm/audit.hpp"

#include <algorithm>

#include "vrm/lattice.hpp"
#include "vrm/mv_reference.hpp"
#include "vrm/slack_duals.hpp"

namespace vrm {

void CheckTally::fail(std::string message, std::size_t keep) {
  ++checks;
  ++violations;
  if (messages.size() < keep) messages.push_back(std::move(message));
}

void CheckTally::merge(const CheckTally& other, std::size_t keep) {
  checks += other.checks;
  violations += other.violations;
  for (const auto& msg : other.messages) {
    if (messages.size() >= keep) break;
    messages.push_back(msg);
  }
}

bool AuditReport::ok() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second.ok(); });
}

void AuditReport::merge(const AuditReport& other, std::size_t keep) {
  for (const auto& [name, tally] : other.checks) checks[name].merge(tally, keep);
  cost_vrm += other.cost_vrm;
  cost_opt += other.cost_opt;
  distance_vrm += other.distance_vrm;
  total_phi += other.total_phi;
  if (error.empty()) error = other.error;
}

namespace {

std::string fmt(const std::optional<Rational>& v) { return v ? to_fraction_string(*v) : "inf"; }

std::string where(const EngineSnapshot& s) {
  return std::string(to_string(s.event.kind)) + " " + std::to_string(s.event.id) + " at t=" +
         to_fraction_string(s.now);
}

class Auditor final : public EngineObserver {
 public:
  Auditor(const Instance& inst, const AuditOptions& opt)
      : inst_(inst), opt_(opt), metric_(inst, opt.gamma) {
    enumerate_ = opt.enumerate_paths && inst.m() <= opt.oracle.max_m_bruteforce;
  }

  AuditReport& report() { return report_; }

  void restarted() override {
    report_.checks.clear();
    prev_.reset();
  }

  void after_event(const EngineSnapshot& snap) override {
    check_invariants_at(snap);
    for (RequestId r : snap.free_requests) check_request(snap, r);
    prev_ = snap;
  }

  void after_dual_update(const EngineSnapshot& snap) override {
    check_invariants_at(snap);
    if (prev_) check_augmentation(*prev_, snap);
    if (opt_.offline_bound) check_offline_bound(snap);
  }

 private:
  CheckTally& tally(const char* name) { return report_.checks[name]; }
  void record(const char* name, bool ok, const std::string& message) {
    if (ok) {
      tally(name).pass();
    } else {
      tally(name).fail(message, opt_.keep_messages);
    }
  }

  SlackGraph<Rational> graph(const EngineSnapshot& s, RequestId r) const {
    return build_slack_graph(metric_, r, s.now, s.m_off, s.duals,
                             std::span<const ServerId>(s.arrived_servers), true);
  }

  void check_invariants_at(const EngineSnapshot& s) {
    const InvariantReport rep = check_invariants(metric_, s.duals, s.m_off, s.now);
    std::string msg;
    if (!rep.ok()) msg = to_string(rep.violations.front().kind) + " after " + where(s) + ": " + rep.violations.front().detail;
    record(check::kInvariants, rep.ok(), msg);
  }

  void check_request(const EngineSnapshot& s, RequestId r) {
    const std::optional<Rational>& phi = s.phi[r.index()];
    const std::string tag = "r" + std::to_string(r.value) + " after " + where(s);

    if (phi) {
      const Rational wait_cost = metric_.gamma_wait(r, s.now);
      record(check::kWaitLowerBound, !(*phi < wait_cost),
             tag + ": phi " + fmt(phi) + " below gamma*wait " + to_fraction_string(wait_cost));
    }

    const auto g = graph(s, r);
    const auto real = min_real_aug_path(g);
    const auto virt = min_virtual_aug_path(g);
    const std::optional<Rational> real_phi = real ? std::optional<Rational>(real->net_cost) : std::nullopt;
    record(check::kRationalSlack, real_phi == phi,
           tag + ": engine phi " + fmt(phi) + ", rational slack graph " + fmt(real_phi));

    if (!enumerate_) return;

    const auto bf = bellman_ford_distances(g);
    bool same = true;
    for (int v = 0; v < g.vertex_count(); ++v) same = same && bf[static_cast<std::size_t>(v)] == g.distances().get(v);
    record(check::kBellmanFord, same, tag + ": Dijkstra and Bellman-Ford distances differ");

    EnumerationQuery q{r, s.arrived_servers, false, s.now, opt_.enumerate_unarrived};
    const EnumerationResult er = enumerate_min_aug_path(inst_, s.m_off, opt_.gamma, q, opt_.oracle);
    record(check::kRealPathOracle, er.phi == phi,
           tag + ": engine phi " + fmt(phi) + ", enumeration " + fmt(er.phi));
    const bool same_path = (!real && !er.best) || (real && er.best && real->path == *er.best);
    record(check::kAugPathOracle, same_path,
           tag + ": slack-graph path " + (real ? to_string(real->path) : "none") + ", enumeration " +
               (er.best ? to_string(*er.best) : "none"));
    if (er.min_phi_all) {
      record(check::kNonNegative, !(*er.min_phi_all < 0),
             tag + ": real path with net cost " + fmt(er.min_phi_all));
    }

    q.virtual_paths = true;
    q.include_unarrived_terminals = false;
    const EnumerationResult ev = enumerate_min_aug_path(inst_, s.m_off, opt_.gamma, q, opt_.oracle);
    record(check::kVirtualPathOracle, ev.phi == std::optional<Rational>(virt.net_cost),
           tag + ": virtual Dijkstra " + to_fraction_string(virt.net_cost) + ", enumeration " + fmt(ev.phi));
    record(check::kAugPathOracle, ev.best && *ev.best == virt.path,
           tag + ": virtual path " + to_string(virt.path) + ", enumeration " +
               (ev.best ? to_string(*ev.best) : "none"));
    if (ev.min_phi_all) {
      record(check::kNonNegative, !(*ev.min_phi_all < 0),
             tag + ": virtual path with net cost " + fmt(ev.min_phi_all));
    }
  }

  // Replays the augmentation from the previous snapshot with the rational
  // slack graph and compares matching and duals with the engine's.
  void check_augmentation(const EngineSnapshot& pre, const EngineSnapshot& post) {
    const RequestId ri(post.event.id);
    const std::string tag = "augmentation of r" + std::to_string(ri.value) + " at t=" + to_fraction_string(post.now);
    // Nothing but the clock changes between events.
    EngineSnapshot at = pre;
    at.now = post.now;
    const auto g = build_slack_graph(metric_, ri, at.now, at.m_off, at.duals,
                                     std::span<const ServerId>(at.arrived_servers), false);
    const auto best = min_real_aug_path(g);
    if (!best) {
      record(check::kDualUpdate, false, tag + ": no real path in the rational slack graph");
      return;
    }
    const DualStore<Rational> duals = dual_update(metric_, at.duals, g, best->path);
    const Matching m_off = augment(at.m_off, best->path);
    const auto partner = post.m_online.mate(ri);
    const bool ok = duals == post.duals && m_off == post.m_off && partner &&
                    *partner == best->path.terminal().as_server();
    record(check::kDualUpdate, ok, tag + ": engine state differs from the replayed update along " + to_string(best->path));

    if (enumerate_) {
      EnumerationQuery q{ri, at.arrived_servers, false, at.now, false};
      const EnumerationResult er = enumerate_min_aug_path(inst_, at.m_off, opt_.gamma, q, opt_.oracle);
      record(check::kAugPathOracle, er.best && *er.best == best->path,
             tag + ": augmented along " + to_string(best->path) + ", enumeration prefers " +
                 (er.best ? to_string(*er.best) : "none"));
    }
  }

  void check_offline_bound(const EngineSnapshot& s) {
    std::vector<RequestId> rs;
    std::vector<ServerId> ss;
    Rational d_off;
    for (const auto& [r, srv] : s.m_off.pairs()) {
      rs.push_back(r);
      ss.push_back(srv);
      d_off += metric_.distance(r, srv);
    }
    std::sort(ss.begin(), ss.end());
    const Rational best = min_matching_cost(inst_, rs, ss);
    record(check::kBoundOffline, !(opt_.gamma.value() * best < d_off),
           "after " + where(s) + ": D(M_off) " + to_fraction_string(d_off) + " > gamma * " + to_fraction_string(best));
  }

  const Instance& inst_;
  const AuditOptions& opt_;
  RationalMetric metric_;
  bool enumerate_ = false;
  std::optional<EngineSnapshot> prev_;
  AuditReport report_;
};

}  // namespace

AuditReport audit_instance(const Instance& inst, const AuditOptions& options) {
  Auditor auditor(inst, options);
  AuditReport& rep = auditor.report();
  auto record = [&](const char* name, bool ok, const std::string& message) {
    if (ok) {
      rep.checks[name].pass();
    } else {
      rep.checks[name].fail(message, options.keep_messages);
    }
  };
  try {
    EngineOptions eo;
    eo.observer = &auditor;
    eo.record_phi = true;
    const RunResult res = run(inst, options.gamma, eo);
    const Rational& g = options.gamma.value();

    for (const RequestRecord& rec : res.trace.matches) {
      const Rational waited = rec.match_time - inst.request(rec.request).arrival;
      record(check::kMatchTime, waited == rec.phi / g,
             "r" + std::to_string(rec.request.value) + ": waited " + to_fraction_string(waited) +
                 ", phi/gamma " + to_fraction_string(rec.phi / g));
    }

    for (const TraceEvent& e : res.trace.events) {
      if (e.kind != EventKind::Augmentation) continue;
      for (const PhiEntry& after : e.phi_after) {
        auto it = std::find_if(e.phi_before.begin(), e.phi_before.end(),
                               [&](const PhiEntry& b) { return b.request == after.request; });
        if (it == e.phi_before.end()) continue;
        const bool ok = !after.phi || (it->phi && !(*after.phi < *it->phi));
        record(check::kAuMonotone, ok,
               "r" + std::to_string(after.request.value) + " across AU at t=" + to_fraction_string(e.time) +
                   ": " + fmt(it->phi) + " -> " + fmt(after.phi));
      }
    }

    const CostBreakdown cost = solution_cost(inst, res.solution);
    PairList pairs;
    for (const MatchRecord& rec : res.solution.pairs) pairs.emplace_back(rec.request, rec.server);
    rep.cost_vrm = cost.total;
    rep.distance_vrm = matching_ta_cost(inst, pairs);
    rep.total_phi = res.trace.total_phi();

    const Rational dist_bound = Rational(2) / (g - 1) * rep.total_phi;
    record(check::kBoundDistance, !(dist_bound < rep.distance_vrm),
           "D(M) " + to_fraction_string(rep.distance_vrm) + " > " + to_fraction_string(dist_bound));
    const Rational cost_bound = rep.distance_vrm + Rational(2) / g * rep.total_phi;
    record(check::kBoundCost, !(cost_bound < rep.cost_vrm),
           "cost " + to_fraction_string(rep.cost_vrm) + " > " + to_fraction_string(cost_bound));

    if (inst.m() <= options.oracle.max_m_bruteforce && options.opt_cross) {
      const OptResult brute = opt_bruteforce(inst, options.oracle);
      const OptResult hung = opt_hungarian(inst);
      record(check::kOptCross, brute.cost == hung.cost,
             "brute force " + to_fraction_string(brute.cost) + ", Hungarian " + to_fraction_string(hung.cost));
      rep.cost_opt = brute.cost;
    } else {
      rep.cost_opt = opt_hungarian_lattice(inst).cost;
    }
    for (const RequestRecord& rec : res.trace.matches) {
      record(check::kBoundPhiOpt, !(g * rep.cost_opt < rec.phi),
             "r" + std::to_string(rec.request.value) + ": phi " + to_fraction_string(rec.phi) +
                 " > gamma*D(OPT) " + to_fraction_string(g * rep.cost_opt));
    }
    record(check::kRatio, !(rep.cost_vrm < rep.cost_opt),
           "cost " + to_fraction_string(rep.cost_vrm) + " below OPT " + to_fraction_string(rep.cost_opt));

    if (options.mv_differential) {
      const MvRunResult mv = vrm_with_mv_servers(inst, options.gamma);
      std::string msg = "solutions differ";
      for (std::size_t i = 0; i < mv.solution.pairs.size() && i < res.solution.pairs.size(); ++i) {
        if (!(mv.solution.pairs[i] == res.solution.pairs[i])) {
          const auto& a = res.solution.pairs[i];
          const auto& b = mv.solution.pairs[i];
          msg = "r" + std::to_string(a.request.value) + ": engine (s" + std::to_string(a.server.value) + ", " +
                to_fraction_string(a.match_time) + "), reference (s" + std::to_string(b.server.value) + ", " +
                to_fraction_string(b.match_time) + ")";
          break;
        }
      }
      record(check::kDifferential, mv.solution == res.solution, msg);
      auto& wc = rep.checks[check::kMvWaitingCost];
      wc.checks += mv.trace.waiting_cost_checks - mv.trace.waiting_cost_violations.size();
      for (const auto& v : mv.trace.waiting_cost_violations) wc.fail(v, options.keep_messages);
      auto& vb = rep.checks[check::kMvVirtualBelowReal];
      vb.checks += mv.trace.virtual_below_real_checks - mv.trace.virtual_below_real_violations.size();
      for (const auto& v : mv.trace.virtual_below_real_violations) vb.fail(v, options.keep_messages);
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace vrm
