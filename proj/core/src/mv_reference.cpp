#include "vrm/mv_reference.hpp"

#include <algorithm>

#include "vrm/errors.hpp"
#include "vrm/lattice.hpp"
#include "vrm/slack_duals.hpp"

namespace vrm {
namespace {

template <class Int>
class MvRun {
 public:
  MvRun(const Instance& inst, const Gamma& gamma)
      : inst_(inst),
        metric_(inst, gamma),
        m_(inst.m()),
        m_off_(m_),
        m_vrm_(m_),
        duals_(m_),
        arrived_(static_cast<std::size_t>(m_), 0),
        state_(static_cast<std::size_t>(m_)),
        match_time_(static_cast<std::size_t>(m_)) {}

  MvRunResult run() {
    struct Arrival {
      Int time;
      int kind;  // 0 = server, 1 = request
      int id;
    };
    std::vector<Arrival> arrivals;
    for (int i = 1; i <= m_; ++i) {
      arrivals.push_back({metric_.server_arrival(ServerId(i)), 0, i});
      arrivals.push_back({metric_.request_arrival(RequestId(i)), 1, i});
    }

    std::size_t matched = 0;
    std::vector<unsigned char> done(arrivals.size(), 0);
    while (matched < static_cast<std::size_t>(m_)) {
      // Earliest arrival or ready timing, by linear scan.
      std::optional<Int> t;
      for (std::size_t k = 0; k < arrivals.size(); ++k) {
        if (!done[k] && (!t || arrivals[k].time < *t)) t = arrivals[k].time;
      }
      for (int rid : free_) {
        if (auto due = ready_time(RequestId(rid)); due && (!t || *due < *t)) t = *due;
      }
      if (!t) throw InvariantError("MV reference stalled with unmatched requests");
      now_ = *t;

      for (int kind = 0; kind < 2; ++kind) {
        for (int id = 1; id <= m_; ++id) {
          const std::size_t k = static_cast<std::size_t>(2 * (id - 1) + kind);
          if (done[k] || arrivals[k].time != now_) continue;
          done[k] = 1;
          if (kind == 0) {
            servers_.insert(std::lower_bound(servers_.begin(), servers_.end(), ServerId(id)), ServerId(id));
            for (int rid : free_) update_real(RequestId(rid));
            log(EventKind::ServerArrival, id, std::nullopt);
          } else {
            const RequestId r(id);
            arrived_[r.index()] = 1;
            free_.insert(std::lower_bound(free_.begin(), free_.end(), id), id);
            update_real(r);
            update_virtual(r);
            log(EventKind::RequestArrival, id, std::nullopt);
          }
        }
      }

      for (;;) {
        std::optional<RequestId> fire;
        for (int rid : free_) {
          const RequestId r(rid);
          const State& st = state_[r.index()];
          if (st.phi && !(virtual_now(r) < *st.phi)) {
            fire = r;
            break;
          }
        }
        if (!fire) break;
        augment(*fire);
        ++matched;
      }
    }

    MvRunResult out;
    for (const auto& [r, s] : m_vrm_.pairs()) {
      out.solution.pairs.push_back({r, s, metric_.time_to_rational(match_time_[r.index()])});
    }
    out.trace = std::move(trace_);
    return out;
  }

 private:
  struct State {
    std::optional<Int> phi;  // real minimum path; nullopt = +infinity
    Int virtual_phi{0};      // virtual minimum path at virtual_at
    Int virtual_at{0};
  };

  SlackGraph<Int> graph(RequestId r) const {
    return build_slack_graph(metric_, r, now_, m_off_, duals_, std::span<const ServerId>(servers_), true);
  }

  void update_real(RequestId r) {
    const auto g = graph(r);
    auto best = min_real_aug_path(g);
    state_[r.index()].phi = best ? std::optional<Int>(best->net_cost) : std::nullopt;
  }

  void update_virtual(RequestId r) {
    const auto g = graph(r);
    const auto best = min_virtual_aug_path(g);
    State& st = state_[r.index()];
    st.virtual_phi = best.net_cost;
    st.virtual_at = now_;
    ++trace_.waiting_cost_checks;
    if (best.net_cost != metric_.gamma_wait(r, now_)) {
      trace_.waiting_cost_violations.push_back(
          "r" + std::to_string(r.value) + " at " + to_fraction_string(metric_.time_to_rational(now_)) +
          ": virtual net cost " + to_fraction_string(metric_.value_to_rational(best.net_cost)));
    }
  }

  // Only the final edge of the stored virtual path depends on time.
  Int virtual_now(RequestId r) const {
    const State& st = state_[r.index()];
    return st.virtual_phi + (now_ - st.virtual_at);
  }

  std::optional<Int> ready_time(RequestId r) const {
    const State& st = state_[r.index()];
    if (!st.phi) return std::nullopt;
    Int due = st.virtual_at + (*st.phi - st.virtual_phi);
    return due < now_ ? now_ : due;
  }

  void augment(RequestId r) {
    const auto pre = graph(r);
    const auto best = min_real_aug_path(pre);
    if (!best) throw InvariantError("MV reference fired a request without a real path");
    apply_dual_update(metric_, duals_, pre, best->path);
    augment_in_place(m_off_, best->path);
    const ServerId partner = best->path.terminal().as_server();
    m_vrm_.add(r, partner);
    match_time_[r.index()] = now_;
    free_.erase(std::find(free_.begin(), free_.end(), r.value));
    for (int rid : free_) {
      update_real(RequestId(rid));
      update_virtual(RequestId(rid));
    }
    log(EventKind::Augmentation, r.value, partner);
  }

  void log(EventKind kind, int id, std::optional<ServerId> partner) {
    trace_.events.push_back({metric_.time_to_rational(now_), kind, id, partner});
    for (int rid : free_) {
      const RequestId r(rid);
      const State& st = state_[r.index()];
      if (!st.phi) continue;
      ++trace_.virtual_below_real_checks;
      if (*st.phi < virtual_now(r)) {
        trace_.virtual_below_real_violations.push_back(
            "r" + std::to_string(rid) + " after " + to_string(kind) + " at " +
            to_fraction_string(metric_.time_to_rational(now_)));
      }
    }
  }

  const Instance& inst_;
  LatticeMetric<Int> metric_;
  int m_;
  Int now_{0};
  Matching m_off_;
  Matching m_vrm_;
  DualStore<Int> duals_;
  std::vector<unsigned char> arrived_;
  std::vector<ServerId> servers_;
  std::vector<int> free_;
  std::vector<State> state_;
  std::vector<Int> match_time_;
  MvTrace trace_;
};

}  // namespace

MvRunResult vrm_with_mv_servers(const Instance& inst, const Gamma& gamma, Backend backend) {
  if (backend == Backend::Auto) {
    if (LatticeScale::of(inst, gamma).fits_int64(inst)) {
      try {
        return MvRun<Checked64>(inst, gamma).run();
      } catch (const LatticeOverflow&) {
      }
    }
    backend = Backend::BigInt;
  }
  if (backend == Backend::Int64) return MvRun<Checked64>(inst, gamma).run();
  return MvRun<BigInt>(inst, gamma).run();
}

}  // namespace vrm
