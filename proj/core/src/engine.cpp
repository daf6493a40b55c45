#include "vrm/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "vrm/errors.hpp"
#include "vrm/lattice.hpp"

namespace vrm {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ServerArrival:
      return "SA";
    case EventKind::RequestArrival:
      return "RA";
    case EventKind::Augmentation:
      return "AU";
  }
  return "?";
}

Rational Trace::total_phi() const {
  Rational total;
  for (const RequestRecord& rec : matches) total += rec.phi;
  return total;
}

std::optional<Rational> ready_timing(const Rational& a_r, const Rational& now,
                                     const std::optional<Rational>& phi, const Gamma& gamma) {
  if (now < a_r) throw PreconditionError("ready timing requested before the request arrived");
  if (!phi) return std::nullopt;
  const Rational waiting_cost = gamma.value() * (now - a_r);
  if (!(waiting_cost < *phi)) {
    throw PreconditionError("request is already ready; it must be matched now");
  }
  return now + (*phi - waiting_cost) / gamma.value();
}

class EngineCore {
 public:
  virtual ~EngineCore() = default;
  virtual bool done() const = 0;
  virtual const Rational& now() const = 0;
  virtual Backend backend() const = 0;
  virtual std::optional<Rational> next_time() const = 0;
  virtual void step() = 0;
  virtual void process_tick(const Rational& time, std::span<const Event> batch) = 0;
  virtual std::optional<Rational> phi(RequestId r) const = 0;
  virtual const Matching& offline_matching() const = 0;
  virtual const Trace& trace() const = 0;
  virtual Solution solution() const = 0;
};

namespace {

// Unsettled endpoints of a dense Dijkstra, stored column-wise and keyed by
// agent id (1..capacity). Relaxing from one settled vertex touches every
// entry, so this is the hot loop of a run.
template <class Int>
class OpenSet {
  static constexpr bool raw = std::is_same_v<Int, Checked64>;
  using Cell = std::conditional_t<raw, std::int64_t, Int>;

 public:
  explicit OpenSet(int capacity = 0) { reset(capacity); }

  void reset(int capacity) {
    pos_.clear();
    arr_.clear();
    z_.clear();
    dist_.clear();
    id_.clear();
    reached_.clear();
    slot_.assign(static_cast<std::size_t>(capacity) + 1, -1);
    z_bound_ = 0;
  }

  std::size_t size() const { return id_.size(); }
  int id(int k) const { return id_[at(k)]; }
  Int dist(int k) const { return Int(dist_[at(k)]); }
  // -1 when the id is not open.
  int slot_of(int id) const { return slot_[static_cast<std::size_t>(id)]; }

  void push(const Int& pos, const Int& arr, const Int& z, int id) {
    slot_[static_cast<std::size_t>(id)] = static_cast<int>(id_.size());
    pos_.push_back(cell(pos));
    arr_.push_back(cell(arr));
    z_.push_back(cell(z));
    dist_.push_back(Cell(0));
    id_.push_back(id);
    reached_.push_back(0);
    if constexpr (raw) z_bound_ = std::max(z_bound_, magnitude(z.value()));
  }

  // Offers d; returns whether the entry improved.
  bool offer(int k, const Int& d) {
    const auto i = at(k);
    if (reached_[i] && !(d < Int(dist_[i]))) return false;
    reached_[i] = 1;
    dist_[i] = cell(d);
    return true;
  }

  void remove(int k) {
    const auto i = at(k);
    const std::size_t last = id_.size() - 1;
    slot_[static_cast<std::size_t>(id_[i])] = -1;
    if (i != last) {
      pos_[i] = pos_[last];
      arr_[i] = arr_[last];
      z_[i] = z_[last];
      dist_[i] = dist_[last];
      id_[i] = id_[last];
      reached_[i] = reached_[last];
      slot_[static_cast<std::size_t>(id_[i])] = k;
    }
    pos_.pop_back();
    arr_.pop_back();
    z_.pop_back();
    dist_.pop_back();
    id_.pop_back();
    reached_.pop_back();
  }

  int closest() const {
    int best = -1;
    const int n = static_cast<int>(id_.size());
    for (int k = 0; k < n; ++k) {
      const auto i = at(k);
      if (reached_[i] && (best < 0 || dist_[i] < dist_[at(best)])) best = k;
    }
    return best;
  }

  // Relaxes every entry except id `skip` from a vertex at (pos, arr) with
  // dual zc settled at d; the edge weight is p*(|dpos| + |darr|) - z - zc.
  // Returns the closest entry or -1. A negative weight calls negative(id).
  // coord_bound bounds every |pos| and |arr| (Checked64 only).
  template <class OnNegative>
  int relax_all(const Int& pos, const Int& arr, const Int& p, const Int& zc, const Int& d, int skip,
                std::int64_t coord_bound, OnNegative&& negative) {
    const int skip_slot = skip > 0 ? slot_of(skip) : -1;
    if constexpr (raw) {
      if (fits(p.value(), coord_bound, zc.value(), d.value())) {
        return relax_fast(pos.value(), arr.value(), p.value(), zc.value(), d.value(), skip_slot, negative);
      }
    }
    using std::abs;
    const int n = static_cast<int>(id_.size());
    for (int k = 0; k < n; ++k) {
      if (k == skip_slot) continue;
      const auto i = at(k);
      const Int w = p * (abs(Int(pos_[i]) - pos) + abs(Int(arr_[i]) - arr)) - Int(z_[i]) - zc;
      if (w < Int(0)) negative(id_[i]);
      offer(k, d + w);
    }
    return closest();
  }

 private:
  static std::size_t at(int k) { return static_cast<std::size_t>(k); }
  static Cell cell(const Int& v) {
    if constexpr (raw) {
      return v.value();
    } else {
      return v;
    }
  }
  static std::int64_t magnitude(std::int64_t v) {
    return v == std::numeric_limits<std::int64_t>::min() ? std::numeric_limits<std::int64_t>::max()
                                                          : (v < 0 ? -v : v);
  }

  // Every intermediate of the fast loop stays below 2^62 in magnitude.
  bool fits(std::int64_t p, std::int64_t coord_bound, std::int64_t zc, std::int64_t d) const {
    constexpr std::int64_t quarter = std::int64_t(1) << 60;
    std::int64_t w = 0;
    if (__builtin_mul_overflow(magnitude(p), coord_bound, &w) || w >= quarter) return false;
    return z_bound_ < quarter && magnitude(zc) < quarter && magnitude(d) < quarter;
  }

  template <class OnNegative>
  int relax_fast(std::int64_t pos, std::int64_t arr, std::int64_t p, std::int64_t zc, std::int64_t d,
                 int skip_slot, OnNegative& negative) {
    const std::int64_t* __restrict ps = pos_.data();
    const std::int64_t* __restrict as = arr_.data();
    const std::int64_t* __restrict zs = z_.data();
    std::int64_t* __restrict ds = dist_.data();
    unsigned char* __restrict rs = reached_.data();
    const int n = static_cast<int>(id_.size());
    std::int64_t min_w = 0;
    std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
    int best = -1;
    // Every swept entry ends up reached, so the minimum needs no flag test.
    auto sweep = [&](int lo, int hi) {
      for (int k = lo; k < hi; ++k) {
        const std::int64_t dp = ps[k] - pos;
        const std::int64_t da = as[k] - arr;
        const std::int64_t w = p * ((dp < 0 ? -dp : dp) + (da < 0 ? -da : da)) - zs[k] - zc;
        min_w = w < min_w ? w : min_w;
        const std::int64_t cand = d + w;
        const std::int64_t nd = (rs[k] && ds[k] <= cand) ? ds[k] : cand;
        ds[k] = nd;
        rs[k] = 1;
        if (nd < best_d) {
          best_d = nd;
          best = k;
        }
      }
    };
    if (skip_slot < 0) {
      sweep(0, n);
    } else {
      sweep(0, skip_slot);
      const int before = best;
      sweep(skip_slot + 1, n);
      // Keep the first minimum in slot order.
      if (rs[skip_slot] && (best < 0 || ds[skip_slot] < best_d ||
                            (ds[skip_slot] == best_d && before != best))) {
        best = skip_slot;
      }
    }
    if (min_w < 0) {
      for (int k = 0; k < n; ++k) {
        if (k == skip_slot) continue;
        const std::int64_t dp = ps[k] - pos;
        const std::int64_t da = as[k] - arr;
        if (p * ((dp < 0 ? -dp : dp) + (da < 0 ? -da : da)) - zs[k] - zc < 0) negative(id_[at(k)]);
      }
    }
    return best;
  }

  std::vector<Cell> pos_, arr_, z_, dist_;
  std::vector<int> id_;
  std::vector<unsigned char> reached_;
  std::vector<int> slot_;
  std::int64_t z_bound_ = 0;
};

template <class Int>
class LatticeEngine final : public EngineCore {
 public:
  LatticeEngine(const Instance& inst, const Gamma& gamma, const EngineOptions& options)
      : inst_(&inst),
        options_(options),
        metric_(inst, gamma),
        m_(inst.m()),
        space_{inst.m()},
        m_off_(inst.m()),
        m_online_(inst.m()),
        duals_(inst.m()),
        arrived_request_(static_cast<std::size_t>(m_), 0),
        arrived_server_(static_cast<std::size_t>(m_), 0),
        match_time_(static_cast<std::size_t>(m_)),
        scheduled_(static_cast<std::size_t>(m_)),
        version_(static_cast<std::size_t>(m_), 0) {
    for (const Agent& s : inst.servers()) {
      pending_.push_back({metric_.server_arrival(ServerId(s.id)), EventKind::ServerArrival, s.id});
    }
    for (const Agent& r : inst.requests()) {
      pending_.push_back({metric_.request_arrival(RequestId(r.id)), EventKind::RequestArrival, r.id});
    }
    std::sort(pending_.begin(), pending_.end());
    if constexpr (std::is_same_v<Int, Checked64>) {
      auto widen = [&](const Int& v) { coord_bound_ = std::max(coord_bound_, std::abs(v.value())); };
      for (int i = 1; i <= m_; ++i) {
        widen(metric_.request_pos(RequestId(i)));
        widen(metric_.request_arr(RequestId(i)));
        widen(metric_.server_pos(ServerId(i)));
        widen(metric_.server_arr(ServerId(i)));
      }
    }
    trace_.matches.resize(static_cast<std::size_t>(m_));
    for (int i = 1; i <= m_; ++i) trace_.matches[static_cast<std::size_t>(i - 1)].request = RequestId(i);
    now_ = Rational(0);
  }

  bool done() const override { return m_online_.size() == static_cast<std::size_t>(m_); }
  const Rational& now() const override { return now_; }
  Backend backend() const override {
    return std::is_same_v<Int, Checked64> ? Backend::Int64 : Backend::BigInt;
  }

  std::optional<Rational> next_time() const override {
    auto t = next_lattice_time();
    if (!t) return std::nullopt;
    return metric_.time_to_rational(*t);
  }

  void step() override {
    auto t = next_lattice_time();
    if (!t) throw PreconditionError("no pending events");
    tick(*t, pending_at(*t));
  }

  void process_tick(const Rational& time, std::span<const Event> batch) override {
    if (time < now_) throw PreconditionError("tick at " + to_fraction_string(time) + " is in the past");
    const Int t = metric_.time_from_rational(time);
    if (auto next = next_lattice_time(); next && *next < t) {
      throw PreconditionError("events before " + to_fraction_string(time) + " are still pending");
    }
    std::vector<Pending> expected = pending_at(t);
    std::vector<Pending> given;
    for (const Event& e : batch) {
      if (e.time != time) throw PreconditionError("batch events must share the tick time");
      if (e.kind == EventKind::Augmentation) {
        throw PreconditionError("augmentations are generated, not supplied");
      }
      given.push_back({t, e.kind, e.id});
    }
    std::sort(given.begin(), given.end());
    if (given != expected) {
      throw PreconditionError("batch does not match the arrivals at " + to_fraction_string(time));
    }
    tick(t, std::move(given));
  }

  std::optional<Rational> phi(RequestId r) const override {
    if (!is_free(r)) return std::nullopt;
    auto v = search_phi(r);
    if (!v) return std::nullopt;
    return metric_.value_to_rational(*v);
  }

  const Matching& offline_matching() const override { return m_off_; }
  const Trace& trace() const override { return trace_; }

  Solution solution() const override {
    if (!done()) throw PreconditionError("the run has not finished");
    Solution sol;
    for (const auto& [r, s] : m_online_.pairs()) {
      sol.pairs.push_back({r, s, metric_.time_to_rational(match_time_[r.index()])});
    }
    return sol;
  }

 private:
  struct Pending {
    Int time;
    EventKind kind;
    int id;
    friend bool operator<(const Pending& a, const Pending& b) {
      return std::tie(a.time, a.kind, a.id) < std::tie(b.time, b.kind, b.id);
    }
    friend bool operator==(const Pending& a, const Pending& b) {
      return a.time == b.time && a.kind == b.kind && a.id == b.id;
    }
  };

  // Forward view of the slack graph restricted to the vertices a forward
  // search settled; tight edges never leave that set, so lexicographic path
  // selection sees the same candidates as on the full graph.
  struct ForwardGraph {
    const LatticeEngine* e;
    const std::vector<int>* servers;  // settled server ids, ascending
    int vertex_count() const { return e->space_.size(); }
    template <class F>
    void for_each_out(int u, F&& f) const {
      if (e->space_.is_request(u)) {
        const RequestId r(u + 1);
        const auto mate = e->m_off_.mate(r);
        for (int sid : *servers) {
          const ServerId s(sid);
          if (mate && *mate == s) continue;
          f(e->space_.of(s), e->slack(r, s));
        }
      } else if (e->space_.is_real_server(u)) {
        if (auto r = e->m_off_.mate(ServerId(u - e->m_ + 1))) f(e->space_.of(*r), Int(0));
      }
    }
  };

  // Dense forward Dijkstra from ri settling every vertex within phi.
  detail::Distances<Int> forward_search(RequestId ri, const Int& phi,
                                        std::vector<int>& settled_servers) const {
    detail::Distances<Int> d;
    d.value.assign(static_cast<std::size_t>(space_.size()), Int(0));
    d.settled.assign(static_cast<std::size_t>(space_.size()), 0);
    OpenSet<Int> open(m_);
    for (int sid : arrived_servers_) {
      const ServerId s(sid);
      open.push(metric_.server_pos(s), metric_.server_arr(s), duals_[s], sid);
    }
    RequestId r = ri;
    Int dr(0);
    for (;;) {
      const auto ri_idx = static_cast<std::size_t>(space_.of(r));
      d.settled[ri_idx] = 1;
      d.value[ri_idx] = dr;
      const auto mate = m_off_.mate(r);
      int best = open.relax_all(metric_.request_pos(r), metric_.request_arr(r), metric_.gamma_num(),
                                duals_[r], dr, mate ? mate->value : 0, coord_bound_,
                                [&](int sid) { negative_slack(r.value, ServerId(sid)); });
      // Settle servers until one leads to an unsettled request.
      std::optional<RequestId> next;
      while (!next && best >= 0 && !(phi < open.dist(best))) {
        const ServerId s(open.id(best));
        const Int ds = open.dist(best);
        open.remove(best);
        const auto si = static_cast<std::size_t>(space_.of(s));
        d.settled[si] = 1;
        d.value[si] = ds;
        settled_servers.push_back(s.value);
        if (auto mr = m_off_.mate(s)) {
          next = *mr;
          dr = ds;
        } else {
          best = open.closest();
        }
      }
      if (!next) break;
      r = *next;
    }
    std::sort(settled_servers.begin(), settled_servers.end());
    return d;
  }

  // ---- reverse search: distance from every vertex to the nearest free server

  Int slack(RequestId r, ServerId s) const {
    Int w = metric_.gamma_distance(r, s) - duals_[r] - duals_[s];
    if (w < Int(0)) {
      throw InvariantError("negative slack on edge r" + std::to_string(r.value) + "->s" +
                           std::to_string(s.value));
    }
    return w;
  }

  void invalidate() { stale_ = true; }

  // Dense Dijkstra: every settled matched request settles its mate at the same
  // distance, and each settled server relaxes all open requests, so a linear
  // scan for the minimum costs no more than the relaxations themselves.
  void restart_search() {
    const auto n = static_cast<std::size_t>(2 * m_);
    dist_.assign(n, Int(0));
    settled_.assign(n, 0);
    unsettled_free_ = static_cast<int>(free_requests_.size());
    open_.reset(m_);
    for (int rid : arrived_requests_) open_request(RequestId(rid));
    for (int sid : arrived_servers_) {
      const ServerId s(sid);
      if (m_off_.saturated(s)) continue;
      settled_[static_cast<std::size_t>(space_.of(s))] = 1;
      scan_server(s, Int(0));
    }
    next_ = -1;
    radius_ = Int(0);
    stale_ = false;
  }

  void open_request(RequestId r) {
    open_.push(metric_.request_pos(r), metric_.request_arr(r), duals_[r], r.value);
  }

  [[noreturn]] static void negative_slack(int rid, ServerId s) {
    throw InvariantError("negative slack on edge r" + std::to_string(rid) + "->s" +
                         std::to_string(s.value));
  }

  // Relaxes every open request from s; returns the slot of the closest one.
  int scan_server(ServerId s, const Int& d) {
    const auto mate = m_off_.mate(s);
    return open_.relax_all(metric_.server_pos(s), metric_.server_arr(s), metric_.gamma_num(), duals_[s], d,
                           mate ? mate->value : 0, coord_bound_,
                           [&](int rid) { negative_slack(rid, s); });
  }

  void resume_search() {
    while (unsettled_free_ > 0) {
      const int k = next_ >= 0 ? next_ : open_.closest();
      next_ = -1;
      if (k < 0) break;
      const Int d = open_.dist(k);
      const RequestId r(open_.id(k));
      open_.remove(k);
      dist_[r.index()] = d;
      settled_[r.index()] = 1;
      if (radius_ < d) radius_ = d;
      if (auto s = m_off_.mate(r)) {
        const auto si = static_cast<std::size_t>(space_.of(*s));
        dist_[si] = d;
        settled_[si] = 1;
        next_ = scan_server(*s, d);
      } else {
        --unsettled_free_;
      }
    }
  }

  // A new free server is a new source at distance 0. Distances only drop, and
  // a settled vertex that improves does so along a path whose vertices all lie
  // below the current radius, so a pruned search from the server repairs the
  // settled labels and the open bounds without starting over.
  void add_source(ServerId s0) {
    if (stale_) return;
    using Entry = std::pair<Int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    auto scan = [&](ServerId s, const Int& d) {
      const auto mate = m_off_.mate(s);
      for (int rid : arrived_requests_) {
        const RequestId r(rid);
        if (mate && *mate == r) continue;
        // Weights are nonnegative, so labels at or below d cannot improve.
        if (settled_[r.index()] && !(d < dist_[r.index()])) continue;
        const Int cand = d + slack(r, s);
        if (settled_[r.index()]) {
          if (cand < dist_[r.index()]) {
            dist_[r.index()] = cand;
            heap.emplace(cand, rid);
          }
          continue;
        }
        if (open_.offer(open_.slot_of(rid), cand) && cand < radius_) heap.emplace(cand, rid);
      }
    };
    settled_[static_cast<std::size_t>(space_.of(s0))] = 1;
    dist_[static_cast<std::size_t>(space_.of(s0))] = Int(0);
    scan(s0, Int(0));
    while (!heap.empty()) {
      const auto [d, rid] = heap.top();
      heap.pop();
      const RequestId r(rid);
      const Int& label = settled_[r.index()] ? dist_[r.index()]
                                             : open_.dist(open_.slot_of(rid));
      if (label != d) continue;
      if (auto s = m_off_.mate(r)) {
        const auto si = static_cast<std::size_t>(space_.of(*s));
        if (settled_[si]) dist_[si] = d;
        scan(*s, d);
      }
    }
    next_ = -1;
  }

  void ensure_search() {
    if (stale_) restart_search();
    resume_search();
  }

  // A newly arrived request only has outgoing edges, so the current search
  // stays valid once it is seeded from the servers settled so far.
  void add_request_to_search(RequestId r) {
    if (stale_) return;
    ++unsettled_free_;
    open_request(r);
    next_ = -1;
    const int slot = open_.slot_of(r.value);
    for (int sid : arrived_servers_) {
      const ServerId s(sid);
      const auto si = static_cast<std::size_t>(space_.of(s));
      if (settled_[si]) open_.offer(slot, dist_[si] + slack(r, s));
    }
  }

  std::optional<Int> search_phi(RequestId r) const {
    const auto idx = static_cast<std::size_t>(space_.of(r));
    if (stale_ || !settled_[idx]) return std::nullopt;
    return dist_[idx];
  }

  // ---- ready timings

  void refresh() {
    ensure_search();
    for (int rid : free_requests_) {
      const RequestId r(rid);
      std::optional<Int> due;
      if (auto phi = search_phi(r)) {
        due = metric_.request_arrival(r) + *phi;
        if (*due < now_t_) due = now_t_;
      }
      auto& slot = scheduled_[r.index()];
      if (slot != due) {
        slot = due;
        ++version_[r.index()];
        if (due) ready_.emplace(*due, rid, version_[r.index()]);
      }
    }
  }

  std::optional<Int> next_lattice_time() const {
    std::optional<Int> t;
    if (cursor_ < pending_.size()) t = pending_[cursor_].time;
    while (!ready_.empty()) {
      const auto& [due, rid, version] = ready_.top();
      const RequestId r(rid);
      if (is_free(r) && version == version_[r.index()]) {
        if (!t || due < *t) t = due;
        break;
      }
      ready_.pop();
    }
    return t;
  }

  std::vector<Pending> pending_at(const Int& t) const {
    std::vector<Pending> out;
    for (std::size_t k = cursor_; k < pending_.size() && pending_[k].time == t; ++k) {
      out.push_back(pending_[k]);
    }
    return out;
  }

  bool is_free(RequestId r) const {
    return arrived_request_[r.index()] && !m_off_.saturated(r);
  }

  // ---- events

  void tick(const Int& t, std::vector<Pending> batch) {
    now_t_ = t;
    now_ = metric_.time_to_rational(t);
    cursor_ += batch.size();
    const bool eager = options_.record_phi || options_.observer;
    for (const Pending& p : batch) {
      if (p.kind == EventKind::ServerArrival) {
        const ServerId s(p.id);
        arrived_server_[s.index()] = 1;
        arrived_servers_.insert(std::lower_bound(arrived_servers_.begin(), arrived_servers_.end(), p.id),
                                p.id);
        add_source(s);
      } else {
        const RequestId r(p.id);
        arrived_request_[r.index()] = 1;
        arrived_requests_.push_back(p.id);
        free_requests_.insert(std::lower_bound(free_requests_.begin(), free_requests_.end(), p.id),
                              p.id);
        add_request_to_search(r);
      }
      if (eager) refresh();
      record_arrival(p);
    }
    refresh();
    for (;;) {
      std::optional<RequestId> fire;
      for (int rid : free_requests_) {
        const auto& due = scheduled_[RequestId(rid).index()];
        if (due && !(now_t_ < *due)) {
          fire = RequestId(rid);
          break;
        }
      }
      if (!fire) break;
      augment(*fire);
    }
  }

  void augment(RequestId ri) {
    const Int phi = *search_phi(ri);
    std::vector<PhiEntry> before;
    if (options_.record_phi) before = phi_entries();

    std::vector<int> reached;
    const auto dist = forward_search(ri, phi, reached);
    ForwardGraph g{this, &reached};
    auto indices = detail::lex_min_path(g, space_.of(ri), dist, [&](int idx) {
      return space_.is_real_server(idx) && arrived_server_[static_cast<std::size_t>(idx - m_)] &&
             !m_off_.saturated(ServerId(idx - m_ + 1));
    });
    if (!indices || dist.at(indices->back()) != phi) {
      throw InvariantError("forward and reverse searches disagree for r" + std::to_string(ri.value));
    }
    const AugPath path = detail::to_path(space_, *indices);
    const ServerId partner = path.terminal().as_server();

    detail::apply_dual_steps(metric_, duals_, space_, dist, phi, path);
    augment_in_place(m_off_, path);
    m_online_.add(ri, partner);
    match_time_[ri.index()] = now_t_;
    free_requests_.erase(std::find(free_requests_.begin(), free_requests_.end(), ri.value));
    scheduled_[ri.index()].reset();
    ++version_[ri.index()];
    invalidate();

    const Rational phi_q = metric_.value_to_rational(phi);
    trace_.matches[ri.index()] = {ri, partner, now_, phi_q};

    if (options_.check_invariants) {
      const InvariantReport report = check_invariants(metric_, duals_, m_off_, now_t_);
      if (!report.ok()) {
        const auto& v = report.violations.front();
        throw InvariantError(to_string(v.kind) + " violated after augmenting r" +
                             std::to_string(ri.value) + ": " + v.detail);
      }
    }
    const Event ev{now_, EventKind::Augmentation, ri.value};
    if (options_.observer) options_.observer->after_dual_update(snapshot(ev, false));

    refresh();
    TraceEvent te;
    te.time = now_;
    te.kind = EventKind::Augmentation;
    te.id = ri.value;
    te.partner = partner;
    te.path = path;
    te.phi = phi_q;
    if (options_.record_phi) {
      te.phi_before = std::move(before);
      te.phi_after = phi_entries();
    }
    trace_.events.push_back(std::move(te));
    if (options_.observer) options_.observer->after_event(snapshot(ev, true));
  }

  void record_arrival(const Pending& p) {
    TraceEvent te;
    te.time = now_;
    te.kind = p.kind;
    te.id = p.id;
    if (options_.record_phi) te.phi_after = phi_entries();
    trace_.events.push_back(std::move(te));
    if (options_.observer) options_.observer->after_event(snapshot({now_, p.kind, p.id}, true));
  }

  std::vector<PhiEntry> phi_entries() const {
    std::vector<PhiEntry> out;
    out.reserve(free_requests_.size());
    for (int rid : free_requests_) out.push_back({RequestId(rid), phi(RequestId(rid))});
    return out;
  }

  EngineSnapshot snapshot(const Event& ev, bool with_phi) const {
    EngineSnapshot snap;
    snap.now = now_;
    snap.event = ev;
    snap.m_off = m_off_;
    snap.m_online = m_online_;
    snap.duals = duals_.transform([&](const Int& v) { return metric_.value_to_rational(v); });
    for (int sid : arrived_servers_) snap.arrived_servers.push_back(ServerId(sid));
    for (int rid : free_requests_) snap.free_requests.push_back(RequestId(rid));
    snap.phi.resize(static_cast<std::size_t>(m_));
    if (with_phi) {
      for (int rid : free_requests_) snap.phi[static_cast<std::size_t>(rid - 1)] = phi(RequestId(rid));
    }
    return snap;
  }

  const Instance* inst_;
  EngineOptions options_;
  LatticeMetric<Int> metric_;
  int m_;
  VertexSpace space_;

  Int now_t_{0};
  Rational now_;
  std::vector<Pending> pending_;
  std::size_t cursor_ = 0;

  Matching m_off_;
  Matching m_online_;
  DualStore<Int> duals_;
  std::vector<unsigned char> arrived_request_;
  std::vector<unsigned char> arrived_server_;
  std::vector<int> arrived_requests_;  // arrival order
  std::vector<int> arrived_servers_;   // ascending id
  std::vector<int> free_requests_;     // ascending id
  std::vector<Int> match_time_;

  // Reverse search state.
  bool stale_ = true;
  std::vector<Int> dist_;
  std::vector<unsigned char> settled_;
  int unsettled_free_ = 0;
  OpenSet<Int> open_;
  int next_ = -1;
  std::int64_t coord_bound_ = 0;
  Int radius_{0};

  // Ready timings; stale queue entries are skipped by version.
  std::vector<std::optional<Int>> scheduled_;
  std::vector<std::uint64_t> version_;
  using ReadyEntry = std::tuple<Int, int, std::uint64_t>;
  mutable std::priority_queue<ReadyEntry, std::vector<ReadyEntry>, std::greater<ReadyEntry>> ready_;

  Trace trace_;
};

std::unique_ptr<EngineCore> make_core(const Instance& inst, const Gamma& gamma,
                                      const EngineOptions& options, Backend backend) {
  if (backend == Backend::Auto) {
    backend = LatticeScale::of(inst, gamma).fits_int64(inst) ? Backend::Int64 : Backend::BigInt;
  }
  if (backend == Backend::Int64) return std::make_unique<LatticeEngine<Checked64>>(inst, gamma, options);
  return std::make_unique<LatticeEngine<BigInt>>(inst, gamma, options);
}

}  // namespace

VrmEngine::VrmEngine(const Instance& inst, Gamma gamma, EngineOptions options)
    : core_(make_core(inst, gamma, options, options.backend)) {}
VrmEngine::VrmEngine(VrmEngine&&) noexcept = default;
VrmEngine& VrmEngine::operator=(VrmEngine&&) noexcept = default;
VrmEngine::~VrmEngine() = default;

bool VrmEngine::done() const { return core_->done(); }
const Rational& VrmEngine::now() const { return core_->now(); }
Backend VrmEngine::backend() const { return core_->backend(); }
std::optional<Rational> VrmEngine::next_time() const { return core_->next_time(); }
void VrmEngine::step() { core_->step(); }
void VrmEngine::process_tick(const Rational& time, std::span<const Event> batch) {
  core_->process_tick(time, batch);
}
std::optional<Rational> VrmEngine::phi(RequestId r) const { return core_->phi(r); }
const Matching& VrmEngine::offline_matching() const { return core_->offline_matching(); }
const Trace& VrmEngine::trace() const { return core_->trace(); }
Solution VrmEngine::solution() const { return core_->solution(); }

RunResult run(const Instance& inst, const Gamma& gamma, EngineOptions options) {
  auto drive = [&](Backend backend) {
    EngineOptions opts = options;
    opts.backend = backend;
    VrmEngine engine(inst, gamma, opts);
    while (!engine.done()) engine.step();
    return RunResult{engine.solution(), engine.trace()};
  };
  if (options.backend != Backend::Auto) return drive(options.backend);
  if (LatticeScale::of(inst, gamma).fits_int64(inst)) {
    try {
      return drive(Backend::Int64);
    } catch (const LatticeOverflow&) {
      if (options.observer) options.observer->restarted();
    }
  }
  return drive(Backend::BigInt);
}

}  // namespace vrm
