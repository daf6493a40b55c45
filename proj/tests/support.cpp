#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

namespace vrm::test {

Instance make_instance(const std::vector<Spot>& requests, const std::vector<Spot>& servers) {
  std::vector<Agent> rs, ss;
  int id = 0;
  for (const auto& [pos, arr] : requests) rs.push_back({++id, Role::Request, q(pos), q(arr)});
  id = 0;
  for (const auto& [pos, arr] : servers) ss.push_back({++id, Role::Server, q(pos), q(arr)});
  return Instance(std::move(rs), std::move(ss));
}

Instance single_pair() { return make_instance({{"0", "0"}}, {{"4", "0"}}); }

Instance two_by_two() {
  return make_instance({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"10", "0"}});
}

namespace {

Rational absval(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational dist(const Agent& a, const Agent& b) {
  return absval(a.pos - b.pos) + absval(a.arrival - b.arrival);
}

}  // namespace

Rational oracle_cost(const Instance& inst, const Solution& sol) {
  Rational total;
  for (const MatchRecord& rec : sol.pairs) {
    const Agent& r = inst.request(rec.request);
    const Agent& s = inst.server(rec.server);
    total += absval(r.pos - s.pos);
    total += rec.match_time - r.arrival;
    total += rec.match_time - s.arrival;
  }
  return total;
}

Rational oracle_net_cost(const Instance& inst, const std::vector<Vertex>& path, const Rational& gamma,
                         const Rational& t) {
  Rational total;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Vertex& a = path[k];
    const Vertex& b = path[k + 1];
    if (a.is_request() && b.moving_virtual) {
      total += gamma * (t - inst.request(a.as_request()).arrival);
    } else if (a.is_request()) {
      total += gamma * dist(inst.request(a.as_request()), inst.server(b.as_server()));
    } else {
      total -= dist(inst.request(b.as_request()), inst.server(a.as_server()));
    }
  }
  return total;
}

Rational oracle_opt(const Instance& inst) {
  std::vector<int> perm(static_cast<std::size_t>(inst.m()));
  std::iota(perm.begin(), perm.end(), 1);
  std::optional<Rational> best;
  do {
    Rational c;
    for (int i = 1; i <= inst.m(); ++i) {
      c += dist(inst.request(RequestId(i)), inst.server(ServerId(perm[static_cast<std::size_t>(i - 1)])));
    }
    if (!best || c < *best) best = c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

namespace {

struct NaiveState {
  const Instance* inst;
  Rational gamma;
  std::vector<int> server_of;   // by request id - 1; 0 = free
  std::vector<int> request_of;  // by server id - 1
  std::vector<bool> arrived_s;

  struct Best {
    std::vector<Vertex> path;
    Rational cost;
  };

  void dfs(std::vector<Vertex>& path, std::vector<bool>& used_r, std::vector<bool>& used_s,
           const Rational& cost, std::optional<Best>& best) const {
    const RequestId r = path.back().as_request();
    for (int j = 1; j <= inst->m(); ++j) {
      const auto sj = static_cast<std::size_t>(j - 1);
      if (!arrived_s[sj] || used_s[sj] || server_of[r.index()] == j) continue;
      const Rational c = cost + gamma * dist(inst->request(r), inst->server(ServerId(j)));
      path.push_back(Vertex::server(ServerId(j)));
      used_s[sj] = true;
      const int mate = request_of[sj];
      if (mate == 0) {
        if (!best || c < best->cost || (c == best->cost && path < best->path)) best = Best{path, c};
      } else if (!used_r[static_cast<std::size_t>(mate - 1)]) {
        used_r[static_cast<std::size_t>(mate - 1)] = true;
        path.push_back(Vertex::request(RequestId(mate)));
        dfs(path, used_r, used_s, c - dist(inst->request(RequestId(mate)), inst->server(ServerId(j))),
            best);
        path.pop_back();
        used_r[static_cast<std::size_t>(mate - 1)] = false;
      }
      used_s[sj] = false;
      path.pop_back();
    }
  }

  std::optional<Best> best_path(RequestId r) const {
    std::vector<Vertex> path{Vertex::request(r)};
    std::vector<bool> used_r(static_cast<std::size_t>(inst->m()), false);
    std::vector<bool> used_s(static_cast<std::size_t>(inst->m()), false);
    used_r[r.index()] = true;
    std::optional<Best> best;
    dfs(path, used_r, used_s, Rational(0), best);
    return best;
  }

  void augment(const std::vector<Vertex>& path) {
    for (std::size_t k = 0; k + 1 < path.size(); k += 2) {
      const int r = path[k].id;
      const int s = path[k + 1].id;
      server_of[static_cast<std::size_t>(r - 1)] = s;
      request_of[static_cast<std::size_t>(s - 1)] = r;
    }
  }
};

}  // namespace

NaiveResult naive_vrm(const Instance& inst, const Rational& gamma) {
  const int m = inst.m();
  NaiveState st{&inst, gamma, std::vector<int>(static_cast<std::size_t>(m), 0),
                std::vector<int>(static_cast<std::size_t>(m), 0),
                std::vector<bool>(static_cast<std::size_t>(m), false)};
  std::vector<bool> arrived_r(static_cast<std::size_t>(m), false);
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  NaiveResult out;
  out.phi.resize(static_cast<std::size_t>(m));
  std::set<Rational> arrivals;
  for (const Agent& a : inst.requests()) arrivals.insert(a.arrival);
  for (const Agent& a : inst.servers()) arrivals.insert(a.arrival);

  Rational now(0);
  int matched = 0;
  auto ready_time = [&](int i) -> std::optional<Rational> {
    auto b = st.best_path(RequestId(i));
    if (!b) return std::nullopt;
    return inst.request(RequestId(i)).arrival + b->cost / gamma;
  };
  while (matched < m) {
    std::optional<Rational> next;
    auto it = arrivals.lower_bound(now);
    if (it != arrivals.end()) next = *it;
    for (int i = 1; i <= m; ++i) {
      if (!arrived_r[static_cast<std::size_t>(i - 1)] || done[static_cast<std::size_t>(i - 1)]) continue;
      if (auto t = ready_time(i)) {
        const Rational when = std::max(*t, now);
        if (!next || when < *next) next = when;
      }
    }
    if (!next) throw std::logic_error("naive simulation stalled");
    now = *next;
    arrivals.erase(now);
    for (int j = 1; j <= m; ++j) {
      if (inst.server(ServerId(j)).arrival == now) st.arrived_s[static_cast<std::size_t>(j - 1)] = true;
    }
    for (int i = 1; i <= m; ++i) {
      if (inst.request(RequestId(i)).arrival == now) arrived_r[static_cast<std::size_t>(i - 1)] = true;
    }
    for (;;) {
      int fire = 0;
      std::optional<NaiveState::Best> path;
      for (int i = 1; i <= m && !fire; ++i) {
        if (!arrived_r[static_cast<std::size_t>(i - 1)] || done[static_cast<std::size_t>(i - 1)]) continue;
        auto b = st.best_path(RequestId(i));
        if (b && !(gamma * (now - inst.request(RequestId(i)).arrival) < b->cost)) {
          fire = i;
          path = std::move(b);
        }
      }
      if (!fire) break;
      st.augment(path->path);
      done[static_cast<std::size_t>(fire - 1)] = true;
      ++matched;
      out.phi[static_cast<std::size_t>(fire - 1)] = path->cost;
      out.solution.pairs.push_back({RequestId(fire), path->path.back().as_server(), now});
    }
  }
  std::sort(out.solution.pairs.begin(), out.solution.pairs.end(),
            [](const MatchRecord& a, const MatchRecord& b) { return a.request < b.request; });
  return out;
}

}  // namespace vrm::test
