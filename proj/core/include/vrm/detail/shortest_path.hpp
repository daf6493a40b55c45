#pragma once

// Graph-representation-independent shortest path machinery. A Graph provides
//   int vertex_count() const;
//   void for_each_out(int u, F f) const;   // f(int v, const Value& w), v ascending
// All weights are non-negative.

#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace vrm::detail {

template <class Value>
struct Distances {
  std::vector<Value> value;
  std::vector<unsigned char> settled;

  bool has(int v) const { return settled[static_cast<std::size_t>(v)] != 0; }
  const Value& at(int v) const { return value[static_cast<std::size_t>(v)]; }
  std::optional<Value> get(int v) const {
    return has(v) ? std::optional<Value>(at(v)) : std::nullopt;
  }
};

struct NeverStop {
  template <class Value>
  bool operator()(const Value&) const {
    return false;
  }
};

// Multi-source Dijkstra with a binary heap. `stop(d)` is consulted before
// settling the next vertex at distance d; returning true ends the search, so
// every vertex at distance < d is settled and nothing beyond is.
template <class Value, class Graph, class Stop = NeverStop>
Distances<Value> dijkstra(const Graph& g, std::span<const int> sources, Stop stop = {}) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  Distances<Value> d;
  d.value.assign(n, Value(0));
  d.settled.assign(n, 0);
  std::vector<unsigned char> seen(n, 0);

  using Entry = std::pair<Value, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int s : sources) {
    d.value[static_cast<std::size_t>(s)] = Value(0);
    seen[static_cast<std::size_t>(s)] = 1;
    heap.emplace(Value(0), s);
  }
  while (!heap.empty()) {
    const int u = heap.top().second;
    const auto ui = static_cast<std::size_t>(u);
    if (d.settled[ui] || heap.top().first != d.value[ui]) {
      heap.pop();
      continue;
    }
    if (stop(d.value[ui])) break;
    heap.pop();
    d.settled[ui] = 1;
    const Value du = d.value[ui];
    g.for_each_out(u, [&](int v, const Value& w) {
      const auto vi = static_cast<std::size_t>(v);
      if (d.settled[vi]) return;
      Value cand = du + w;
      if (!seen[vi] || cand < d.value[vi]) {
        seen[vi] = 1;
        d.value[vi] = cand;
        heap.emplace(std::move(cand), v);
      }
    });
  }
  return d;
}

template <class Value, class Graph, class Stop = NeverStop>
Distances<Value> dijkstra(const Graph& g, int source, Stop stop = {}) {
  const int sources[] = {source};
  return dijkstra<Value>(g, std::span<const int>(sources), std::move(stop));
}

// Lexicographically smallest vertex sequence among the minimum-distance simple
// paths from `source` to a settled target. Targets must be sinks.
template <class Value, class Graph, class IsTarget>
std::optional<std::vector<int>> lex_min_path(const Graph& g, int source, const Distances<Value>& d,
                                             IsTarget is_target) {
  const int n = g.vertex_count();
  std::optional<Value> best;
  for (int v = 0; v < n; ++v) {
    if (d.has(v) && is_target(v) && (!best || d.at(v) < *best)) best = d.at(v);
  }
  if (!best) return std::nullopt;
  const Value& phi = *best;

  auto tight = [&](int u, int v, const Value& w) {
    return d.has(v) && !(phi < d.at(v)) && d.at(u) + w == d.at(v);
  };

  // useful[v]: an optimal target is reachable from v over tight edges.
  std::vector<std::vector<int>> reverse(static_cast<std::size_t>(n));
  std::vector<int> frontier;
  std::vector<unsigned char> useful(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    if (!d.has(u) || phi < d.at(u)) continue;
    if (is_target(u) && d.at(u) == phi) {
      useful[static_cast<std::size_t>(u)] = 1;
      frontier.push_back(u);
    }
    g.for_each_out(u, [&](int v, const Value& w) {
      if (tight(u, v, w)) reverse[static_cast<std::size_t>(v)].push_back(u);
    });
  }
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (int u : reverse[static_cast<std::size_t>(v)]) {
      if (!useful[static_cast<std::size_t>(u)]) {
        useful[static_cast<std::size_t>(u)] = 1;
        frontier.push_back(u);
      }
    }
  }

  std::vector<int> path{source};
  std::vector<unsigned char> on_path(static_cast<std::size_t>(n), 0);
  on_path[static_cast<std::size_t>(source)] = 1;

  std::function<bool(int)> extend = [&](int u) -> bool {
    if (is_target(u) && d.at(u) == phi) return true;
    std::vector<int> next;
    g.for_each_out(u, [&](int v, const Value& w) {
      const auto vi = static_cast<std::size_t>(v);
      if (useful[vi] && !on_path[vi] && tight(u, v, w)) next.push_back(v);
    });
    for (int v : next) {
      on_path[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      if (extend(v)) return true;
      path.pop_back();
      on_path[static_cast<std::size_t>(v)] = 0;
    }
    return false;
  };
  if (!useful[static_cast<std::size_t>(source)] || !extend(source)) return std::nullopt;
  return path;
}

// O(VE) reference distances.
template <class Value, class Graph>
std::vector<std::optional<Value>> bellman_ford(const Graph& g, int source) {
  const int n = g.vertex_count();
  std::vector<std::optional<Value>> dist(static_cast<std::size_t>(n));
  dist[static_cast<std::size_t>(source)] = Value(0);
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      const auto& du = dist[static_cast<std::size_t>(u)];
      if (!du) continue;
      g.for_each_out(u, [&](int v, const Value& w) {
        auto& dv = dist[static_cast<std::size_t>(v)];
        Value cand = *du + w;
        if (!dv || cand < *dv) {
          dv = std::move(cand);
          changed = true;
        }
      });
    }
    if (!changed) break;
  }
  return dist;
}

}  // namespace vrm::detail
