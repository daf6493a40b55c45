#pragma once

// Dual variables, slack graphs and minimum net-cost augmenting paths.
//
// For a free request r_i the slack graph holds R_sat + {r_i} on one side and
// the arrived real servers plus MV servers on the other:
//   matched s -> r         weight 0
//   unmatched r -> s       weight gamma*D(r,s) - z(r) - z(s)
//   r_p -> ~s_p (optional) weight gamma*(t - a(r_p)) - z(r_p)
// Under the dual invariants every weight is non-negative and a path's weight
// equals its net cost, so shortest paths are minimum net-cost augmenting paths.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vrm/detail/shortest_path.hpp"
#include "vrm/errors.hpp"
#include "vrm/ids.hpp"
#include "vrm/netcost.hpp"
#include "vrm/rational.hpp"

namespace vrm {

// z(.) over requests and real servers; MV server duals are identically 0.
template <class Value>
class DualStore {
 public:
  DualStore() = default;
  explicit DualStore(int m)
      : requests_(static_cast<std::size_t>(m), Value(0)),
        servers_(static_cast<std::size_t>(m), Value(0)) {}

  int m() const { return static_cast<int>(requests_.size()); }
  // Ids must lie in 1..m.
  const Value& operator[](RequestId r) const { return requests_[r.index()]; }
  Value& operator[](RequestId r) { return requests_[r.index()]; }
  const Value& operator[](ServerId s) const { return servers_[s.index()]; }
  Value& operator[](ServerId s) { return servers_[s.index()]; }

  template <class Convert>
  auto transform(Convert&& convert) const {
    using Out = std::decay_t<decltype(convert(std::declval<const Value&>()))>;
    DualStore<Out> out(m());
    for (int i = 1; i <= m(); ++i) {
      out[RequestId(i)] = convert((*this)[RequestId(i)]);
      out[ServerId(i)] = convert((*this)[ServerId(i)]);
    }
    return out;
  }

  friend bool operator==(const DualStore&, const DualStore&) = default;

 private:
  std::vector<Value> requests_;
  std::vector<Value> servers_;
};

// Vertex numbering shared by every slack-graph representation:
// requests [0, m), real servers [m, 2m), MV servers [2m, 3m). Ascending index
// order is the lexicographic tie-break order of Vertex.
struct VertexSpace {
  int m = 0;

  int size() const { return 3 * m; }
  int of(RequestId r) const { return r.value - 1; }
  int of(ServerId s) const { return m + s.value - 1; }
  int mv_of(RequestId owner) const { return 2 * m + owner.value - 1; }
  int of(const Vertex& v) const {
    if (v.is_request()) return of(v.as_request());
    return v.moving_virtual ? mv_of(v.as_request()) : of(v.as_server());
  }
  Vertex at(int idx) const {
    if (idx < m) return Vertex::request(RequestId(idx + 1));
    if (idx < 2 * m) return Vertex::server(ServerId(idx - m + 1));
    return Vertex::mv_server(RequestId(idx - 2 * m + 1));
  }
  bool is_request(int idx) const { return idx < m; }
  bool is_real_server(int idx) const { return idx >= m && idx < 2 * m; }
  bool is_mv(int idx) const { return idx >= 2 * m; }
};

template <class Value>
struct PathResult {
  AugPath path;
  Value net_cost;
};

template <class Value>
struct SlackEdge {
  Vertex from;
  Vertex to;
  Value weight;
};

template <class Value>
class SlackGraph {
 public:
  struct Edge {
    int to;
    Value weight;
  };

  int vertex_count() const { return space_.size(); }
  template <class F>
  void for_each_out(int u, F&& f) const {
    for (const Edge& e : out_[static_cast<std::size_t>(u)]) f(e.to, e.weight);
  }

  const VertexSpace& space() const { return space_; }
  RequestId source() const { return source_; }
  bool has_virtual() const { return virtual_; }
  bool contains(const Vertex& v) const { return present_[static_cast<std::size_t>(space_.of(v))]; }
  bool is_free_server(int idx) const { return free_server_[static_cast<std::size_t>(idx)]; }

  std::optional<Value> weight(const Vertex& from, const Vertex& to) const {
    const int t = space_.of(to);
    for (const Edge& e : out_[static_cast<std::size_t>(space_.of(from))]) {
      if (e.to == t) return e.weight;
    }
    return std::nullopt;
  }

  // sl(r_i, v): shortest distance from the source, nullopt when unreachable.
  std::optional<Value> distance(const Vertex& v) const { return dist_.get(space_.of(v)); }
  const detail::Distances<Value>& distances() const { return dist_; }

  std::vector<SlackEdge<Value>> edges() const {
    std::vector<SlackEdge<Value>> out;
    for (int u = 0; u < vertex_count(); ++u) {
      for (const Edge& e : out_[static_cast<std::size_t>(u)]) {
        out.push_back({space_.at(u), space_.at(e.to), e.weight});
      }
    }
    return out;
  }

  template <class Metric>
  friend SlackGraph<typename Metric::value_type> build_slack_graph(
      const Metric& metric, RequestId source, const typename Metric::time_type& now,
      const Matching& m_off, const DualStore<typename Metric::value_type>& duals,
      std::span<const ServerId> arrived_servers, bool include_virtual);

 private:
  VertexSpace space_;
  RequestId source_;
  bool virtual_ = false;
  std::vector<unsigned char> present_;
  std::vector<unsigned char> free_server_;
  std::vector<std::vector<Edge>> out_;
  detail::Distances<Value> dist_;
};

// Throws PreconditionError if `source` is saturated or has not arrived, and
// InvariantError on any negative slack.
template <class Metric>
SlackGraph<typename Metric::value_type> build_slack_graph(
    const Metric& metric, RequestId source, const typename Metric::time_type& now,
    const Matching& m_off, const DualStore<typename Metric::value_type>& duals,
    std::span<const ServerId> arrived_servers, bool include_virtual) {
  using Value = typename Metric::value_type;
  const int m = metric.m();
  if (m_off.saturated(source)) {
    throw PreconditionError("slack graph source r" + std::to_string(source.value) +
                            " is saturated");
  }
  if (now < metric.request_arrival(source)) {
    throw PreconditionError("slack graph source r" + std::to_string(source.value) +
                            " has not arrived");
  }

  SlackGraph<Value> g;
  g.space_ = VertexSpace{m};
  g.source_ = source;
  g.virtual_ = include_virtual;
  const auto n = static_cast<std::size_t>(g.space_.size());
  g.present_.assign(n, 0);
  g.free_server_.assign(n, 0);
  g.out_.assign(n, {});

  std::vector<RequestId> requests;
  for (int i = 1; i <= m; ++i) {
    const RequestId r(i);
    if (r == source || m_off.saturated(r)) requests.push_back(r);
  }
  std::vector<ServerId> servers(arrived_servers.begin(), arrived_servers.end());
  std::sort(servers.begin(), servers.end());

  for (RequestId r : requests) g.present_[static_cast<std::size_t>(g.space_.of(r))] = 1;
  for (ServerId s : servers) {
    const auto idx = static_cast<std::size_t>(g.space_.of(s));
    g.present_[idx] = 1;
    if (!m_off.saturated(s)) g.free_server_[idx] = 1;
  }

  auto check = [](const Value& w, const Vertex& from, const Vertex& to) {
    if (w < Value(0)) {
      throw InvariantError("negative slack on edge " + to_string(from) + "->" + to_string(to));
    }
  };

  for (RequestId r : requests) {
    auto& out = g.out_[static_cast<std::size_t>(g.space_.of(r))];
    for (ServerId s : servers) {
      if (m_off.contains(r, s)) continue;
      Value w = metric.gamma_distance(r, s) - duals[r] - duals[s];
      check(w, Vertex::request(r), Vertex::server(s));
      out.push_back({g.space_.of(s), std::move(w)});
    }
    if (include_virtual) {
      Value w = metric.gamma_wait(r, now) - duals[r];
      check(w, Vertex::request(r), Vertex::mv_server(r));
      const auto mv = static_cast<std::size_t>(g.space_.mv_of(r));
      g.present_[mv] = 1;
      out.push_back({g.space_.mv_of(r), std::move(w)});
    }
  }
  for (ServerId s : servers) {
    if (auto r = m_off.mate(s)) {
      g.out_[static_cast<std::size_t>(g.space_.of(s))].push_back({g.space_.of(*r), Value(0)});
    }
  }

  g.dist_ = detail::dijkstra<Value>(g, g.space_.of(source));
  return g;
}

namespace detail {

inline AugPath to_path(const VertexSpace& space, const std::vector<int>& indices) {
  std::vector<Vertex> vs;
  vs.reserve(indices.size());
  for (int idx : indices) vs.push_back(space.at(idx));
  return AugPath(std::move(vs));
}

// Step 1 raises requests and lowers real servers that are strictly closer to
// the source than s*; Step 2 lowers z(r) by (gamma-1)D(r,s) on each forward
// edge of the augmenting path.
template <class Metric>
void apply_dual_steps(const Metric& metric, DualStore<typename Metric::value_type>& duals,
                      const VertexSpace& space,
                      const Distances<typename Metric::value_type>& dist,
                      const typename Metric::value_type& phi, const AugPath& path) {
  for (int idx = 0; idx < space.size(); ++idx) {
    if (!dist.has(idx) || !(dist.at(idx) < phi) || space.is_mv(idx)) continue;
    const Vertex v = space.at(idx);
    if (v.is_request()) {
      duals[v.as_request()] += phi - dist.at(idx);
    } else {
      duals[v.as_server()] -= phi - dist.at(idx);
    }
  }
  const auto& vs = path.vertices();
  for (std::size_t k = 0; k + 1 < vs.size(); k += 2) {
    const RequestId r = vs[k].as_request();
    duals[r] -= metric.gamma_minus_one_distance(r, vs[k + 1].as_server());
  }
}

}  // namespace detail

// Minimum net-cost real augmenting path from the source; nullopt when no
// free real server has arrived (net cost treated as +infinity).
template <class Value>
std::optional<PathResult<Value>> min_real_aug_path(const SlackGraph<Value>& g) {
  const VertexSpace& space = g.space();
  auto path = detail::lex_min_path(g, space.of(g.source()), g.distances(),
                                   [&](int idx) { return g.is_free_server(idx); });
  if (!path) return std::nullopt;
  Value phi = g.distances().at(path->back());
  return PathResult<Value>{detail::to_path(space, *path), std::move(phi)};
}

// Minimum net-cost virtual augmenting path; the graph must include MV servers.
template <class Value>
PathResult<Value> min_virtual_aug_path(const SlackGraph<Value>& g) {
  if (!g.has_virtual()) throw PreconditionError("slack graph was built without MV servers");
  const VertexSpace& space = g.space();
  auto path = detail::lex_min_path(g, space.of(g.source()), g.distances(),
                                   [&](int idx) { return space.is_mv(idx); });
  if (!path) throw InvariantError("no virtual augmenting path from the source");
  Value phi = g.distances().at(path->back());
  return PathResult<Value>{detail::to_path(space, *path), std::move(phi)};
}

// In-place dual update after augmenting along `p_star`, the minimum real path
// of `pre`. Throws InvariantError if p_star is not a shortest source-to-free
// server path of `pre`.
template <class Metric>
void apply_dual_update(const Metric& metric, DualStore<typename Metric::value_type>& duals,
                       const SlackGraph<typename Metric::value_type>& pre, const AugPath& p_star) {
  using Value = typename Metric::value_type;
  const VertexSpace& space = pre.space();
  if (p_star.empty() || p_star.kind() != PathKind::Real ||
      p_star.origin() != Vertex::request(pre.source())) {
    throw InvariantError("dual update path does not start at the slack graph source");
  }
  const int terminal = space.of(p_star.terminal());
  if (!pre.is_free_server(terminal)) {
    throw InvariantError("dual update path does not end at a free server");
  }
  Value length(0);
  const auto& vs = p_star.vertices();
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    auto w = pre.weight(vs[k], vs[k + 1]);
    if (!w) {
      throw InvariantError("dual update path edge " + to_string(vs[k]) + "->" +
                           to_string(vs[k + 1]) + " is not in the slack graph");
    }
    length += *w;
  }
  const auto& dist = pre.distances();
  for (int idx = 0; idx < space.size(); ++idx) {
    if (pre.is_free_server(idx) && dist.has(idx) && dist.at(idx) < length) {
      throw InvariantError("dual update path is not a minimum augmenting path");
    }
  }
  if (!dist.has(terminal) || dist.at(terminal) != length) {
    throw InvariantError("dual update path is not a shortest path");
  }
  detail::apply_dual_steps(metric, duals, space, dist, length, p_star);
}

template <class Metric>
DualStore<typename Metric::value_type> dual_update(
    const Metric& metric, const DualStore<typename Metric::value_type>& duals,
    const SlackGraph<typename Metric::value_type>& pre, const AugPath& p_star) {
  DualStore<typename Metric::value_type> out = duals;
  apply_dual_update(metric, out, pre, p_star);
  return out;
}

enum class InvariantKind { Feasibility, MovingFeasibility, ZeroOnFree, Tightness };

std::string to_string(InvariantKind kind);

struct InvariantViolation {
  InvariantKind kind;
  std::optional<RequestId> request;
  std::optional<ServerId> server;
  std::string detail;
};

struct InvariantReport {
  std::vector<InvariantViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Audits, exactly:
//   I1 z(r) + z(s) <= gamma*D(r,s)        every request/server pair
//   I2 z(r) <= gamma*(t - a(r))           every request arrived by `now`
//   I3 z(v) = 0                           every agent unsaturated by m_off
//   I4 z(r) + z(s) = D(r,s)               every pair of m_off
template <class Metric>
InvariantReport check_invariants(const Metric& metric,
                                 const DualStore<typename Metric::value_type>& duals,
                                 const Matching& m_off, const typename Metric::time_type& now) {
  using Value = typename Metric::value_type;
  InvariantReport report;
  const int m = metric.m();
  auto add = [&](InvariantKind kind, std::optional<RequestId> r, std::optional<ServerId> s,
                 std::string detail) {
    report.violations.push_back({kind, r, s, std::move(detail)});
  };
  for (int i = 1; i <= m; ++i) {
    const RequestId r(i);
    for (int j = 1; j <= m; ++j) {
      const ServerId s(j);
      if (metric.gamma_distance(r, s) < duals[r] + duals[s]) {
        add(InvariantKind::Feasibility, r, s,
            "z(r" + std::to_string(i) + ")+z(s" + std::to_string(j) + ") exceeds gamma*D");
      }
    }
    if (!(now < metric.request_arrival(r)) && metric.gamma_wait(r, now) < duals[r]) {
      add(InvariantKind::MovingFeasibility, r, std::nullopt,
          "z(r" + std::to_string(i) + ") exceeds gamma*(t-a)");
    }
    if (!m_off.saturated(r) && duals[r] != Value(0)) {
      add(InvariantKind::ZeroOnFree, r, std::nullopt,
          "unsaturated r" + std::to_string(i) + " has non-zero dual");
    }
    if (!m_off.saturated(ServerId(i)) && duals[ServerId(i)] != Value(0)) {
      add(InvariantKind::ZeroOnFree, std::nullopt, ServerId(i),
          "unsaturated s" + std::to_string(i) + " has non-zero dual");
    }
  }
  for (const auto& [r, s] : m_off.pairs()) {
    if (duals[r] + duals[s] != metric.distance(r, s)) {
      add(InvariantKind::Tightness, r, s,
          "pair (r" + std::to_string(r.value) + ",s" + std::to_string(s.value) + ") is not tight");
    }
  }
  return report;
}

// Bellman-Ford distances from the source, indexed like graph.space().
template <class Value>
std::vector<std::optional<Value>> bellman_ford_distances(const SlackGraph<Value>& g) {
  return detail::bellman_ford<Value>(g, g.space().of(g.source()));
}

// JSON adjacency dump; weights as "p/q".
std::string slack_graph_json(const std::vector<SlackEdge<Rational>>& edges, RequestId source);

template <class Metric>
std::string slack_graph_json(const Metric& metric,
                             const SlackGraph<typename Metric::value_type>& g) {
  std::vector<SlackEdge<Rational>> edges;
  for (const auto& e : g.edges()) edges.push_back({e.from, e.to, metric.value_to_rational(e.weight)});
  return slack_graph_json(edges, g.source());
}

}  // namespace vrm
