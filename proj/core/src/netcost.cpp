#include "vrm/netcost.hpp"

#include <algorithm>
#include <set>

#include "vrm/errors.hpp"

namespace vrm {

std::string to_string(const Vertex& v) {
  if (v.is_request()) return "r" + std::to_string(v.id);
  return (v.moving_virtual ? "~s" : "s") + std::to_string(v.id);
}

Gamma::Gamma(Rational value) : value_(std::move(value)) {
  if (!(value_ > 1)) throw ConfigError("gamma must exceed 1, got " + to_fraction_string(value_));
}

Matching::Matching(int m)
    : server_of_(static_cast<std::size_t>(m), 0), request_of_(static_cast<std::size_t>(m), 0) {}

std::optional<ServerId> Matching::mate(RequestId r) const {
  const int s = server_of_.at(r.index());
  return s ? std::optional<ServerId>(ServerId(s)) : std::nullopt;
}

std::optional<RequestId> Matching::mate(ServerId s) const {
  const int r = request_of_.at(s.index());
  return r ? std::optional<RequestId>(RequestId(r)) : std::nullopt;
}

bool Matching::contains(RequestId r, ServerId s) const { return server_of_.at(r.index()) == s.value; }

void Matching::add(RequestId r, ServerId s) {
  if (saturated(r) || saturated(s)) {
    throw ValidationError("cannot add (r" + std::to_string(r.value) + ",s" + std::to_string(s.value) +
                          "): endpoint already matched");
  }
  server_of_[r.index()] = s.value;
  request_of_[s.index()] = r.value;
  ++size_;
}

void Matching::remove(RequestId r, ServerId s) {
  if (!contains(r, s)) {
    throw ValidationError("(r" + std::to_string(r.value) + ",s" + std::to_string(s.value) +
                          ") is not in the matching");
  }
  server_of_[r.index()] = 0;
  request_of_[s.index()] = 0;
  --size_;
}

PairList Matching::pairs() const {
  PairList out;
  for (std::size_t i = 0; i < server_of_.size(); ++i) {
    if (server_of_[i]) out.emplace_back(RequestId(static_cast<int>(i) + 1), ServerId(server_of_[i]));
  }
  return out;
}

PathKind AugPath::kind() const {
  return !vertices_.empty() && vertices_.back().moving_virtual ? PathKind::Virtual : PathKind::Real;
}

AugPath AugPath::subpath(std::size_t first, std::size_t last) const {
  if (first > last || last >= vertices_.size()) throw PreconditionError("subpath range out of bounds");
  return AugPath(std::vector<Vertex>(vertices_.begin() + static_cast<std::ptrdiff_t>(first),
                                     vertices_.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

std::string to_string(const AugPath& p) {
  std::string out;
  for (const Vertex& v : p.vertices()) {
    if (!out.empty()) out += ' ';
    out += to_string(v);
  }
  return out;
}

void validate_path_shape(const AugPath& p) {
  const auto& vs = p.vertices();
  std::set<Vertex> seen;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const Vertex& v = vs[k];
    if (!seen.insert(v).second) throw ValidationError("vertex " + to_string(v) + " repeats");
    if (v.id < 1) throw ValidationError("vertex id must be positive");
    if (k > 0 && vs[k - 1].role == v.role) {
      throw ValidationError("edge " + to_string(vs[k - 1]) + "->" + to_string(v) +
                            " does not alternate roles");
    }
    if (v.moving_virtual) {
      if (k + 1 != vs.size()) throw ValidationError("MV server " + to_string(v) + " is not terminal");
      if (k == 0 || vs[k - 1] != Vertex::request(v.as_request())) {
        throw ValidationError("MV server " + to_string(v) + " must follow its owner");
      }
    }
  }
}

namespace {

// Net cost of the real prefix vs[0..count).
Rational real_part(const Instance& inst, const std::vector<Vertex>& vs, std::size_t count,
                   const Gamma& gamma) {
  Rational forward;
  Rational backward;
  const int m = inst.m();
  for (std::size_t k = 0; k + 1 < count; ++k) {
    const Vertex& u = vs[k];
    const Vertex& v = vs[k + 1];
    if (u.id > m || v.id > m) throw ValidationError("vertex id exceeds m");
    if (u.is_request()) {
      forward += ta_distance(inst.request(u.as_request()), inst.server(v.as_server()));
    } else {
      backward += ta_distance(inst.request(v.as_request()), inst.server(u.as_server()));
    }
  }
  return gamma.value() * forward - backward;
}

}  // namespace

Rational net_cost(const Instance& inst, const AugPath& p, const Gamma& gamma) {
  validate_path_shape(p);
  if (p.kind() == PathKind::Virtual) throw ValidationError("net_cost expects a real path");
  return real_part(inst, p.vertices(), p.vertices().size(), gamma);
}

Rational virtual_net_cost(const Instance& inst, const AugPath& p, const Rational& t,
                          const Gamma& gamma) {
  validate_path_shape(p);
  if (p.empty() || p.kind() != PathKind::Virtual) {
    throw ValidationError("virtual_net_cost expects a path ending at an MV server");
  }
  const auto& vs = p.vertices();
  const RequestId owner = vs.back().as_request();
  if (owner.value > inst.m()) throw ValidationError("vertex id exceeds m");
  return real_part(inst, vs, vs.size() - 1, gamma) +
         gamma.value() * mv_distance(inst.request(owner), t);
}

void augment_in_place(Matching& m, const AugPath& p) {
  validate_path_shape(p);
  const auto& vs = p.vertices();
  if (vs.size() < 2 || vs.size() % 2 != 0 || !vs.front().is_request() || p.kind() != PathKind::Real) {
    throw ValidationError("augmenting path must run from a request to a real server");
  }
  for (const Vertex& v : vs) {
    if (v.id > m.m()) throw ValidationError("vertex " + to_string(v) + " exceeds m");
  }
  if (m.saturated(vs.front().as_request())) {
    throw ValidationError("origin " + to_string(vs.front()) + " is saturated");
  }
  if (m.saturated(vs.back().as_server())) {
    throw ValidationError("terminal " + to_string(vs.back()) + " is saturated");
  }
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    const bool forward = k % 2 == 0;
    const RequestId r = forward ? vs[k].as_request() : vs[k + 1].as_request();
    const ServerId s = forward ? vs[k + 1].as_server() : vs[k].as_server();
    if (m.contains(r, s) == forward) {
      throw ValidationError("edge " + to_string(vs[k]) + "->" + to_string(vs[k + 1]) +
                            (forward ? " is already matched" : " is not matched"));
    }
  }
  for (std::size_t k = 1; k + 1 < vs.size(); k += 2) m.remove(vs[k + 1].as_request(), vs[k].as_server());
  for (std::size_t k = 0; k + 1 < vs.size(); k += 2) m.add(vs[k].as_request(), vs[k + 1].as_server());
}

Matching augment(const Matching& m, const AugPath& p) {
  Matching out = m;
  augment_in_place(out, p);
  return out;
}

}  // namespace vrm
