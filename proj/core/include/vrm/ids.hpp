#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>

namespace vrm {

// Dense 1-based identifier within one role.
template <class Tag>
struct Id {
  int value = 0;

  constexpr Id() = default;
  constexpr explicit Id(int v) : value(v) {}

  constexpr std::size_t index() const { return static_cast<std::size_t>(value - 1); }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using RequestId = Id<struct RequestTag>;
using ServerId = Id<struct ServerTag>;

enum class Role { Request, Server };

// A vertex of an alternating path: a request, a real server, or the moving
// virtual (MV) server owned by a request. MV servers carry the owner's id.
struct Vertex {
  Role role = Role::Request;
  bool moving_virtual = false;
  int id = 0;

  static constexpr Vertex request(RequestId r) { return {Role::Request, false, r.value}; }
  static constexpr Vertex server(ServerId s) { return {Role::Server, false, s.value}; }
  static constexpr Vertex mv_server(RequestId owner) { return {Role::Server, true, owner.value}; }

  constexpr bool is_request() const { return role == Role::Request; }
  constexpr bool is_real_server() const { return role == Role::Server && !moving_virtual; }
  constexpr RequestId as_request() const { return RequestId(id); }
  constexpr ServerId as_server() const { return ServerId(id); }

  // Requests < real servers (by id) < MV servers (by owner id).
  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

// "r3", "s2", "~s4" (MV server of r4).
std::string to_string(const Vertex& v);

}  // namespace vrm
