#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrm/ids.hpp"
#include "vrm/instance.hpp"
#include "vrm/rational.hpp"

namespace vrm {

// Weight of request->server edges in the net cost. Must exceed 1.
class Gamma {
 public:
  explicit Gamma(Rational value);
  static Gamma standard() { return Gamma(Rational(3)); }

  const Rational& value() const { return value_; }
  friend bool operator==(const Gamma&, const Gamma&) = default;

 private:
  Rational value_;
};

// Vertex-disjoint request/server pairs with O(1) saturation queries.
class Matching {
 public:
  Matching() = default;
  explicit Matching(int m);

  int m() const { return static_cast<int>(server_of_.size()); }
  std::size_t size() const { return size_; }

  std::optional<ServerId> mate(RequestId r) const;
  std::optional<RequestId> mate(ServerId s) const;
  bool saturated(RequestId r) const { return mate(r).has_value(); }
  bool saturated(ServerId s) const { return mate(s).has_value(); }
  bool contains(RequestId r, ServerId s) const;

  // Throws ValidationError if either endpoint is already matched.
  void add(RequestId r, ServerId s);
  // Throws ValidationError if (r, s) is not a pair.
  void remove(RequestId r, ServerId s);

  PairList pairs() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<int> server_of_;   // 0 = unmatched
  std::vector<int> request_of_;
  std::size_t size_ = 0;
};

enum class PathKind { Real, Virtual };

// Directed alternating path stored as its vertex sequence; edge direction is
// implied by order. An augmenting path reads r'1 s'1 r'2 s'2 ... r'l s'l and a
// virtual one ends with r_p -> ~s_p. Subpaths may start at either role.
class AugPath {
 public:
  AugPath() = default;
  explicit AugPath(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {}

  const std::vector<Vertex>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }
  std::size_t edge_count() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }
  const Vertex& origin() const { return vertices_.front(); }
  const Vertex& terminal() const { return vertices_.back(); }
  PathKind kind() const;

  // Vertices [first, last] inclusive; adjacent subpaths share a boundary vertex.
  AugPath subpath(std::size_t first, std::size_t last) const;

  // Lexicographic by vertex sequence.
  friend auto operator<=>(const AugPath&, const AugPath&) = default;

 private:
  std::vector<Vertex> vertices_;
};

std::string to_string(const AugPath& p);

// Roles alternate, no vertex repeats, and an MV server may only appear last,
// directly after its owner. Throws ValidationError.
void validate_path_shape(const AugPath& p);

// gamma * sum D(r->s) - sum D(s->r). Empty path -> 0. Rejects MV vertices.
Rational net_cost(const Instance& inst, const AugPath& p, const Gamma& gamma);

// Same, with the final r_p -> ~s_p edge measured as t - a(r_p).
Rational virtual_net_cost(const Instance& inst, const AugPath& p, const Rational& t,
                          const Gamma& gamma);

// M xor E(P) for an M-augmenting path from a free request to a free real server.
// Throws ValidationError naming the first violating edge.
Matching augment(const Matching& m, const AugPath& p);
void augment_in_place(Matching& m, const AugPath& p);

}  // namespace vrm
