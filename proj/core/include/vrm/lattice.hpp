#pragma once

// Exact numeric backends for the matching algorithms.
//
// All inputs are rationals, so with L = lcm of every position/arrival
// denominator and gamma = p/q, each dual value, slack and net cost is an
// integer multiple of 1/(qL) and each event time a multiple of 1/(pL).
// In those units gamma*D(r,s) = p*DL, D(r,s) = q*DL (DL = L*D), and
// gamma*(t - a) is simply T - T_a. LatticeMetric stores those integers;
// RationalMetric computes the same quantities directly on rationals.

#include <cstdint>
#include <vector>

#include "vrm/errors.hpp"
#include "vrm/ids.hpp"
#include "vrm/instance.hpp"
#include "vrm/netcost.hpp"
#include "vrm/rational.hpp"

namespace vrm {

[[noreturn]] void throw_lattice_overflow();

// int64 with overflow detection; throws LatticeOverflow.
class Checked64 {
 public:
  constexpr Checked64() = default;
  constexpr Checked64(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  constexpr std::int64_t value() const { return v_; }

  friend Checked64 operator+(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) [[unlikely]] throw_lattice_overflow();
    return r;
  }
  friend Checked64 operator-(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) [[unlikely]] throw_lattice_overflow();
    return r;
  }
  friend Checked64 operator*(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) [[unlikely]] throw_lattice_overflow();
    return r;
  }
  Checked64 operator-() const { return Checked64(0) - *this; }
  Checked64& operator+=(Checked64 o) { return *this = *this + o; }
  Checked64& operator-=(Checked64 o) { return *this = *this - o; }

  friend constexpr auto operator<=>(Checked64, Checked64) = default;

 private:
  std::int64_t v_ = 0;
};

inline Checked64 abs(Checked64 x) { return x < Checked64(0) ? -x : x; }

template <class Int>
Int lattice_cast(const BigInt& v);

template <>
inline Checked64 lattice_cast<Checked64>(const BigInt& v) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN)) throw LatticeOverflow();
  return Checked64(static_cast<std::int64_t>(v));
}

template <>
inline BigInt lattice_cast<BigInt>(const BigInt& v) {
  return v;
}

inline BigInt to_big(Checked64 v) { return BigInt(v.value()); }
inline const BigInt& to_big(const BigInt& v) { return v; }

// Scale factors shared by both lattice backends.
struct LatticeScale {
  BigInt L;          // lcm of all input denominators
  BigInt gamma_num;  // p
  BigInt gamma_den;  // q

  static LatticeScale of(const Instance& inst, const Gamma& gamma);

  Rational cost_unit() const { return Rational(BigInt(1), gamma_den * L); }
  Rational time_unit() const { return Rational(BigInt(1), gamma_num * L); }

  // Conservative magnitude bound for every intermediate quantity of a run.
  BigInt magnitude_bound(const Instance& inst) const;
  bool fits_int64(const Instance& inst) const;
};

// Exact rational evaluation of distances, slacks and waiting costs.
class RationalMetric {
 public:
  using value_type = Rational;
  using time_type = Rational;

  RationalMetric(const Instance& inst, Gamma gamma) : inst_(&inst), gamma_(std::move(gamma)) {}

  int m() const { return inst_->m(); }
  const Instance& instance() const { return *inst_; }
  const Gamma& gamma() const { return gamma_; }

  Rational distance(RequestId r, ServerId s) const {
    return ta_distance(inst_->request(r), inst_->server(s));
  }
  Rational gamma_distance(RequestId r, ServerId s) const { return gamma_.value() * distance(r, s); }
  Rational gamma_minus_one_distance(RequestId r, ServerId s) const {
    return (gamma_.value() - 1) * distance(r, s);
  }
  // gamma * D_t(r, ~s_r) = gamma * (t - a(r)).
  Rational gamma_wait(RequestId r, const Rational& t) const {
    return gamma_.value() * (t - inst_->request(r).arrival);
  }
  const Rational& request_arrival(RequestId r) const { return inst_->request(r).arrival; }
  const Rational& server_arrival(ServerId s) const { return inst_->server(s).arrival; }

  Rational value_to_rational(const Rational& v) const { return v; }
  Rational time_to_rational(const Rational& t) const { return t; }
  Rational value_from_rational(const Rational& v) const { return v; }
  Rational time_from_rational(const Rational& t) const { return t; }

 private:
  const Instance* inst_;
  Gamma gamma_;
};

// Integer-lattice evaluation; Int is Checked64 or BigInt.
template <class Int>
class LatticeMetric {
 public:
  using value_type = Int;
  using time_type = Int;

  LatticeMetric(const Instance& inst, const Gamma& gamma)
      : inst_(&inst), gamma_(gamma), scale_(LatticeScale::of(inst, gamma)) {
    p_ = lattice_cast<Int>(scale_.gamma_num);
    q_ = lattice_cast<Int>(scale_.gamma_den);
    p_minus_q_ = p_ - q_;
    const int m = inst.m();
    req_pos_.reserve(m);
    req_arr_.reserve(m);
    srv_pos_.reserve(m);
    srv_arr_.reserve(m);
    for (const Agent& a : inst.requests()) {
      req_pos_.push_back(scaled(a.pos));
      req_arr_.push_back(scaled(a.arrival));
    }
    for (const Agent& a : inst.servers()) {
      srv_pos_.push_back(scaled(a.pos));
      srv_arr_.push_back(scaled(a.arrival));
    }
    for (std::size_t i = 0; i < req_arr_.size(); ++i) req_time_.push_back(p_ * req_arr_[i]);
    for (std::size_t i = 0; i < srv_arr_.size(); ++i) srv_time_.push_back(p_ * srv_arr_[i]);
  }

  int m() const { return inst_->m(); }
  const Instance& instance() const { return *inst_; }
  const Gamma& gamma() const { return gamma_; }
  const LatticeScale& scale() const { return scale_; }

  // L * D(r, s).
  Int scaled_distance(RequestId r, ServerId s) const {
    using std::abs;
    const Int dx = req_pos_[r.index()] - srv_pos_[s.index()];
    const Int da = req_arr_[r.index()] - srv_arr_[s.index()];
    return abs(dx) + abs(da);
  }
  // Raw lattice coordinates (units of 1/L) and the numerator p of gamma.
  const Int& request_pos(RequestId r) const { return req_pos_[r.index()]; }
  const Int& request_arr(RequestId r) const { return req_arr_[r.index()]; }
  const Int& server_pos(ServerId s) const { return srv_pos_[s.index()]; }
  const Int& server_arr(ServerId s) const { return srv_arr_[s.index()]; }
  const Int& gamma_num() const { return p_; }

  Int distance(RequestId r, ServerId s) const { return q_ * scaled_distance(r, s); }
  Int gamma_distance(RequestId r, ServerId s) const { return p_ * scaled_distance(r, s); }
  Int gamma_minus_one_distance(RequestId r, ServerId s) const {
    return p_minus_q_ * scaled_distance(r, s);
  }
  Int gamma_wait(RequestId r, const Int& t) const { return t - req_time_[r.index()]; }
  const Int& request_arrival(RequestId r) const { return req_time_[r.index()]; }
  const Int& server_arrival(ServerId s) const { return srv_time_[s.index()]; }

  Rational value_to_rational(const Int& v) const {
    return Rational(to_big(v), scale_.gamma_den * scale_.L);
  }
  Rational time_to_rational(const Int& t) const {
    return Rational(to_big(t), scale_.gamma_num * scale_.L);
  }
  // Throws PreconditionError if the value is not on the lattice.
  Int value_from_rational(const Rational& v) const {
    return from_rational(v * Rational(scale_.gamma_den * scale_.L));
  }
  Int time_from_rational(const Rational& t) const {
    return from_rational(t * Rational(scale_.gamma_num * scale_.L));
  }

 private:
  Int scaled(const Rational& x) const { return from_rational(x * Rational(scale_.L)); }
  static Int from_rational(const Rational& x) {
    if (denominator(x) != 1) throw PreconditionError("value is not on the instance lattice");
    return lattice_cast<Int>(numerator(x));
  }

  const Instance* inst_;
  Gamma gamma_;
  LatticeScale scale_;
  Int p_, q_, p_minus_q_;
  std::vector<Int> req_pos_, req_arr_, srv_pos_, srv_arr_;
  std::vector<Int> req_time_, srv_time_;
};

}  // namespace vrm
