#include "vrm/lattice.hpp"

#include <boost/integer/common_factor_rt.hpp>

namespace vrm {

void throw_lattice_overflow() { throw LatticeOverflow(); }

LatticeScale LatticeScale::of(const Instance& inst, const Gamma& gamma) {
  LatticeScale s;
  s.L = 1;
  auto fold = [&](const Rational& x) {
    const BigInt& d = denominator(x);
    s.L = s.L / gcd(s.L, d) * d;
  };
  for (const Agent& a : inst.requests()) {
    fold(a.pos);
    fold(a.arrival);
  }
  for (const Agent& a : inst.servers()) {
    fold(a.pos);
    fold(a.arrival);
  }
  s.gamma_num = numerator(gamma.value());
  s.gamma_den = denominator(gamma.value());
  return s;
}

BigInt LatticeScale::magnitude_bound(const Instance& inst) const {
  Rational max_pos(0);
  Rational max_arrival(0);
  auto visit = [&](const Agent& a) {
    max_pos = std::max(max_pos, Rational(abs(a.pos)));
    max_arrival = std::max(max_arrival, a.arrival);
  };
  for (const Agent& a : inst.requests()) visit(a);
  for (const Agent& a : inst.servers()) visit(a);
  // Any TA distance is at most 2*max_pos + max_arrival; path costs, duals and
  // event times stay within a small multiple of (m + 1) such distances.
  const Rational span = Rational(2) * max_pos + Rational(2) * max_arrival + 1;
  const Rational scaled = span * Rational(L);
  const BigInt whole = numerator(scaled) / denominator(scaled) + 1;
  return whole * gamma_num * gamma_den * BigInt(16) * BigInt(inst.m() + 1);
}

bool LatticeScale::fits_int64(const Instance& inst) const {
  return magnitude_bound(inst) < (BigInt(1) << 62);
}

}  // namespace vrm
