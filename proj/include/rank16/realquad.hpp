#pragma once

#include <cstdint>
#include <string>

#include "rank16/arith.hpp"
#include "rank16/errors.hpp"
#include "rank16/gauss2adic.hpp"

namespace rank16 {

// Fundamental unit T + U sqrt(p) of Q(sqrt(p)), with T, U > 0.
//
// For p = 1 mod 8 the unit lies in Z[sqrt(p)]: a half-integral unit
// (t + u sqrt(p))/2 with t, u odd needs t^2 - p u^2 = +-4, but the left side
// is 0 mod 8 there.  The continued fraction unit of Z[sqrt(p)] is therefore
// fundamental for the maximal order.
struct PellUnit {
  u64 p = 0;
  bigint T;
  bigint U;
  int norm = 0;

  [[nodiscard]] bool satisfies_norm_equation() const { return T * T - bigint(p) * U * U == norm; }
};

inline constexpr u64 kFundamentalUnitLimit = 10'000'000;

inline int mod_small(const bigint& v, int m) {
  const int r = static_cast<int>(v % m);
  return r < 0 ? r + m : r;
}

// Convergent at the end of the first period of the continued fraction of sqrt(p).
inline PellUnit fundamental_unit(u64 p) {
  if (p % 8 != 1 || !is_prime(p)) {
    throw precondition_error("fundamental_unit: p must be a prime congruent to 1 mod 8, got " + std::to_string(p));
  }
  if (p > kFundamentalUnitLimit) throw precondition_error("fundamental_unit: p exceeds 1e7");

  const u64 a0 = isqrt(p);
  u64 m = 0;
  u64 d = 1;
  u64 a = a0;
  bigint h_prev = 1, h = a0;  // numerators
  bigint k_prev = 0, k = 1;   // denominators
  std::size_t period = 1;
  for (;;) {
    m = d * a - m;
    d = (p - m * m) / d;
    a = (a0 + m) / d;
    if (a == 2 * a0) break;
    bigint h_next = h * a + h_prev;
    bigint k_next = k * a + k_prev;
    h_prev = std::move(h);
    h = std::move(h_next);
    k_prev = std::move(k);
    k = std::move(k_next);
    ++period;
  }
  PellUnit unit{p, std::move(h), std::move(k), period % 2 == 1 ? -1 : 1};
  if (!unit.satisfies_norm_equation()) throw std::logic_error("fundamental_unit: norm equation failed");
  return unit;
}

// h = T + p - 1 mod 16, valid when 8 | h.
inline bool williams_check(u64 p, u64 h, const PellUnit& u) {
  if (h % 8 != 0) {
    throw precondition_error("williams_check: 8 does not divide h = " + std::to_string(h) + " for p = " +
                             std::to_string(p));
  }
  const int rhs = (mod_small(u.T, 16) + static_cast<int>((p - 1) % 16)) % 16;
  return static_cast<int>(h % 16) == rhs;
}

// Predicted T mod 16 and U mod 8 (up to sign) for p = a^2 + c^4.
struct UnitPrediction {
  int subcase = 0;   // 1..4, matching the congruence cases of theorem1_subcase
  int t_mod16 = 0;   // 0 or 8
  int u_mod8 = 0;    // 1 or 5, meaning U = +-u_mod8 mod 8

  [[nodiscard]] bool matches(const PellUnit& unit) const {
    const int u = mod_small(unit.U, 8);
    return mod_small(unit.T, 16) == t_mod16 && (u == u_mod8 || u == 8 - u_mod8);
  }
};

inline UnitPrediction corollary2_predict(i64 a, i64 c) {
  switch (theorem1_subcase(a, c)) {
    case 1: return {1, 0, 1};
    case 2: return {2, 8, 5};
    case 3: return {3, 8, 1};
    case 4: return {4, 0, 5};
    default:
      throw precondition_error("corollary2_predict: (a mod 16, c mod 4) is not one of the four 8 | h classes");
  }
}

}  // namespace rank16
