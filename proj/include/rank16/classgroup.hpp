#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "rank16/arith.hpp"
#include "rank16/errors.hpp"

namespace rank16 {

using i128 = __int128;

// Positive definite binary quadratic form A x^2 + B xy + C y^2.
struct QForm {
  i64 A = 1;
  i64 B = 0;
  i64 C = 1;

  [[nodiscard]] i128 discriminant() const { return static_cast<i128>(B) * B - static_cast<i128>(4) * A * C; }

  [[nodiscard]] bool is_reduced() const {
    const i64 abs_b = B < 0 ? -B : B;
    if (!(abs_b <= A && A <= C)) return false;
    if ((abs_b == A || A == C) && B < 0) return false;
    return true;
  }

  bool operator==(const QForm&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const QForm& f) {
    return os << "(" << f.A << ", " << f.B << ", " << f.C << ")";
  }
};

// The principal form of discriminant -4p.
inline QForm principal_form(u64 p) { return {1, 0, static_cast<i64>(p)}; }

// The form of the ramified prime above 2, (2, 1 + sqrt(-p)).
inline QForm prime_above_two_form(u64 p) {
  if (p % 4 != 1) throw precondition_error("prime_above_two_form: p must be 1 mod 4");
  return {2, 2, static_cast<i64>((p + 1) / 2)};
}

inline QForm reduce(QForm f) {
  if (f.A <= 0 || f.discriminant() >= 0) throw precondition_error("reduce: form is not positive definite");
  for (;;) {
    // Normalize B into (-A, A].
    if (f.B > f.A || f.B <= -f.A) {
      const i64 two_a = 2 * f.A;
      i64 k = (f.A - f.B) / two_a;
      if (f.A - f.B < 0 && (f.A - f.B) % two_a != 0) --k;
      const i64 new_b = f.B + two_a * k;
      // C' = (B'^2 - D) / 4A
      const i128 d = f.discriminant();
      f.C = static_cast<i64>((static_cast<i128>(new_b) * new_b - d) / (4 * static_cast<i128>(f.A)));
      f.B = new_b;
    }
    if (f.A > f.C) {
      f = {f.C, -f.B, f.A};
      continue;
    }
    if (f.A == f.C && f.B < 0) f.B = -f.B;
    return f;
  }
}

namespace detail {

// Returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
inline std::tuple<i64, i64, i64> xgcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
    std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline i64 floor_mod(i128 a, i64 m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<i64>(r);
}

}  // namespace detail

// Gauss composition followed by reduction (Shanks' formulation).
inline QForm compose(const QForm& f, const QForm& g) {
  const i128 disc = f.discriminant();
  if (disc != g.discriminant()) throw precondition_error("compose: discriminants differ");

  const QForm& f1 = f.A <= g.A ? f : g;
  const QForm& f2 = f.A <= g.A ? g : f;
  const i64 s = (f1.B + f2.B) / 2;
  const i64 n = f2.B - s;
  auto [d, y1, v] = detail::xgcd(f2.A, f1.A);  // y1 A2 + v A1 = d
  (void)v;
  auto [d1, x2, y2] = detail::xgcd(s, d);      // x2 s + y2 d = d1
  y2 = -y2;
  const i64 v1 = f1.A / d1;
  const i64 v2 = f2.A / d1;
  const i64 r = detail::floor_mod(static_cast<i128>(y1) * y2 * n - static_cast<i128>(x2) * f2.C, v1);

  QForm out;
  out.A = v1 * v2;
  out.B = static_cast<i64>(f2.B + static_cast<i128>(2) * v2 * r);
  out.C = static_cast<i64>((static_cast<i128>(out.B) * out.B - disc) / (4 * static_cast<i128>(out.A)));
  return reduce(out);
}

struct ClassData {
  u64 p = 0;
  u64 h = 0;
  int v2 = 0;
};

inline int two_adic_valuation(u64 n) { return n == 0 ? 64 : std::countr_zero(n); }

namespace detail {

struct Factor {
  u64 prime;
  int exponent;
};

inline std::vector<Factor> factor_with_table(u64 n, const std::vector<u64>& table) {
  std::vector<Factor> out;
  for (u64 q : table) {
    if (q * q > n) break;
    if (n % q != 0) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.push_back({q, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline const std::vector<u64>& class_number_prime_table() {
  // Covers sqrt(b^2 + p) for every p <= 2e9.
  static const std::vector<u64> table = primes_up_to(52000);
  return table;
}

}  // namespace detail

inline constexpr u64 kClassNumberEnumLimit = 2'000'000'000;

// h(-4p) by counting reduced forms (A, 2b, C) with A C = b^2 + p.
inline ClassData class_number_enum(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) {
    throw precondition_error("class_number_enum: p must be a prime congruent to 1 mod 4, got " +
                             std::to_string(p));
  }
  if (p > kClassNumberEnumLimit) throw precondition_error("class_number_enum: p exceeds 2e9");

  const auto& table = detail::class_number_prime_table();
  u64 h = 0;
  std::vector<u64> divisors;
  // |B| <= A <= C  implies  3 b^2 <= p  with B = 2b.
  for (u64 b = 0; 3 * b * b <= p; ++b) {
    const u64 n = b * b + p;
    divisors.assign(1, 1);
    for (const auto& [q, e] : detail::factor_with_table(n, table)) {
      const std::size_t count = divisors.size();
      u64 power = 1;
      for (int j = 0; j < e; ++j) {
        power *= q;
        for (std::size_t i = 0; i < count; ++i) divisors.push_back(divisors[i] * power);
      }
    }
    for (u64 a : divisors) {
      if (a < 2 * b || a * a > n) continue;
      const u64 c = n / a;
      if (std::gcd(std::gcd(a, 2 * b), c) != 1) continue;
      // (A, +-B, C) are distinct reduced forms unless a boundary case pins B >= 0.
      h += (b == 0 || a == 2 * b || a == c) ? 1 : 2;
    }
  }
  return {p, h, two_adic_valuation(h)};
}

inline constexpr u64 kDirichletLimit = 1'000'000;

// h(-4p) = -(1/|D|) sum_{0<a<|D|} (D/a) a, the analytic class number formula
// for a fundamental discriminant D < -4.
inline u64 class_number_dirichlet(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) {
    throw precondition_error("class_number_dirichlet: p must be a prime congruent to 1 mod 4, got " +
                             std::to_string(p));
  }
  if (p > kDirichletLimit) throw precondition_error("class_number_dirichlet: p exceeds 1e6");
  const i64 disc_abs = 4 * static_cast<i64>(p);
  i64 sum = 0;
  for (i64 a = 1; a < disc_abs; a += 2) {
    // (-4p / a) = (-p / a) for odd a.
    sum += jacobi(-static_cast<i64>(p), static_cast<u64>(a)) * a;
  }
  if (sum > 0 || (-sum) % disc_abs != 0) throw std::logic_error("class_number_dirichlet: non-integral sum");
  return static_cast<u64>(-sum / disc_abs);
}

struct DivisibilityChain {
  bool div2 = false;
  bool div4 = false;
  bool div8_forms = false;   // p = x^2 + 32 y^2
  bool div8_2adic = false;   // 1 + i is a square mod p
  bool div8_decomp = false;  // a + b = +-1 mod 8

  [[nodiscard]] bool div8_consistent() const { return div8_forms == div8_2adic && div8_2adic == div8_decomp; }
};

inline DivisibilityChain divisibility_chain(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) {
    throw precondition_error("divisibility_chain: p must be a prime congruent to 1 mod 4");
  }
  DivisibilityChain out;
  out.div2 = true;
  out.div4 = p % 8 == 1;
  out.div8_forms = represent_x2_32y2(p).has_value();
  if (out.div4) {
    out.div8_2adic = one_plus_i_is_square(p);
    const PrimeWitness w = decompose_two_squares(p);
    const i64 r = ((w.a + static_cast<i64>(w.b % 8)) % 8 + 8) % 8;
    out.div8_decomp = r == 1 || r == 7;
  }
  return out;
}

}  // namespace rank16
