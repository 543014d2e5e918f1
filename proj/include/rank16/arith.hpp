#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rank16/errors.hpp"

namespace rank16 {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Word-size modular helpers
// ---------------------------------------------------------------------------

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// floor(sqrt(n)) for the full 64-bit range.
inline u64 isqrt(u64 n) {
  if (n < 2) return n;
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::optional<u64> exact_sqrt(u64 n) {
  const u64 r = isqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

// Jacobi symbol (a/n) for odd positive n.
inline int jacobi(i64 a_signed, u64 n) {
  if (n == 0 || (n & 1U) == 0) throw precondition_error("jacobi: modulus must be odd and positive");
  i64 r = a_signed % static_cast<i64>(n);
  u64 a = static_cast<u64>(r < 0 ? r + static_cast<i64>(n) : r);
  int t = 1;
  while (a != 0) {
    while ((a & 1U) == 0) {
      a >>= 1U;
      const u64 nm8 = n & 7U;
      if (nm8 == 3 || nm8 == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3U) == 3 && (n & 3U) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

// Character of conductor 4.
inline int chi4(i64 n) {
  const i64 r = ((n % 4) + 4) % 4;
  if (r == 1) return 1;
  if (r == 3) return -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace detail {

inline bool miller_rabin_round(u64 n, u64 d, int s, u64 witness) {
  const u64 a = witness % n;
  if (a == 0) return true;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

// Deterministic for every n < 2^64 (Sinclair's seven-base set).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  constexpr std::array<u64, 12> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  constexpr std::array<u64, 7> witnesses{2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (u64 w : witnesses) {
    if (!detail::miller_rabin_round(n, d, s, w)) return false;
  }
  return true;
}

// Primes <= limit by a plain sieve of Eratosthenes.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Square roots of -1 and sums of two squares
// ---------------------------------------------------------------------------

// The smaller root r of r^2 = -1 mod p.
inline u64 sqrt_minus_one_mod_p(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) {
    throw precondition_error("sqrt_minus_one_mod_p: p must be a prime congruent to 1 mod 4, got " +
                             std::to_string(p));
  }
  const u64 e = (p - 1) / 4;
  for (u64 n = 2;; ++n) {
    // A non-residue n gives n^((p-1)/4) of order 4.
    if (pow_mod(n, (p - 1) / 2, p) != p - 1) continue;
    const u64 r = pow_mod(n, e, p);
    return r < p - r ? r : p - r;
  }
}

// p = a^2 + b^2 with a odd, a = 1 mod 4, b even and non-negative.  For
// p = 1 mod 8 this forces b = 0 mod 4; c is set when b is a perfect square.
struct PrimeWitness {
  u64 p = 0;
  i64 a = 0;
  u64 b = 0;
  std::optional<u64> c;

  [[nodiscard]] bool has_c() const { return c.has_value(); }
  bool operator==(const PrimeWitness&) const = default;
};

inline bool satisfies_invariants(const PrimeWitness& w) {
  const u64 abs_a = static_cast<u64>(w.a < 0 ? -w.a : w.a);
  const u128 sum = static_cast<u128>(abs_a) * abs_a + static_cast<u128>(w.b) * w.b;
  if (sum != w.p) return false;
  if (((w.a % 4) + 4) % 4 != 1) return false;
  if (w.p % 8 == 1 && w.b % 4 != 0) return false;
  if (w.b % 2 != 0) return false;
  if (w.c) {
    if (*w.c % 2 != 0 || *w.c * *w.c != w.b) return false;
  }
  return true;
}

// Cornacchia descent on (p, r) with r^2 = -1 mod p.
inline PrimeWitness decompose_two_squares(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) {
    throw precondition_error("decompose_two_squares: p must be a prime congruent to 1 mod 4, got " +
                             std::to_string(p));
  }
  const u64 bound = isqrt(p);
  u64 r0 = p;
  u64 r1 = sqrt_minus_one_mod_p(p);
  while (r1 > bound) {
    const u64 t = r0 % r1;
    r0 = r1;
    r1 = t;
  }
  u64 x = r1;
  u64 y = isqrt(p - x * x);
  if (x % 2 == 0) std::swap(x, y);

  PrimeWitness w;
  w.p = p;
  w.a = (x % 4 == 1) ? static_cast<i64>(x) : -static_cast<i64>(x);
  w.b = y;
  if (w.b % 2 == 0) {
    if (auto c = exact_sqrt(w.b); c && *c % 2 == 0) w.c = *c;
  }
  return w;
}

// p = x^2 + 32 y^2 with x, y >= 0, searched exhaustively over y.
inline std::optional<std::pair<u64, u64>> represent_x2_32y2(u64 p) {
  for (u64 y = 0; 32 * y * y <= p; ++y) {
    if (auto x = exact_sqrt(p - 32 * y * y)) return std::pair{*x, y};
  }
  return std::nullopt;
}

// Whether 1 + i is a square mod p, i being either root of -1 mod p.
inline bool one_plus_i_is_square(u64 p) {
  if (p % 8 != 1 || !is_prime(p)) {
    throw precondition_error("one_plus_i_is_square: p must be a prime congruent to 1 mod 8, got " +
                             std::to_string(p));
  }
  const u64 r = sqrt_minus_one_mod_p(p);
  return pow_mod((1 + r) % p, (p - 1) / 2, p) == 1;
}

}  // namespace rank16
