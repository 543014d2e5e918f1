#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/rational.hpp>

#include "rank16/arith.hpp"
#include "rank16/errors.hpp"

namespace rank16 {

using rational = boost::rational<i64>;

// a = a0 mod q1 together with c = c0 mod q2.
struct CongruencePair {
  u64 a0 = 0;
  u64 q1 = 1;
  u64 c0 = 0;
  u64 q2 = 1;

  [[nodiscard]] u64 modulus() const { return std::lcm(q1, q2); }
  [[nodiscard]] bool well_formed() const { return q1 >= 1 && q2 >= 1 && a0 < q1 && c0 < q2; }

  bool operator==(const CongruencePair&) const = default;
  auto operator<=>(const CongruencePair&) const = default;
};

inline i64 floor_mod(i64 v, u64 m) {
  const i64 r = v % static_cast<i64>(m);
  return r < 0 ? r + static_cast<i64>(m) : r;
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

// A lift (a1, c1) mod q whose value a1^2 + c1^4 shares a factor with q.
struct AdmissibilityViolation {
  u64 a1 = 0;
  u64 c1 = 0;
  u64 modulus = 1;
  u64 residue = 0;  // a1^2 + c1^4 mod modulus

  [[nodiscard]] std::string describe() const {
    return std::to_string(residue) + " = " + std::to_string(a1) + "^2 + " + std::to_string(c1) + "^4 mod " +
           std::to_string(modulus) + " is not invertible mod " + std::to_string(modulus);
  }
};

inline std::optional<AdmissibilityViolation> find_admissibility_violation(const CongruencePair& pair) {
  if (!pair.well_formed()) throw precondition_error("congruence pair is not well formed");
  const u64 q = pair.modulus();
  for (u64 a1 = pair.a0; a1 < q; a1 += pair.q1) {
    const u64 a2 = mul_mod(a1, a1, q);
    for (u64 c1 = pair.c0; c1 < q; c1 += pair.q2) {
      const u64 c2 = mul_mod(c1, c1, q);
      const u64 value = (a2 + mul_mod(c2, c2, q)) % q;
      if (std::gcd(value, q) != 1) return AdmissibilityViolation{a1, c1, q, value};
    }
  }
  return std::nullopt;
}

inline bool is_admissible(const CongruencePair& pair) { return !find_admissibility_violation(pair).has_value(); }

inline void require_admissible(const CongruencePair& pair) {
  if (auto v = find_admissibility_violation(pair)) {
    throw precondition_error("pair (a0=" + std::to_string(pair.a0) + " mod " + std::to_string(pair.q1) + ", c0=" +
                             std::to_string(pair.c0) + " mod " + std::to_string(pair.q2) +
                             ") is not admissible: " + v->describe());
  }
}

// The sixteen pairs a0 odd mod 16, c0 in {0, 2} mod 4, sorted by (a0, c0).
inline std::vector<CongruencePair> standard_pairs() {
  std::vector<CongruencePair> out;
  for (u64 a0 = 1; a0 < 16; a0 += 2) {
    for (u64 c0 : {u64{0}, u64{2}}) out.push_back({a0, 16, c0, 4});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting primes a^2 + c^4
// ---------------------------------------------------------------------------

enum class CountMode { lattice, distinct };

inline constexpr u64 kCountLimit = 10'000'000'000ULL;

namespace detail {

inline u64 fourth_root_floor(u64 x) {
  u64 c = isqrt(isqrt(x));
  while ((c + 1) * (c + 1) * (c + 1) * (c + 1) <= x) ++c;
  return c;
}

// First integer >= lo congruent to r mod q.
inline i64 first_in_class(i64 lo, u64 r, u64 q) {
  return lo + floor_mod(static_cast<i64>(r) - lo, q);
}

inline unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Calls visit(a, c, value) for each lattice point with c in the given strip
// (c values are taken from the list) and a^2 + c^4 <= X prime, a = a0 mod q1.
template <typename Visit>
void scan_strip(u64 X, const std::vector<i64>& cs, u64 a0, u64 q1, Visit&& visit) {
  for (const i64 c : cs) {
    const u64 c2 = static_cast<u64>(c < 0 ? -c : c);
    const u64 c4 = c2 * c2 * c2 * c2;
    if (c4 > X) continue;
    const i64 amax = static_cast<i64>(isqrt(X - c4));
    for (i64 a = first_in_class(-amax, a0, q1); a <= amax; a += static_cast<i64>(q1)) {
      const u64 value = static_cast<u64>(a < 0 ? -a : a) * static_cast<u64>(a < 0 ? -a : a) + c4;
      if (is_prime(value)) visit(a, c, value);
    }
  }
}

// Runs `scan_strip` over all c = c0 mod q2, |c| <= X^(1/4), split across threads.
// Each worker owns one default-constructed Sink; sinks are returned in worker order.
template <typename Sink>
std::vector<Sink> parallel_scan(u64 X, u64 a0, u64 q1, u64 c0, u64 q2, unsigned threads) {
  const i64 cmax = static_cast<i64>(fourth_root_floor(X));
  std::vector<i64> cs;
  for (i64 c = first_in_class(-cmax, c0, q2); c <= cmax; c += static_cast<i64>(q2)) cs.push_back(c);
  const auto strips = static_cast<unsigned>(std::max<std::size_t>(cs.size(), 1));
  const unsigned n = std::min(resolve_threads(threads), strips);
  std::vector<Sink> sinks(n);
  // Interleave strips so small |c| (long strips) spread over all workers.
  auto work = [&](unsigned t) {
    std::vector<i64> mine;
    for (std::size_t i = t; i < cs.size(); i += n) mine.push_back(cs[i]);
    scan_strip(X, mine, a0, q1, [&](i64 a, i64 c, u64 v) { sinks[t].add(a, c, v); });
  };
  if (n == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return sinks;
}

struct LatticeSink {
  u64 count = 0;
  void add(i64, i64, u64) { ++count; }
};

struct PrimeSink {
  std::vector<u64> primes;
  void add(i64, i64, u64 v) { primes.push_back(v); }
};

}  // namespace detail

// Sorted, de-duplicated primes a^2 + c^4 <= X with (a, c) in the pair's class.
inline std::vector<u64> represented_primes(u64 X, const CongruencePair& pair, unsigned threads = 1) {
  if (!pair.well_formed()) throw precondition_error("count_primes: congruence pair is not well formed");
  std::vector<u64> all;
  for (auto& s : detail::parallel_scan<detail::PrimeSink>(X, pair.a0, pair.q1, pair.c0, pair.q2, threads)) {
    all.insert(all.end(), s.primes.begin(), s.primes.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

// Lattice mode counts integer pairs (a, c) of both signs with multiplicity;
// distinct mode counts the primes so represented.
inline u64 count_primes(u64 X, const CongruencePair& pair, CountMode mode, unsigned threads = 1) {
  if (!pair.well_formed()) throw precondition_error("count_primes: congruence pair is not well formed");
  if (X > kCountLimit) throw precondition_error("count_primes: X exceeds 1e10");
  if (mode == CountMode::distinct) return represented_primes(X, pair, threads).size();
  u64 total = 0;
  for (auto& s : detail::parallel_scan<detail::LatticeSink>(X, pair.a0, pair.q1, pair.c0, pair.q2, threads)) {
    total += s.count;
  }
  return total;
}

// One pass over every lattice point, binned by (a mod q1, c mod q2).
struct Census {
  u64 X = 0;
  u64 q1 = 1;
  u64 q2 = 1;
  std::vector<u64> lattice;                // index a_res * q2 + c_res
  std::vector<std::vector<u64>> primes;    // sorted, unique, same indexing

  [[nodiscard]] std::size_t index(u64 a_res, u64 c_res) const { return a_res * q2 + c_res; }
  [[nodiscard]] u64 lattice_count(u64 a_res, u64 c_res) const { return lattice[index(a_res, c_res)]; }
  [[nodiscard]] u64 distinct_count(u64 a_res, u64 c_res) const { return primes[index(a_res, c_res)].size(); }
  [[nodiscard]] u64 total_lattice() const { return std::accumulate(lattice.begin(), lattice.end(), u64{0}); }
};

inline Census census(u64 X, u64 q1, u64 q2, unsigned threads = 1) {
  if (X > kCountLimit) throw precondition_error("census: X exceeds 1e10");
  if (q1 == 0 || q2 == 0) throw precondition_error("census: moduli must be positive");
  // Scan with a0 = 0 mod 1, c0 = 0 mod 1, then bin.
  struct AllSink {
    std::vector<std::pair<i64, i64>> ac;
    std::vector<u64> values;
    void add(i64 a, i64 c, u64 v) {
      ac.emplace_back(a, c);
      values.push_back(v);
    }
  };
  Census out;
  out.X = X;
  out.q1 = q1;
  out.q2 = q2;
  out.lattice.assign(q1 * q2, 0);
  out.primes.assign(q1 * q2, {});
  for (auto& s : detail::parallel_scan<AllSink>(X, 0, 1, 0, 1, threads)) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const auto [a, c] = s.ac[i];
      const std::size_t cell = out.index(static_cast<u64>(floor_mod(a, q1)), static_cast<u64>(floor_mod(c, q2)));
      ++out.lattice[cell];
      out.primes[cell].push_back(s.values[i]);
    }
  }
  for (auto& list : out.primes) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

// Adaptive Simpson on [lo, hi] to absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol) {
  struct Rec {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
      return run(a, m, fa, flm, fm, left, eps / 2, depth - 1) + run(m, b, fm, frm, fb, right, eps / 2, depth - 1);
    }
  };
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}.run(lo, hi, fa, fm, fb, whole, tol, 60);
}

inline double kappa_integrand(double t) { return std::sqrt(std::max(0.0, 1.0 - t * t * t * t)); }

// kappa = int_0^1 (1 - t^4)^(1/2) dt.  The substitution t = 1 - u^2 removes
// the square-root endpoint singularity at t = 1.
inline double kappa(double tol = 1e-12) {
  auto g = [](double u) {
    const double t = 1.0 - u * u;
    return 2.0 * u * kappa_integrand(t);
  };
  return adaptive_simpson(g, 0.0, 1.0, tol);
}

namespace detail {

inline void require_prime_power(u64 p, int j, const char* who) {
  if (!is_prime(p)) throw precondition_error(std::string(who) + ": " + std::to_string(p) + " is not prime");
  if (j < 1) throw precondition_error(std::string(who) + ": exponent must be positive");
  if (j > 2) throw precondition_error(std::string(who) + ": supported on cubefree arguments only");
}

}  // namespace detail

// The sieve density g at p^j, j in {1, 2}.
inline rational g_value(u64 p, int j) {
  detail::require_prime_power(p, j, "g_value");
  if (p == 2) return j == 1 ? rational(1, 2) : rational(1, 4);
  const i64 q = static_cast<i64>(p);
  const i64 chi = chi4(q);
  if (j == 1) return rational(1, q) * (rational(1) + rational(chi) * (rational(1) - rational(1, q)));
  return rational(1, q * q) * (rational(1) + rational(1 + chi) * (rational(1) - rational(1, q)));
}

// The main-term density h at p^j for odd p, j in {1, 2}.
inline rational h_value(u64 p, int j) {
  detail::require_prime_power(p, j, "h_value");
  if (p == 2) throw precondition_error("h_value: p must be odd");
  const i64 q = static_cast<i64>(p);
  const i64 chi = chi4(q);
  if (j == 1) return rational(1 + 2 * (1 + chi), q);
  return rational(q + 2 * (1 + chi), q * q);
}

namespace detail {

inline std::vector<std::pair<u64, int>> factor_small(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % q != 0) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

// Multiplicative extensions; zero off the cubefree integers.
inline rational g_multiplicative(u64 n) {
  rational out(1);
  for (auto [q, e] : detail::factor_small(n)) {
    if (e > 2) return rational(0);
    out *= g_value(q, e);
  }
  return out;
}

inline rational h_multiplicative(u64 n) {
  rational out(1);
  for (auto [q, e] : detail::factor_small(n)) {
    if (e > 2) return rational(0);
    out *= h_value(q, e);
  }
  return out;
}

// c(q1, q2) = (1 / q1 q2) prod_{p | q} (1 - g(p))^-1.
inline rational density_constant(const CongruencePair& pair) {
  require_admissible(pair);
  rational out(1, static_cast<i64>(pair.q1 * pair.q2));
  for (auto [q, e] : detail::factor_small(pair.modulus())) {
    (void)e;
    out /= rational(1) - g_value(q, 1);
  }
  return out;
}

// 16 kappa / pi, the constant of the unconditioned count.
inline double unconditioned_main_term_factor() {
  static const double factor = 16.0 * kappa() / std::numbers::pi;
  return factor;
}

// c(q1, q2) (16 kappa / pi) X^(3/4) / log X.
inline double expected_main_term(u64 X, const CongruencePair& pair) {
  if (X < 2) throw precondition_error("expected_main_term: X must be at least 2");
  return boost::rational_cast<double>(density_constant(pair)) * unconditioned_main_term_factor() *
         std::pow(static_cast<double>(X), 0.75) / std::log(static_cast<double>(X));
}

// Number of alpha mod d with alpha^2 + b^2 = 0 mod d.
inline u64 rho(i64 b, u64 d) {
  if (d == 0) throw precondition_error("rho: modulus must be positive");
  if (d > 1'000'000) throw precondition_error("rho: modulus exceeds 1e6");
  const u64 b2 = mul_mod(static_cast<u64>(floor_mod(b, d)), static_cast<u64>(floor_mod(b, d)), d);
  u64 count = 0;
  for (u64 alpha = 0; alpha < d; ++alpha) {
    if ((mul_mod(alpha, alpha, d) + b2) % d == 0) ++count;
  }
  return count;
}

}  // namespace rank16
