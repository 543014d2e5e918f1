#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "rank16/arith.hpp"
#include "rank16/errors.hpp"

namespace rank16 {

using bigint = boost::multiprecision::cpp_int;

// Exact Gaussian integer re + im*i.
struct GaussInt {
  bigint re;
  bigint im;

  GaussInt() = default;
  GaussInt(bigint r, bigint i) : re(std::move(r)), im(std::move(i)) {}

  [[nodiscard]] GaussInt conj() const { return {re, -im}; }
  [[nodiscard]] bigint norm() const { return re * re + im * im; }

  friend GaussInt operator+(const GaussInt& x, const GaussInt& y) { return {x.re + y.re, x.im + y.im}; }
  friend GaussInt operator-(const GaussInt& x, const GaussInt& y) { return {x.re - y.re, x.im - y.im}; }
  friend GaussInt operator-(const GaussInt& x) { return {-x.re, -x.im}; }
  friend GaussInt operator*(const GaussInt& x, const GaussInt& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const GaussInt& x, const GaussInt& y) { return x.re == y.re && x.im == y.im; }

  friend std::ostream& operator<<(std::ostream& os, const GaussInt& z) {
    return os << z.re << (z.im < 0 ? "-" : "+") << abs(z.im) << "i";
  }
};

// m-adic valuation of a truncated value: either exact, or "at least K" when
// the value is indistinguishable from zero at the available precision.
struct MValuation {
  int value = 0;
  bool at_least = false;

  [[nodiscard]] bool is_at_least(int k) const { return value >= k; }
  bool operator==(const MValuation&) const = default;
};

// An element x + iy of Z_2[i] known modulo m^K, m = 1 + i.
//
// Coordinates are stored modulo 2^J with J = ceil(K/2).  Since (m^2) = (2),
// the ideal m^K for odd K is not generated by a rational integer, so
// congruence is always decided through the valuation of a difference, never
// coordinatewise.  Arithmetic runs in wrapping 64-bit words, which is exact
// modulo 2^J for every J <= 64.
class Dyadic {
 public:
  static constexpr int kMaxPrecision = 128;
  static constexpr int kDefaultPrecision = 9;

  Dyadic() = default;
  Dyadic(i64 re, i64 im, int precision = kDefaultPrecision)
      : Dyadic(static_cast<u64>(re), static_cast<u64>(im), precision, raw_tag{}) {}

  static Dyadic from_words(u64 re, u64 im, int precision) { return Dyadic(re, im, precision, raw_tag{}); }

  static Dyadic from(const GaussInt& z, int precision) {
    return from_words(low_word(z.re), low_word(z.im), precision);
  }

  // (1 + i)^k at the given precision.
  static Dyadic m_power(int k, int precision) {
    Dyadic out(1, 0, precision);
    const Dyadic m(1, 1, precision);
    for (int j = 0; j < k; ++j) out = out * m;
    return out;
  }

  [[nodiscard]] u64 re() const { return re_; }
  [[nodiscard]] u64 im() const { return im_; }
  [[nodiscard]] int precision() const { return precision_; }
  [[nodiscard]] int word_bits() const { return (precision_ + 1) / 2; }

  [[nodiscard]] Dyadic with_precision(int precision) const {
    return from_words(re_, im_, std::min(precision, precision_));
  }

  // v(x + iy) = v_2(x^2 + y^2), saturating at the precision.
  [[nodiscard]] MValuation valuation() const {
    const int bits = word_bits();
    const int tx = re_ == 0 ? bits : std::min(std::countr_zero(re_), bits);
    const int ty = im_ == 0 ? bits : std::min(std::countr_zero(im_), bits);
    const int t = std::min(tx, ty);
    if (t >= bits) return {precision_, true};
    const bool both_odd = ((re_ >> t) & 1U) != 0 && ((im_ >> t) & 1U) != 0;
    const int v = 2 * t + (both_odd ? 1 : 0);
    if (v >= precision_) return {precision_, true};
    return {v, false};
  }

  [[nodiscard]] bool is_unit() const { return ((re_ ^ im_) & 1U) != 0; }

  // this == other mod m^k; k may not exceed either precision.
  [[nodiscard]] bool congruent(const Dyadic& other, int k) const {
    if (k > precision_ || k > other.precision_) {
      throw precondition_error("Dyadic::congruent: requested precision " + std::to_string(k) +
                               " exceeds available precision");
    }
    return (*this - other).with_precision(k).valuation().at_least;
  }

  friend Dyadic operator+(const Dyadic& x, const Dyadic& y) {
    return from_words(x.re_ + y.re_, x.im_ + y.im_, std::min(x.precision_, y.precision_));
  }
  friend Dyadic operator-(const Dyadic& x, const Dyadic& y) {
    return from_words(x.re_ - y.re_, x.im_ - y.im_, std::min(x.precision_, y.precision_));
  }
  friend Dyadic operator-(const Dyadic& x) { return from_words(0 - x.re_, 0 - x.im_, x.precision_); }
  friend Dyadic operator*(const Dyadic& x, const Dyadic& y) {
    return from_words(x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_,
                      std::min(x.precision_, y.precision_));
  }

  // Equality at the common precision.
  friend bool operator==(const Dyadic& x, const Dyadic& y) {
    return x.congruent(y, std::min(x.precision_, y.precision_));
  }

  friend std::ostream& operator<<(std::ostream& os, const Dyadic& z) {
    return os << z.re_ << "+" << z.im_ << "i (mod m^" << z.precision_ << ")";
  }

 private:
  struct raw_tag {};

  Dyadic(u64 re, u64 im, int precision, raw_tag) : precision_(precision) {
    if (precision < 1 || precision > kMaxPrecision) {
      throw precondition_error("Dyadic: precision must lie in [1, 128], got " + std::to_string(precision));
    }
    const int bits = word_bits();
    const u64 mask = bits >= 64 ? ~u64{0} : ((u64{1} << bits) - 1);
    re_ = re & mask;
    im_ = im & mask;
  }

  static u64 low_word(const bigint& v) {
    bigint r = v % (bigint(1) << 64);
    if (r < 0) r += bigint(1) << 64;
    return static_cast<u64>(r);
  }

  u64 re_ = 0;
  u64 im_ = 0;
  int precision_ = kDefaultPrecision;
};

// ---------------------------------------------------------------------------
// Predicates on units
// ---------------------------------------------------------------------------

inline MValuation m_valuation(const Dyadic& z) { return z.valuation(); }

namespace detail {

inline void require_unit(const Dyadic& z, int needed, const char* who) {
  if (!z.is_unit()) throw precondition_error(std::string(who) + ": argument is not a unit");
  if (z.precision() < needed) {
    throw precondition_error(std::string(who) + ": precision " + std::to_string(z.precision()) +
                             " is below the required " + std::to_string(needed));
  }
}

inline bool is_pm_one(const Dyadic& z, int k) {
  const Dyadic one(1, 0, z.precision());
  return z.congruent(one, k) || z.congruent(-one, k);
}

}  // namespace detail

// A unit is a square in Q_2(i) iff it is +-1 mod m^5.
inline bool is_square_unit(const Dyadic& z) {
  detail::require_unit(z, 5, "is_square_unit");
  return detail::is_pm_one(z, 5);
}

// Q_2(i, sqrt(z)) is unramified iff z = +-1 mod m^4.
inline bool is_unramified_unit(const Dyadic& z) {
  detail::require_unit(z, 4, "is_unramified_unit");
  return detail::is_pm_one(z, 4);
}

// ---------------------------------------------------------------------------
// pi, sqrt(pi), varpi_0
// ---------------------------------------------------------------------------

// +-(a + bi), sign chosen so that the result is 1 mod m^5, i.e. s(a+b) = 1 mod 8.
inline GaussInt normalize_pi(const PrimeWitness& w) {
  const i64 s = w.a + static_cast<i64>(w.b % 8);
  const i64 r = ((s % 8) + 8) % 8;
  if (r != 1 && r != 7) {
    throw precondition_error("normalize_pi: a+b = " + std::to_string(r) +
                             " mod 8, so 8 does not divide h for p = " + std::to_string(w.p));
  }
  GaussInt pi{bigint(w.a), bigint(w.b)};
  return r == 1 ? pi : -pi;
}

// The square root of pi that is 1 mod m^3, correct modulo m^K.
//
// Lifting proceeds one m-adic digit at a time: with s^2 = pi mod m^k (k >= 5),
// adding m^(k-2) * delta changes s^2 by a unit multiple of m^k * delta, so a
// search over the residues delta in {0, 1, i, 1+i} fixes the next digit.  The
// lift is carried two digits past K because sqrt is only determined modulo
// m^(k-2) by its square modulo m^k.
inline Dyadic hensel_sqrt(const GaussInt& pi, int precision) {
  if (precision < 3 || precision + 2 > Dyadic::kMaxPrecision) {
    throw precondition_error("hensel_sqrt: precision must lie in [3, 126], got " + std::to_string(precision));
  }
  const int work = precision + 2;
  const Dyadic target = Dyadic::from(pi, work);
  const Dyadic one(1, 0, work);
  if (!target.congruent(one, 5)) throw precondition_error("hensel_sqrt: pi is not 1 mod m^5");

  const std::array<Dyadic, 3> deltas{Dyadic(1, 0, work), Dyadic(0, 1, work), Dyadic(1, 1, work)};
  Dyadic s = one;
  for (int k = 5; k < work; ++k) {
    if ((s * s).congruent(target, k + 1)) continue;
    const Dyadic step = Dyadic::m_power(k - 2, work);
    bool lifted = false;
    for (const Dyadic& d : deltas) {
      const Dyadic candidate = s + step * d;
      if ((candidate * candidate).congruent(target, k + 1)) {
        s = candidate;
        lifted = true;
        break;
      }
    }
    if (!lifted) throw std::logic_error("hensel_sqrt: no lift found");
  }
  return s.with_precision(precision);
}

// varpi_0 = c(1+i) + sqrt(pi), at the precision of sqrt_pi.
inline Dyadic omega0(u64 c, const Dyadic& sqrt_pi) {
  const int k = sqrt_pi.precision();
  return Dyadic(static_cast<i64>(c), static_cast<i64>(c), k) + sqrt_pi;
}

inline Dyadic omega0(const PrimeWitness& w, const Dyadic& sqrt_pi) {
  if (!w.c) throw precondition_error("omega0: p = " + std::to_string(w.p) + " is not of the form a^2 + c^4");
  return omega0(*w.c, sqrt_pi);
}

// The conjugate c(1+i) - sqrt(pi).
inline Dyadic omega2(u64 c, const Dyadic& sqrt_pi) {
  const int k = sqrt_pi.precision();
  return Dyadic(static_cast<i64>(c), static_cast<i64>(c), k) - sqrt_pi;
}

// pi = a + c^2 i with a + c^2 = 1 mod 8, flipping the sign of a when a = 3 mod 4.
inline GaussInt pi_for_quartic(i64 a, u64 c) {
  const i64 a1 = (((a % 4) + 4) % 4 == 3) ? -a : a;
  const bigint b = bigint(c) * c;
  const i64 r = static_cast<i64>(((bigint(a1) + b) % 8 + 8) % 8);
  if (r != 1) {
    throw precondition_error("a + c^2 = " + std::to_string(r) + " mod 8; 8 does not divide h");
  }
  return {bigint(a1), b};
}

// 16 | h(-4p) via the 2-adic route: varpi_0 must be a square in Q_2(i).
inline bool sixteen_divides(const PrimeWitness& w) {
  if (!w.c) throw precondition_error("sixteen_divides: p = " + std::to_string(w.p) + " has no c");
  const GaussInt pi = pi_for_quartic(w.a, *w.c);
  const Dyadic root = hensel_sqrt(pi, Dyadic::kDefaultPrecision);
  return is_square_unit(omega0(*w.c, root));
}

// ---------------------------------------------------------------------------
// Congruence classification of p = a^2 + c^4
// ---------------------------------------------------------------------------

enum class Theorem1Case { DIV16, EXACTLY8, NOT8 };

inline const char* to_string(Theorem1Case c) {
  switch (c) {
    case Theorem1Case::DIV16: return "DIV16";
    case Theorem1Case::EXACTLY8: return "EXACTLY8";
    case Theorem1Case::NOT8: return "NOT8";
  }
  return "?";
}

// Which of the four congruence cases (1..4) applies, 0 for none.
//   1: a = +-1 mod 16, c = 0 mod 4      2: a = +-3 mod 16, c = 2 mod 4
//   3: a = +-7 mod 16, c = 0 mod 4      4: a = +-5 mod 16, c = 2 mod 4
inline int theorem1_subcase(i64 a, i64 c) {
  if (a % 2 == 0) throw precondition_error("theorem1_case: a must be odd");
  if (c % 2 != 0) throw precondition_error("theorem1_case: c must be even");
  const i64 r = ((a % 16) + 16) % 16;
  const i64 folded = std::min(r, 16 - r);
  const bool c0 = ((c % 4) + 4) % 4 == 0;
  if (folded == 1 && c0) return 1;
  if (folded == 3 && !c0) return 2;
  if (folded == 7 && c0) return 3;
  if (folded == 5 && !c0) return 4;
  return 0;
}

inline Theorem1Case theorem1_case(i64 a, i64 c) {
  switch (theorem1_subcase(a, c)) {
    case 1:
    case 2: return Theorem1Case::DIV16;
    case 3:
    case 4: return Theorem1Case::EXACTLY8;
    default: return Theorem1Case::NOT8;
  }
}

}  // namespace rank16
