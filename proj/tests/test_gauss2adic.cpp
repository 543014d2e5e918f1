#include <random>

#include <gtest/gtest.h>

#include "rank16/experiments.hpp"
#include "rank16/gauss2adic.hpp"

using namespace rank16;

namespace {

// Reference m-adic valuation by exact repeated division by 1 + i:
// x + iy is divisible by 1 + i iff x = y mod 2, with quotient ((x+y)/2, (y-x)/2).
int ref_valuation(i128 x, i128 y, int cap) {
  int v = 0;
  while (v < cap) {
    if (x == 0 && y == 0) return cap;
    if (((x - y) & 1) != 0) return v;
    const i128 nx = (x + y) / 2;
    const i128 ny = (y - x) / 2;
    x = nx;
    y = ny;
    ++v;
  }
  return cap;
}

struct Small {
  i128 re, im;
};

Small mul(Small a, Small b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

i128 to_i128(const bigint& v) { return static_cast<i128>(static_cast<long long>(v)); }

// All s = x + iy, 0 <= x, y < 2^bits, with s^2 = pi mod m^k and s = 1 mod m^3.
std::vector<Small> brute_roots(Small pi, int k, int bits) {
  std::vector<Small> out;
  const i128 n = i128{1} << bits;
  for (i128 x = 0; x < n; ++x) {
    for (i128 y = 0; y < n; ++y) {
      const Small s{x, y};
      const Small sq = mul(s, s);
      if (ref_valuation(sq.re - pi.re, sq.im - pi.im, k) < k) continue;
      if (ref_valuation(x - 1, y, 3) < 3) continue;
      out.push_back(s);
    }
  }
  return out;
}

Small words(const Dyadic& z) { return {static_cast<i128>(z.re()), static_cast<i128>(z.im())}; }

}  // namespace

TEST(MValuation, SpotValues) {
  EXPECT_EQ(m_valuation(Dyadic(1, 1)).value, 1);
  EXPECT_EQ(m_valuation(Dyadic(0, 2)).value, 2);
  EXPECT_EQ(m_valuation(Dyadic(4, 4)).value, 5);
  EXPECT_FALSE(m_valuation(Dyadic(4, 4)).at_least);
  EXPECT_EQ(m_valuation(Dyadic(1, 0)).value, 0);
}

TEST(MValuation, SaturatesAtPrecision) {
  const MValuation zero = m_valuation(Dyadic(0, 0, 9));
  EXPECT_TRUE(zero.at_least);
  EXPECT_EQ(zero.value, 9);
  const MValuation big = m_valuation(Dyadic(16, 0, 7));  // v = 8 >= 7
  EXPECT_TRUE(big.at_least);
  EXPECT_EQ(big.value, 7);
}

// m^3 = -2 + 2i is not a rational-integer multiple of anything useful: at odd
// precision 3, 2 + 2i vanishes although its coordinates are nonzero mod 4.
TEST(MValuation, OddPrecisionIsNotCoordinatewise) {
  const Dyadic z(2, 2, 3);
  EXPECT_NE(z.re(), 0U);
  EXPECT_TRUE(z.valuation().at_least);
  EXPECT_TRUE(z.congruent(Dyadic(0, 0, 3), 3));
  EXPECT_FALSE(Dyadic(2, 0, 3).congruent(Dyadic(0, 0, 3), 3));
}

TEST(MValuation, MatchesRepeatedDivision) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<i64> coord(-(i64{1} << 30), i64{1} << 30);
  for (int trial = 0; trial < 5000; ++trial) {
    const i64 x = coord(rng) << (trial % 7);
    const i64 y = coord(rng) << (trial % 5);
    const int k = 1 + trial % 60;
    const MValuation v = Dyadic(x, y, k).valuation();
    const int ref = ref_valuation(x, y, k);
    ASSERT_EQ(v.value, ref) << x << "+" << y << "i at precision " << k;
    ASSERT_EQ(v.at_least, ref >= k);
  }
}

TEST(Dyadic, ArithmeticMatchesExactProducts) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> coord(-1'000'000, 1'000'000);
  for (int trial = 0; trial < 2000; ++trial) {
    const Small a{coord(rng), coord(rng)};
    const Small b{coord(rng), coord(rng)};
    const int k = 1 + trial % 80;
    const Dyadic prod = Dyadic(static_cast<i64>(a.re), static_cast<i64>(a.im), k) *
                        Dyadic(static_cast<i64>(b.re), static_cast<i64>(b.im), k);
    const Small exact = mul(a, b);
    ASSERT_TRUE(prod.congruent(Dyadic(static_cast<i64>(exact.re), static_cast<i64>(exact.im), k), k));
  }
}

TEST(IsSquareUnit, SpotValues) {
  EXPECT_TRUE(is_square_unit(Dyadic(1, 0)));
  EXPECT_TRUE(is_square_unit(Dyadic(-7, 0)));
  EXPECT_FALSE(is_square_unit(Dyadic(0, 1)));
}

TEST(IsSquareUnit, RejectsNonUnitsAndLowPrecision) {
  EXPECT_THROW(is_square_unit(Dyadic(1, 1)), precondition_error);
  EXPECT_THROW(is_square_unit(Dyadic(1, 0, 4)), precondition_error);
  EXPECT_THROW(is_unramified_unit(Dyadic(2, 0)), precondition_error);
  EXPECT_THROW(is_unramified_unit(Dyadic(1, 0, 3)), precondition_error);
}

TEST(IsUnramifiedUnit, SpotValues) {
  EXPECT_TRUE(is_unramified_unit(Dyadic(1, 0)));
  EXPECT_TRUE(is_unramified_unit(Dyadic(-3, 0)));
  EXPECT_FALSE(is_unramified_unit(Dyadic(1, 2)));
}

// A unit z is a square iff z = s^2 mod m^5 for some unit s (the quotient then
// lies in U^(5), which consists of squares).  Enumerate s mod m^6.
TEST(IsSquareUnit, MatchesBruteForceSquareClasses) {
  std::vector<Small> squares;
  for (i128 x = 0; x < 8; ++x) {
    for (i128 y = 0; y < 8; ++y) {
      if (((x + y) & 1) == 0) continue;
      squares.push_back(mul({x, y}, {x, y}));
    }
  }
  for (i64 x = 0; x < 16; ++x) {
    for (i64 y = 0; y < 16; ++y) {
      const Dyadic z(x, y, 8);
      if (!z.is_unit()) continue;
      bool brute = false;
      for (const Small& s : squares) brute = brute || ref_valuation(s.re - x, s.im - y, 5) >= 5;
      ASSERT_EQ(is_square_unit(z), brute) << x << "+" << y << "i";
      if (brute) {
        ASSERT_TRUE(is_unramified_unit(z));
      }
    }
  }
}

TEST(NormalizePi, SpotValues) {
  EXPECT_EQ(normalize_pi(decompose_two_squares(41)), GaussInt(5, 4));
  EXPECT_EQ(normalize_pi(decompose_two_squares(257)), GaussInt(1, 16));
  // Normalized witness for 113 has a = -7, and -7 + 8 = 1 mod 8.
  EXPECT_EQ(normalize_pi(decompose_two_squares(113)), GaussInt(-7, 8));
  // An unnormalized witness with a = 7 needs the sign flip: -(7 + 8i).
  const PrimeWitness raw{113, 7, 8, std::nullopt};
  const GaussInt flipped = normalize_pi(raw);
  EXPECT_EQ(flipped, GaussInt(-7, -8));
  for (const GaussInt& pi : {GaussInt(5, 4), GaussInt(-7, 8), flipped}) {
    EXPECT_GE(ref_valuation(to_i128(pi.re) - 1, to_i128(pi.im), 64), 5) << pi;
    EXPECT_TRUE(is_square_unit(Dyadic::from(pi, 12)));
  }
}

TEST(NormalizePi, RejectsWhenEightDoesNotDivideH) {
  EXPECT_THROW(normalize_pi(decompose_two_squares(17)), precondition_error);  // 1 + 4 = 5 mod 8
  EXPECT_THROW(normalize_pi(decompose_two_squares(73)), precondition_error);  // 73 = 3^2 + 8^2, -3 + 8 = 5
}

TEST(HenselSqrt, IdentityRoot) {
  const Dyadic s = hensel_sqrt(GaussInt(1, 0), 10);
  EXPECT_TRUE(s.congruent(Dyadic(1, 0, 10), 10));
}

TEST(HenselSqrt, MinusSevenAgainstBruteForce) {
  const Small pi{-7, 0};
  const Dyadic s = hensel_sqrt(GaussInt(-7, 0), 6);
  // Every root mod m^6 pinned to 1 mod m^3 agrees with s mod m^4.
  const auto roots = brute_roots(pi, 6, 4);
  ASSERT_FALSE(roots.empty());
  for (const Small& r : roots) EXPECT_GE(ref_valuation(r.re - words(s).re, r.im - words(s).im, 4), 4);
  // Roots of the mod m^8 problem agree with s to the full precision 6.
  const auto finer = brute_roots(pi, 8, 5);
  ASSERT_FALSE(finer.empty());
  for (const Small& r : finer) EXPECT_GE(ref_valuation(r.re - words(s).re, r.im - words(s).im, 6), 6);
}

TEST(HenselSqrt, FortyOneAgainstBruteForce) {
  const Small pi{5, 4};
  const Dyadic s = hensel_sqrt(GaussInt(5, 4), 7);
  const Small sq = mul(words(s), words(s));
  EXPECT_GE(ref_valuation(sq.re - 5, sq.im - 4, 7), 7);
  EXPECT_GE(ref_valuation(words(s).re - 1, words(s).im, 3), 3);
  const auto roots = brute_roots(pi, 9, 5);
  ASSERT_FALSE(roots.empty());
  for (const Small& r : roots) EXPECT_GE(ref_valuation(r.re - words(s).re, r.im - words(s).im, 7), 7);
}

TEST(HenselSqrt, RejectsBadInputs) {
  EXPECT_THROW(hensel_sqrt(GaussInt(3, 0), 9), precondition_error);
  EXPECT_THROW(hensel_sqrt(GaussInt(1, 2), 9), precondition_error);
  EXPECT_THROW(hensel_sqrt(GaussInt(1, 0), 2), precondition_error);
}

TEST(HenselSqrt, RandomLiftsSquareBack) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<i64> coord(-(i64{1} << 20), i64{1} << 20);
  const GaussInt m5(-4, -4);  // (1 + i)^5
  for (int trial = 0; trial < 300; ++trial) {
    const GaussInt pi = GaussInt(1, 0) + m5 * GaussInt(coord(rng), coord(rng));
    const int k = 3 + trial % 38;
    const Dyadic s = hensel_sqrt(pi, k);
    const Small sw = words(s);
    const Small sq = mul(sw, sw);
    ASSERT_GE(ref_valuation(sq.re - to_i128(pi.re), sq.im - to_i128(pi.im), k), k) << pi << " K=" << k;
    ASSERT_GE(ref_valuation(sw.re - 1, sw.im, 3), 3);
  }
}

TEST(SquaringMap, RaisesUnitLevelByTwo) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> coord(-(i64{1} << 15), i64{1} << 15);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 3 + trial % 20;
    const Dyadic u = Dyadic(1, 0, 60) + Dyadic::m_power(k, 60) * Dyadic(coord(rng), coord(rng), 60);
    ASSERT_TRUE((u * u).congruent(Dyadic(1, 0, 60), k + 2));
  }
}

TEST(Omega0, SpotValues) {
  const Dyadic s41 = hensel_sqrt(GaussInt(5, 4), 9);
  const Dyadic w41 = omega0(decompose_two_squares(41), s41);
  EXPECT_TRUE(w41.congruent(Dyadic(2, 2, 9) + s41, 9));
  EXPECT_EQ(w41.precision(), 9);

  EXPECT_TRUE(omega0(u64{0}, s41).congruent(s41, 9));

  const Dyadic s257 = hensel_sqrt(GaussInt(1, 16), 9);
  EXPECT_TRUE(omega0(decompose_two_squares(257), s257).congruent(Dyadic(4, 4, 9) + s257, 9));

  EXPECT_THROW(omega0(decompose_two_squares(113), s41), precondition_error);
}

TEST(Omega0, NormIdentityHolds) {
  for (const QuarticPrime& q : quartic_primes(300'000)) {
    if (theorem1_case(q.a, static_cast<i64>(q.c)) == Theorem1Case::NOT8) continue;
    const GaussInt pi = pi_for_quartic(q.a, q.c);
    for (int k : {7, 9, 20}) {
      const Dyadic s = hensel_sqrt(pi, k);
      const Dyadic lhs = omega0(q.c, s) * omega2(q.c, s);
      ASSERT_TRUE(lhs.congruent(Dyadic::from(-pi.conj(), k), k)) << q.p;
    }
  }
}

TEST(SixteenDivides, SpotValues) {
  EXPECT_TRUE(sixteen_divides(decompose_two_squares(257)));
  EXPECT_FALSE(sixteen_divides(decompose_two_squares(41)));
  EXPECT_TRUE(sixteen_divides(decompose_two_squares(857)));
}

TEST(SixteenDivides, RejectsOutsideItsDomain) {
  EXPECT_THROW(sixteen_divides(decompose_two_squares(17)), precondition_error);
  EXPECT_THROW(sixteen_divides(decompose_two_squares(113)), precondition_error);
}

TEST(Theorem1Case, SpotValues) {
  EXPECT_EQ(theorem1_case(1, 4), Theorem1Case::DIV16);
  EXPECT_EQ(theorem1_case(5, 2), Theorem1Case::EXACTLY8);
  EXPECT_EQ(theorem1_case(1, 2), Theorem1Case::NOT8);
  EXPECT_EQ(theorem1_case(-3, 2), Theorem1Case::DIV16);
  EXPECT_EQ(theorem1_case(71, 4), Theorem1Case::EXACTLY8);
  EXPECT_THROW(theorem1_case(2, 2), precondition_error);
  EXPECT_THROW(theorem1_case(1, 3), precondition_error);
}

TEST(Theorem1Case, NotEightIsExactlyTheBadSumClass) {
  for (i64 a = -31; a < 32; a += 2) {
    for (i64 c = -16; c <= 16; c += 2) {
      const i64 r = (((a + c * c) % 8) + 8) % 8;
      ASSERT_EQ(theorem1_case(a, c) == Theorem1Case::NOT8, r != 1 && r != 7) << a << "," << c;
    }
  }
}

// The 2-adic route depends only on a mod 64 and c mod 16 at this precision,
// so every residue class can be replayed without primality.
TEST(SixteenDivides, AgreesWithCongruencesOnEveryResidueClass) {
  for (i64 a = 1; a < 256; a += 2) {
    for (u64 c = 0; c < 32; c += 2) {
      if (theorem1_case(a, static_cast<i64>(c)) == Theorem1Case::NOT8) continue;
      const GaussInt pi = pi_for_quartic(a, c);
      const bool two_adic = is_square_unit(omega0(c, hensel_sqrt(pi, Dyadic::kDefaultPrecision)));
      ASSERT_EQ(two_adic, theorem1_case(a, static_cast<i64>(c)) == Theorem1Case::DIV16) << a << "," << c;
    }
  }
}

TEST(SixteenDivides, AgreesWithCongruencesForPrimesBelow300k) {
  for (const QuarticPrime& q : quartic_primes(300'000)) {
    const Theorem1Case kind = theorem1_case(q.a, static_cast<i64>(q.c));
    if (kind == Theorem1Case::NOT8) continue;
    ASSERT_EQ(sixteen_divides(witness_of(q)), kind == Theorem1Case::DIV16) << q.p;
  }
}
