#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rank16/arith.hpp"
#include "rank16/classgroup.hpp"
#include "rank16/errors.hpp"
#include "rank16/gauss2adic.hpp"
#include "rank16/realquad.hpp"
#include "rank16/sievecounts.hpp"

namespace rank16 {

enum class OutputFormat { csv, json, text };

// Parallel map over [0, n), preserving index order in the output.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<Result> out(n);
  const unsigned workers = std::max(1U, std::min<unsigned>(detail::resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  auto run = [&](unsigned t) {
    for (std::size_t i = t; i < n; i += workers) out[i] = fn(i);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Primes of the form a^2 + c^4, c even
// ---------------------------------------------------------------------------

struct QuarticPrime {
  u64 p = 0;
  i64 a = 0;  // normalized a = 1 mod 4
  u64 c = 0;  // c > 0, even
};

// Every prime p = a^2 + c^4 <= limit with c > 0 even, sorted by p.
inline std::vector<QuarticPrime> quartic_primes(u64 limit) {
  std::vector<QuarticPrime> out;
  for (u64 c = 2;; c += 2) {
    const u64 c4 = c * c * c * c;
    if (c4 + 1 > limit) break;
    for (u64 a = 1; a * a + c4 <= limit; a += 2) {
      const u64 p = a * a + c4;
      if (!is_prime(p)) continue;
      out.push_back({p, a % 4 == 1 ? static_cast<i64>(a) : -static_cast<i64>(a), c});
    }
  }
  std::sort(out.begin(), out.end(), [](const QuarticPrime& x, const QuarticPrime& y) { return x.p < y.p; });
  return out;
}

inline PrimeWitness witness_of(const QuarticPrime& q) { return {q.p, q.a, q.c * q.c, q.c}; }

// ---------------------------------------------------------------------------
// Theorem 1 verification
// ---------------------------------------------------------------------------

inline constexpr u64 kVerifyBudget = 2'000'000;

struct VerificationRow {
  u64 p = 0;
  i64 a = 0;
  u64 c = 0;
  Theorem1Case kind = Theorem1Case::NOT8;
  int v2 = 0;
  std::optional<bool> two_adic_16;  // only where 8 | h by congruence
  bool agree = false;
};

struct VerificationReport {
  u64 limit = 0;
  std::vector<VerificationRow> rows;

  [[nodiscard]] std::size_t tally(Theorem1Case k) const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [k](const auto& r) { return r.kind == k; }));
  }
  [[nodiscard]] std::size_t mismatches() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.agree; }));
  }
};

inline VerificationRow verify_quartic_prime(const QuarticPrime& q) {
  VerificationRow row;
  row.p = q.p;
  row.a = q.a;
  row.c = q.c;
  row.kind = theorem1_case(q.a, static_cast<i64>(q.c));
  row.v2 = class_number_enum(q.p).v2;
  switch (row.kind) {
    case Theorem1Case::DIV16:
      row.two_adic_16 = sixteen_divides(witness_of(q));
      row.agree = row.v2 >= 4 && *row.two_adic_16;
      break;
    case Theorem1Case::EXACTLY8:
      row.two_adic_16 = sixteen_divides(witness_of(q));
      row.agree = row.v2 == 3 && !*row.two_adic_16;
      break;
    case Theorem1Case::NOT8:
      row.agree = row.v2 <= 2;
      break;
  }
  return row;
}

inline VerificationReport verify_theorem1(u64 limit, unsigned threads = 1, u64 budget = kVerifyBudget) {
  if (limit > budget) {
    throw precondition_error("verify-theorem1: limit " + std::to_string(limit) + " exceeds the budget of " +
                             std::to_string(budget) + "; rerun with --limit " + std::to_string(budget) +
                             " or smaller");
  }
  const auto primes = quartic_primes(limit);
  VerificationReport report;
  report.limit = limit;
  report.rows = parallel_map<VerificationRow>(primes.size(), threads,
                                              [&](std::size_t i) { return verify_quartic_prime(primes[i]); });
  return report;
}

// ---------------------------------------------------------------------------
// Density reports
// ---------------------------------------------------------------------------

struct CountRow {
  CongruencePair pair;
  u64 X = 0;
  u64 lattice_count = 0;
  u64 distinct_count = 0;
  double expected = 0;
  double ratio = 0;  // lattice_count / expected
};

struct CountReport {
  u64 X = 0;
  CountMode mode = CountMode::lattice;
  std::vector<CountRow> rows;
};

inline CountRow count_row(u64 X, const CongruencePair& pair, u64 lattice, u64 distinct) {
  CountRow row{pair, X, lattice, distinct, expected_main_term(std::max<u64>(X, 2), pair), 0.0};
  row.ratio = static_cast<double>(lattice) / row.expected;
  return row;
}

// Counts for one pair, or for the sixteen standard pairs when `pair` is empty.
inline CountReport density_report(u64 X, const std::optional<CongruencePair>& pair, CountMode mode,
                                  unsigned threads = 1) {
  CountReport report;
  report.X = X;
  report.mode = mode;
  if (pair) {
    require_admissible(*pair);
    report.rows.push_back(count_row(X, *pair, count_primes(X, *pair, CountMode::lattice, threads),
                                    count_primes(X, *pair, CountMode::distinct, threads)));
    return report;
  }
  const Census cs = census(X, 16, 4, threads);
  for (const auto& p : standard_pairs()) {
    report.rows.push_back(count_row(X, p, cs.lattice_count(p.a0, p.c0), cs.distinct_count(p.a0, p.c0)));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fundamental unit report
// ---------------------------------------------------------------------------

struct UnitReport {
  PellUnit unit;
  u64 h = 0;
  std::optional<bool> williams;  // empty when 8 does not divide h
  std::optional<QuarticPrime> quartic;
  std::optional<UnitPrediction> prediction;
  std::optional<bool> prediction_match;
};

// The decomposition p = a^2 + c^4 with c even, if there is one.
inline std::optional<QuarticPrime> as_quartic_prime(u64 p) {
  if (p % 4 != 1 || !is_prime(p)) return std::nullopt;
  const PrimeWitness w = decompose_two_squares(p);
  if (!w.c) return std::nullopt;
  return QuarticPrime{p, w.a, *w.c};
}

inline UnitReport unit_report(u64 p) {
  UnitReport r;
  r.unit = fundamental_unit(p);
  r.h = class_number_enum(p).h;
  if (r.h % 8 == 0) r.williams = williams_check(p, r.h, r.unit);
  r.quartic = as_quartic_prime(p);
  if (r.quartic && theorem1_subcase(r.quartic->a, static_cast<i64>(r.quartic->c)) != 0) {
    r.prediction = corollary2_predict(r.quartic->a, static_cast<i64>(r.quartic->c));
    r.prediction_match = r.prediction->matches(r.unit);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Writers.  CSV and JSON are the stable contract; text is for people.
// ---------------------------------------------------------------------------

inline std::string format_fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline const char* roman(int subcase) {
  static const char* names[] = {"na", "i", "ii", "iii", "iv"};
  return names[(subcase >= 0 && subcase <= 4) ? subcase : 0];
}

inline const char* to_string(CountMode m) { return m == CountMode::lattice ? "lattice" : "distinct"; }

// density --------------------------------------------------------------------

inline void write_csv(std::ostream& os, const CountReport& r) {
  os << "a0,q1,c0,q2,X,lattice_count,distinct_count,expected,ratio\n";
  for (const auto& row : r.rows) {
    os << row.pair.a0 << ',' << row.pair.q1 << ',' << row.pair.c0 << ',' << row.pair.q2 << ',' << row.X << ','
       << row.lattice_count << ',' << row.distinct_count << ',' << format_fixed(row.expected) << ','
       << format_fixed(row.ratio) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const CountReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"a0", row.pair.a0},
                    {"q1", row.pair.q1},
                    {"c0", row.pair.c0},
                    {"q2", row.pair.q2},
                    {"X", row.X},
                    {"lattice_count", row.lattice_count},
                    {"distinct_count", row.distinct_count},
                    {"expected", row.expected},
                    {"ratio", row.ratio}});
  }
  return {{"command", "density"}, {"X", r.X}, {"mode", to_string(r.mode)}, {"rows", rows}};
}

inline void write_text(std::ostream& os, const CountReport& r) {
  os << "primes a^2 + c^4 <= " << r.X << " (" << to_string(r.mode) << " counts)\n";
  for (const auto& row : r.rows) {
    const u64 shown = r.mode == CountMode::lattice ? row.lattice_count : row.distinct_count;
    os << "  a = " << row.pair.a0 << " mod " << row.pair.q1 << ", c = " << row.pair.c0 << " mod " << row.pair.q2
       << ": " << shown << "  (main term " << format_fixed(row.expected, 1) << ", ratio "
       << format_fixed(row.ratio, 4) << ")\n";
  }
}

// verify-theorem1 ------------------------------------------------------------

inline std::string two_adic_field(const VerificationRow& row) {
  if (!row.two_adic_16) return "na";
  return *row.two_adic_16 ? "1" : "0";
}

inline void write_csv(std::ostream& os, const VerificationReport& r) {
  os << "p,a,c,case,v2,two_adic_16,agree\n";
  for (const auto& row : r.rows) {
    os << row.p << ',' << row.a << ',' << row.c << ',' << to_string(row.kind) << ',' << row.v2 << ','
       << two_adic_field(row) << ',' << (row.agree ? 1 : 0) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j{{"p", row.p}, {"a", row.a}, {"c", row.c}, {"case", to_string(row.kind)}, {"v2", row.v2}};
    j["two_adic_16"] = row.two_adic_16 ? nlohmann::ordered_json(*row.two_adic_16) : nlohmann::ordered_json(nullptr);
    j["agree"] = row.agree;
    rows.push_back(std::move(j));
  }
  return {{"command", "verify-theorem1"},
          {"limit", r.limit},
          {"summary",
           {{"DIV16", r.tally(Theorem1Case::DIV16)},
            {"EXACTLY8", r.tally(Theorem1Case::EXACTLY8)},
            {"NOT8", r.tally(Theorem1Case::NOT8)},
            {"mismatches", r.mismatches()}}},
          {"rows", rows}};
}

inline void write_text(std::ostream& os, const VerificationReport& r) {
  os << "primes p = a^2 + c^4 <= " << r.limit << " with c even: " << r.rows.size() << "\n"
     << "  DIV16    " << r.tally(Theorem1Case::DIV16) << "\n"
     << "  EXACTLY8 " << r.tally(Theorem1Case::EXACTLY8) << "\n"
     << "  NOT8     " << r.tally(Theorem1Case::NOT8) << "\n"
     << "  mismatches " << r.mismatches() << (r.mismatches() == 0 ? " (all criteria agree)" : "") << "\n";
  for (const auto& row : r.rows) {
    if (!row.agree) os << "  MISMATCH p=" << row.p << " a=" << row.a << " c=" << row.c << " v2=" << row.v2 << "\n";
  }
}

// unit -----------------------------------------------------------------------

inline std::string williams_field(const UnitReport& r) {
  if (!r.williams) return "refused";
  return *r.williams ? "true" : "false";
}

inline void write_csv(std::ostream& os, const UnitReport& r) {
  os << "p,T,U,norm,T_mod16,U_mod8,h,williams,cor2_case,cor2_T_mod16,cor2_U_mod8,cor2_match\n";
  os << r.unit.p << ',' << r.unit.T << ',' << r.unit.U << ',' << r.unit.norm << ',' << mod_small(r.unit.T, 16) << ','
     << mod_small(r.unit.U, 8) << ',' << r.h << ',' << williams_field(r) << ',';
  if (r.prediction) {
    os << roman(r.prediction->subcase) << ',' << r.prediction->t_mod16 << ",+-" << r.prediction->u_mod8 << ','
       << (*r.prediction_match ? "true" : "false") << '\n';
  } else {
    os << "na,na,na,na\n";
  }
}

inline nlohmann::ordered_json to_json(const UnitReport& r) {
  nlohmann::ordered_json j{{"p", r.unit.p},
                           {"T", r.unit.T.str()},
                           {"U", r.unit.U.str()},
                           {"norm", r.unit.norm},
                           {"T_mod16", mod_small(r.unit.T, 16)},
                           {"U_mod8", mod_small(r.unit.U, 8)},
                           {"h", r.h}};
  j["williams"] = r.williams ? nlohmann::ordered_json(*r.williams) : nlohmann::ordered_json("refused");
  if (r.prediction) {
    j["corollary2"] = {{"case", roman(r.prediction->subcase)},
                       {"T_mod16", r.prediction->t_mod16},
                       {"U_mod8", "+-" + std::to_string(r.prediction->u_mod8)},
                       {"match", *r.prediction_match}};
  } else {
    j["corollary2"] = nullptr;
  }
  return j;
}

inline void write_text(std::ostream& os, const UnitReport& r) {
  os << "p = " << r.unit.p << "\n"
     << "  fundamental unit T + U sqrt(p): T = " << r.unit.T << ", U = " << r.unit.U << ", norm " << r.unit.norm
     << "\n"
     << "  T mod 16 = " << mod_small(r.unit.T, 16) << ", U mod 8 = " << mod_small(r.unit.U, 8) << "\n"
     << "  h(-4p) = " << r.h << "\n";
  if (r.williams) {
    os << "  Williams congruence h = T + p - 1 mod 16: " << (*r.williams ? "holds" : "FAILS") << "\n";
  } else {
    os << "  Williams congruence: refused, 8 does not divide h\n";
  }
  if (r.quartic) os << "  p = " << r.quartic->a << "^2 + " << r.quartic->c << "^4\n";
  if (r.prediction) {
    os << "  case (" << roman(r.prediction->subcase) << ") predicts T = " << r.prediction->t_mod16
       << " mod 16, U = +-" << r.prediction->u_mod8 << " mod 8: " << (*r.prediction_match ? "match" : "MISMATCH")
       << "\n";
  } else {
    os << "  no congruence-case prediction applies\n";
  }
}

}  // namespace rank16
