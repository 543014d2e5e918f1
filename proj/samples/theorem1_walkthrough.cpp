// Walks a few primes p = a^2 + c^4 through both routes to 16 | h(-4p):
// the explicit 2-adic square test on varpi_0 and the reduced-form class number.

#include <iostream>

#include "rank16/rank16.hpp"

int main() {
  using namespace rank16;
  for (u64 p : {17ULL, 41ULL, 257ULL, 857ULL}) {
    const PrimeWitness w = decompose_two_squares(p);
    const ClassData cd = class_number_enum(p);
    std::cout << "p = " << p << " = " << w.a << "^2 + " << *w.c << "^4, h(-4p) = " << cd.h << "\n";
    const Theorem1Case kind = theorem1_case(w.a, static_cast<i64>(*w.c));
    std::cout << "  congruence case: " << to_string(kind) << "\n";
    if (kind == Theorem1Case::NOT8) continue;

    const GaussInt pi = normalize_pi(w);
    const Dyadic root = hensel_sqrt(pi, Dyadic::kDefaultPrecision);
    const Dyadic varpi = omega0(w, root);
    std::cout << "  pi = " << pi << ", sqrt(pi) = " << root << "\n"
              << "  varpi_0 = " << varpi << " is " << (is_square_unit(varpi) ? "" : "not ")
              << "a square in Q_2(i)\n";
  }
}
