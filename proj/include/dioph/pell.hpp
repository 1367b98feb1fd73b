#pragma once

// X^2 - d Y^2 = 1 with exact arithmetic, and the witnesses y >= 1 for which
// 1 + x^3 (2 + x) y^2 is a square.

#include <cstddef>
#include <vector>

#include "dioph/bigint.hpp"

namespace dioph::pell {

struct Solution {
    BigInt x;
    BigInt y;
    friend bool operator==(const Solution&, const Solution&) = default;
};

// Minimal X > 0, Y > 0. Square factors s^2 of d are split off first: the
// continued fraction runs on d / s^2 and the first power of its fundamental
// unit with s | Y is taken, which keeps large square-rich moduli tractable.
Solution pell_fundamental(const BigInt& d);

// Fundamental solution straight from the continued fraction of sqrt(d).
Solution pell_fundamental_cf(const BigInt& d);

// (X, Y) -> (X X0 + d Y Y0, X Y0 + Y X0)
Solution pell_next(const Solution& current, const Solution& fundamental, const BigInt& d);

// The k-th solution, k >= 1 (k = 1 is the fundamental one), by binary powering.
Solution pell_power(const Solution& fundamental, const BigInt& d, unsigned long k);

// x^3 (2 + x); never a square for x >= 2.
BigInt lemma7_modulus(const BigInt& x);

// The first `count` y >= 1 with 1 + x^3 (2 + x) y^2 a square, increasing.
std::vector<BigInt> lemma7_witnesses(const BigInt& x, std::size_t count);

// Whether y >= x + x^(x-2). Throws DomainError when y is not a witness.
bool lemma8_check(const BigInt& x, const BigInt& y);

}  // namespace dioph::pell
