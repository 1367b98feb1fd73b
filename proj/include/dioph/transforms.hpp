#pragma once

// Solution-set transforms and the small witness finders they rely on.
//
//   tilde        x_i = 1 becomes {x_i * x_j = x_j : all j}; adds the zero tuple
//   hat          D^2 + sum_i (x_i - a_i^2 - b_i^2 - c_i^2 - d_i^2)^2
//   rationalize  x_m = y_m / z_m over 12 integer variables per m

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/ensys.hpp"
#include "dioph/poly.hpp"

namespace dioph::transforms {

ensys::EnSystem tilde(const ensys::EnSystem& s);

// Variables of the result, 0-based: x_i at 5(i-1), then a_i, b_i, c_i, d_i.
poly::Polynomial hat(const poly::Polynomial& d);
inline std::size_t hat_index(std::size_t i0) { return 5 * i0; }

enum class MulEncoding {
    // y_i y_j z_k = y_k z_i z_j; exactly x_i x_j = x_k under x = y / z
    Corrected,
    // (y_i z_j z_k)(y_j z_i z_k) = y_k z_i z_j as printed in the source text;
    // not equivalent in general (x_1 = 1/2, x_2 = 2, x_3 = 1 violates it)
    Verbatim,
};

// Per-variable layout, 12 slots starting at 12(m-1), 0-based.
enum RationalSlot : std::size_t { kY = 0, kZ, kS, kT, kU, kV, kP, kQ, kA, kB, kC, kD, kSlots };
inline std::size_t rational_index(std::uint32_t m, RationalSlot slot) { return kSlots * (m - 1) + slot; }

// One polynomial equation per system equation, then three auxiliaries per
// variable: 1 + s^2 + t^2 + u^2 + v^2 = z, p y + q z = 1, p^2 + a^2 + b^2 + c^2 + d^2 = z^2.
std::vector<poly::PolyEquation> rationalize(const ensys::EnSystem& s, MulEncoding mul = MulEncoding::Corrected);

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    friend auto operator<=>(const Fraction&, const Fraction&) = default;
};

// Distinct rational tuples y_m / z_m read off integer solutions of the
// encoding with every variable in [-box, box].
std::vector<std::vector<Fraction>> rational_solutions_in_box(const ensys::EnSystem& s, std::int64_t box,
                                                             MulEncoding mul = MulEncoding::Corrected);

// Lexicographically smallest non-negative (a, b, c, d) with a^2+b^2+c^2+d^2 = m.
std::array<BigInt, 4> four_square(const BigInt& m);

// A X + B Y = 1 with |X| <= B. Requires gcd(A, B) = 1 and B > 0.
std::pair<BigInt, BigInt> bezout_bounded(const BigInt& a, const BigInt& b);

// (a, b) with a x = (2b - 1)(3b - 1); b is the least positive solution of
// b = 1/2 mod (odd part of x), b = 1/3 mod (2-power part of x).
std::pair<BigInt, BigInt> lemma6_witness(const BigInt& x);

}  // namespace dioph::transforms
