#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dioph {

using BigInt = mpz_class;

BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt& value);

// Floor square root of a non-negative value.
BigInt isqrt(const BigInt& value);

// Root r with r*r == value, or nullopt when value is negative or not a square.
std::optional<BigInt> exact_sqrt(const BigInt& value);

std::size_t bit_length(const BigInt& value);

BigInt pow(const BigInt& base, unsigned long exponent);

std::optional<std::int64_t> to_int64(const BigInt& value);

BigInt from_int128(__int128 value);

// Order used whenever a single witness is picked from a set of candidates:
// 0, 1, -1, 2, -2, ...
inline bool zigzag_less(std::int64_t a, std::int64_t b) {
    const auto ka = a > 0 ? 2 * static_cast<__int128>(a) - 1 : -2 * static_cast<__int128>(a);
    const auto kb = b > 0 ? 2 * static_cast<__int128>(b) - 1 : -2 * static_cast<__int128>(b);
    return ka < kb;
}

}  // namespace dioph
