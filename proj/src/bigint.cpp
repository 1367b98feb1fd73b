#include "dioph/bigint.hpp"

#include <limits>

#include "dioph/error.hpp"

namespace dioph {

BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) {
        throw ParseError("expected an integer", 0);
    }
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw ParseError("invalid digit in integer '" + s + "'", i);
        }
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    return BigInt(s, 10);
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

BigInt isqrt(const BigInt& value) {
    if (value < 0) {
        throw DomainError("isqrt of negative value");
    }
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), value.get_mpz_t());
    return root;
}

std::optional<BigInt> exact_sqrt(const BigInt& value) {
    if (value < 0 || mpz_perfect_square_p(value.get_mpz_t()) == 0) {
        return std::nullopt;
    }
    return isqrt(value);
}

std::size_t bit_length(const BigInt& value) {
    if (value == 0) {
        return 0;
    }
    return mpz_sizeinbase(value.get_mpz_t(), 2);
}

BigInt pow(const BigInt& base, unsigned long exponent) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

std::optional<std::int64_t> to_int64(const BigInt& value) {
    if (value < std::numeric_limits<std::int64_t>::min() || value > std::numeric_limits<std::int64_t>::max()) {
        return std::nullopt;
    }
    if (value.fits_slong_p()) {
        return static_cast<std::int64_t>(value.get_si());
    }
    return static_cast<std::int64_t>(std::stoll(value.get_str()));
}

BigInt from_int128(__int128 value) {
    const bool negative = value < 0;
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                     : static_cast<unsigned __int128>(value);
    const auto hi = static_cast<unsigned long>(mag >> 64);
    const auto lo = static_cast<unsigned long>(mag & 0xffffffffffffffffULL);
    BigInt out = hi;
    out <<= 64;
    out += lo;
    return negative ? BigInt(-out) : out;
}

}  // namespace dioph
