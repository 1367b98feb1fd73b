#include "dioph/pell.hpp"

#include "dioph/error.hpp"

namespace dioph::pell {

namespace {

void check_modulus(const BigInt& d) {
    if (d < 2) throw DomainError("Pell modulus must be at least 2");
    if (exact_sqrt(d)) throw DomainError("Pell modulus " + d.get_str() + " is a perfect square");
}

// Largest s with s^2 | d among primes below the trial limit.
BigInt square_part(BigInt d) {
    BigInt s = 1;
    constexpr unsigned long kTrialLimit = 1UL << 16;
    for (unsigned long p = 2; p < kTrialLimit; p += (p == 2 ? 1 : 2)) {
        if (BigInt(p) * p > d) break;
        while (mpz_divisible_ui_p(d.get_mpz_t(), p * p)) {
            d /= p * p;
            s *= p;
        }
        while (mpz_divisible_ui_p(d.get_mpz_t(), p)) d /= p;
    }
    return s;
}

Solution multiply(const Solution& a, const Solution& b, const BigInt& d) {
    return {a.x * b.x + d * a.y * b.y, a.x * b.y + a.y * b.x};
}

}  // namespace

Solution pell_fundamental_cf(const BigInt& d) {
    check_modulus(d);
    const BigInt a0 = isqrt(d);
    BigInt m = 0;
    BigInt q = 1;
    BigInt a = a0;
    // convergents h/k
    BigInt h_prev = 1;
    BigInt h = a0;
    BigInt k_prev = 0;
    BigInt k = 1;
    for (;;) {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        if (q == 1) {
            // end of a period: h/k solves X^2 - d Y^2 = +-1
            if (h * h - d * k * k == 1) return {h, k};
        }
        BigInt h_next = a * h + h_prev;
        BigInt k_next = a * k + k_prev;
        h_prev = std::move(h);
        h = std::move(h_next);
        k_prev = std::move(k);
        k = std::move(k_next);
    }
}

Solution pell_fundamental(const BigInt& d) {
    check_modulus(d);
    const BigInt s = square_part(d);
    if (s == 1) return pell_fundamental_cf(d);
    const BigInt core = d / (s * s);
    const Solution unit = pell_fundamental_cf(core);
    // smallest k with s | Y_k, tracked modulo s
    const BigInt x0 = unit.x % s;
    const BigInt y0 = unit.y % s;
    const BigInt c0 = core % s;
    BigInt x = x0;
    BigInt y = y0;
    unsigned long k = 1;
    if (s.fits_slong_p()) {
        using u128 = unsigned __int128;
        const auto mod = static_cast<u128>(s.get_ui());
        const auto X0 = static_cast<u128>(x0.get_ui());
        const auto Y0 = static_cast<u128>(y0.get_ui());
        const auto C = static_cast<u128>(c0.get_ui());
        u128 X = X0;
        u128 Y = Y0;
        while (Y != 0) {
            const u128 nx = (X * X0 % mod + C * (Y * Y0 % mod)) % mod;
            const u128 ny = (X * Y0 + Y * X0) % mod;
            X = nx;
            Y = ny;
            ++k;
        }
    } else {
        while (y != 0) {
            BigInt nx = (x * x0 + c0 * y * y0) % s;
            BigInt ny = (x * y0 + y * x0) % s;
            x = std::move(nx);
            y = std::move(ny);
            ++k;
        }
    }
    const Solution big = pell_power(unit, core, k);
    return {big.x, big.y / s};
}

Solution pell_next(const Solution& current, const Solution& fundamental, const BigInt& d) {
    return multiply(current, fundamental, d);
}

Solution pell_power(const Solution& fundamental, const BigInt& d, unsigned long k) {
    if (k == 0) return {1, 0};
    Solution result{1, 0};
    Solution base = fundamental;
    while (k > 0) {
        if (k & 1UL) result = multiply(result, base, d);
        k >>= 1;
        if (k > 0) base = multiply(base, base, d);
    }
    return result;
}

BigInt lemma7_modulus(const BigInt& x) { return x * x * x * (2 + x); }

std::vector<BigInt> lemma7_witnesses(const BigInt& x, std::size_t count) {
    if (x < 2) throw DomainError("lemma7_witnesses needs x >= 2");
    std::vector<BigInt> out;
    if (count == 0) return out;
    const BigInt d = lemma7_modulus(x);
    if (exact_sqrt(d)) throw Error("x^3 (2 + x) is a perfect square for x = " + x.get_str());
    const Solution f = pell_fundamental(d);
    Solution cur = f;
    out.push_back(cur.y);
    while (out.size() < count) {
        cur = pell_next(cur, f, d);
        out.push_back(cur.y);
    }
    return out;
}

bool lemma8_check(const BigInt& x, const BigInt& y) {
    if (x < 2 || y < 1) throw DomainError("lemma8_check needs x >= 2 and y >= 1");
    if (!exact_sqrt(1 + lemma7_modulus(x) * y * y)) {
        throw DomainError("y = " + y.get_str() + " is not a witness: 1 + x^3 (2 + x) y^2 is not a square");
    }
    if (!x.fits_ulong_p()) throw InfeasibleError("lemma8_check: x^(x-2) is too large to form");
    return y >= x + pow(x, x.get_ui() - 2);
}

}  // namespace dioph::pell
