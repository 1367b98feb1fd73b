#include "dioph/transforms.hpp"

#include <algorithm>

#include "dioph/error.hpp"
#include "dioph/polysearch.hpp"

namespace dioph::transforms {

using ensys::EnEquation;
using ensys::EnSystem;
using ensys::EqKind;
using poly::Polynomial;

EnSystem tilde(const EnSystem& s) {
    std::vector<EnEquation> out;
    for (const auto& eq : s.equations()) {
        if (eq.kind != EqKind::One) {
            out.push_back(eq);
            continue;
        }
        for (std::uint32_t j = 1; j <= s.n(); ++j) out.push_back(EnEquation::mul(eq.i, j, j));
    }
    return EnSystem(s.n(), std::move(out));
}

Polynomial hat(const Polynomial& d) {
    const std::size_t p = d.num_vars();
    const std::size_t wide = 5 * p;
    std::vector<std::size_t> mapping(p);
    for (std::size_t i = 0; i < p; ++i) mapping[i] = hat_index(i);
    const Polynomial dd = d.remap(wide, mapping);
    Polynomial out = dd * dd;
    for (std::size_t i = 0; i < p; ++i) {
        Polynomial t = Polynomial::variable(wide, hat_index(i));
        for (std::size_t s = 1; s <= 4; ++s) {
            const auto v = Polynomial::variable(wide, hat_index(i) + s);
            t -= v * v;
        }
        out += t * t;
    }
    return out;
}

std::vector<poly::PolyEquation> rationalize(const EnSystem& s, MulEncoding mul) {
    const std::size_t wide = kSlots * s.n();
    const auto var = [&](std::uint32_t m, RationalSlot slot) {
        return Polynomial::variable(wide, rational_index(m, slot));
    };
    const auto y = [&](std::uint32_t m) { return var(m, kY); };
    const auto z = [&](std::uint32_t m) { return var(m, kZ); };
    std::vector<poly::PolyEquation> out;
    for (const auto& eq : s.equations()) {
        const auto i = eq.i;
        const auto j = eq.j;
        const auto k = eq.k;
        switch (eq.kind) {
            case EqKind::One: out.emplace_back(y(i), z(i)); break;
            case EqKind::Add:
                out.emplace_back(y(i) * z(j) * z(k) + y(j) * z(i) * z(k), y(k) * z(i) * z(j));
                break;
            case EqKind::Mul:
                if (mul == MulEncoding::Corrected) {
                    out.emplace_back(y(i) * y(j) * z(k), y(k) * z(i) * z(j));
                } else {
                    out.emplace_back((y(i) * z(j) * z(k)) * (y(j) * z(i) * z(k)), y(k) * z(i) * z(j));
                }
                break;
        }
    }
    const Polynomial one = Polynomial::constant(wide, 1);
    for (std::uint32_t m = 1; m <= s.n(); ++m) {
        const auto sq = [&](RationalSlot slot) { return var(m, slot) * var(m, slot); };
        out.emplace_back(one + sq(kS) + sq(kT) + sq(kU) + sq(kV), z(m));
        out.emplace_back(var(m, kP) * y(m) + var(m, kQ) * z(m), one);
        out.emplace_back(sq(kP) + sq(kA) + sq(kB) + sq(kC) + sq(kD), z(m) * z(m));
    }
    return out;
}

std::vector<std::vector<Fraction>> rational_solutions_in_box(const EnSystem& s, std::int64_t box, MulEncoding mul) {
    const auto eqs = rationalize(s, mul);
    std::vector<Polynomial> normalized;
    normalized.reserve(eqs.size());
    for (const auto& e : eqs) normalized.push_back(e.normalized);
    std::vector<std::size_t> projection;
    for (std::uint32_t m = 1; m <= s.n(); ++m) {
        projection.push_back(rational_index(m, kY));
        projection.push_back(rational_index(m, kZ));
    }
    std::vector<std::vector<Fraction>> out;
    for (const auto& t : poly::projected_zeros(normalized, box, projection)) {
        std::vector<Fraction> row;
        for (std::size_t m = 0; m < s.n(); ++m) row.push_back({t[2 * m], t[2 * m + 1]});
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::array<BigInt, 4> four_square(const BigInt& m) {
    if (m < 0) throw DomainError("four_square needs a non-negative input");
    // the smallest tuple is ascending, so a^2 <= m/4, b^2 <= (m-a^2)/3, c^2 <= rest/2
    for (BigInt a = 0; 4 * a * a <= m; ++a) {
        const BigInt r1 = m - a * a;
        for (BigInt b = a; 3 * b * b <= r1; ++b) {
            const BigInt r2 = r1 - b * b;
            for (BigInt c = b; 2 * c * c <= r2; ++c) {
                if (const auto d = exact_sqrt(r2 - c * c)) return {a, b, c, *d};
            }
        }
    }
    throw Error("four_square: no decomposition found");  // unreachable by Lagrange's theorem
}

std::pair<BigInt, BigInt> bezout_bounded(const BigInt& a, const BigInt& b) {
    if (b <= 0) throw DomainError("bezout_bounded needs B > 0");
    BigInt old_r = a;
    BigInt r = b;
    BigInt old_s = 1;
    BigInt s = 0;
    while (r != 0) {
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), old_r.get_mpz_t(), r.get_mpz_t());
        BigInt next_r = old_r - q * r;
        old_r = r;
        r = next_r;
        BigInt next_s = old_s - q * s;
        old_s = s;
        s = next_s;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
    }
    if (old_r != 1) throw DomainError("bezout_bounded: gcd(A, B) = " + old_r.get_str() + ", not 1");
    BigInt x = old_s;
    if (abs(x) > b) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), b.get_mpz_t());
    if (x == 0) x = b;  // only when B = 1
    BigInt y = (1 - a * x) / b;
    return {x, y};
}

std::pair<BigInt, BigInt> lemma6_witness(const BigInt& x) {
    if (x == 0) throw DomainError("lemma6_witness needs x != 0");
    const BigInt ax = abs(x);
    const auto twos = mpz_scan1(ax.get_mpz_t(), 0);
    BigInt two_part = 1;
    mpz_mul_2exp(two_part.get_mpz_t(), two_part.get_mpz_t(), twos);
    const BigInt odd_part = ax / two_part;
    const auto inverse = [](const BigInt& v, const BigInt& mod) {
        BigInt inv;
        if (mod == 1) return BigInt(0);
        mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
        return inv;
    };
    // b = r1 mod odd_part, b = r2 mod two_part
    const BigInt r1 = inverse(2, odd_part);
    const BigInt r2 = inverse(3, two_part);
    // b = r1 + odd_part * t with odd_part * t = r2 - r1 mod two_part
    BigInt t = ((r2 - r1) % two_part) * inverse(odd_part, two_part);
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), two_part.get_mpz_t());
    BigInt bb = r1 + odd_part * t;
    mpz_fdiv_r(bb.get_mpz_t(), bb.get_mpz_t(), ax.get_mpz_t());
    if (bb == 0) bb = ax;
    const BigInt prod = (2 * bb - 1) * (3 * bb - 1);
    if (!mpz_divisible_p(prod.get_mpz_t(), x.get_mpz_t())) throw Error("lemma6_witness: construction failed");
    return {prod / x, bb};
}

}  // namespace dioph::transforms
