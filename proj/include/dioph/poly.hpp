#pragma once

// Sparse multivariate polynomials over arbitrary-precision integers, the
// equation text format, and exact evaluation.
//
// Equation text: variables x1..xp, integer literals, + - * ^ and parentheses,
// exactly one '='. Exponents are non-negative integer literals.
//
// Canonical output orders terms by descending graded lexicographic order:
// higher total degree first, then larger exponent of x1, then x2, ...
// e.g. "x1^5 - x2^2 - x1 + x2".

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dioph/bigint.hpp"

namespace dioph::poly {

using Exponents = std::vector<std::uint32_t>;

// Descending graded lexicographic order.
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

class Polynomial {
public:
    using TermMap = std::map<Exponents, BigInt, GrlexGreater>;

    explicit Polynomial(std::size_t num_vars = 1);

    static Polynomial constant(std::size_t num_vars, const BigInt& value);
    // index is 0-based: variable(p, 0) is x1.
    static Polynomial variable(std::size_t num_vars, std::size_t index);
    static Polynomial monomial(const Exponents& exponents, const BigInt& coefficient);

    std::size_t num_vars() const noexcept { return num_vars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    // Adds coefficient * x^exponents, dropping the term if it cancels.
    void add_term(const Exponents& exponents, const BigInt& coefficient);

    BigInt constant_term() const;
    std::uint32_t degree_in(std::size_t index) const;
    std::uint32_t total_degree() const;

    BigInt evaluate(std::span<const BigInt> point) const;
    BigInt evaluate(std::span<const std::int64_t> point) const;

    // Fast path for small points: exact result unless an intermediate leaves
    // the 128-bit range, in which case nullopt.
    std::optional<__int128> evaluate_small(std::span<const std::int64_t> point) const;

    // Re-embeds into a ring with new_num_vars variables; variable i becomes
    // variable mapping[i].
    Polynomial remap(std::size_t new_num_vars, std::span<const std::size_t> mapping) const;
    Polynomial widen(std::size_t new_num_vars) const;

    Polynomial pow(std::uint32_t exponent) const;

    std::string to_string() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }

private:
    void check_arity(const Polynomial& other) const;

    std::size_t num_vars_;
    TermMap terms_;
};

struct PolyEquation {
    Polynomial lhs;
    Polynomial rhs;
    Polynomial normalized;  // lhs - rhs

    PolyEquation(Polynomial left, Polynomial right);

    std::size_t num_vars() const noexcept { return normalized.num_vars(); }
    std::string to_string() const;
};

// Throws ParseError (with the offending position) on malformed text.
PolyEquation parse_equation(std::string_view text);

// A polynomial expression without '='. num_vars is raised to cover every
// variable mentioned; min_vars sets a floor.
Polynomial parse_polynomial(std::string_view text, std::size_t min_vars = 1);

struct CoeffStats {
    BigInt max_abs_coefficient;          // M; 0 for the zero polynomial
    std::vector<std::uint32_t> degrees;  // d_i per variable
};

CoeffStats coeff_stats(const Polynomial& p);

struct SumOfSquares {
    Polynomial value;
    bool empty_input = false;  // set when called with no polynomials
};

// Sum of P_i^2; its integer zero set is the intersection of the inputs' zero sets.
SumOfSquares sum_of_squares(std::span<const Polynomial> ps);

// r >= 0 with r*r == n, or nullopt.
std::optional<BigInt> integer_sqrt_test(const BigInt& n);

}  // namespace dioph::poly
