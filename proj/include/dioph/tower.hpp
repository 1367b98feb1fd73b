#pragma once

// Exact expression trees over non-negative integers and the double
// exponential bounds 2^(2^k) built on them.
//
// Values are only materialized when their bit length stays under a cap;
// otherwise arithmetic stays symbolic and comparisons fall back to log2
// estimates and then to structural rules.
//
// Canonical strings: '+', '-', '*', '^' (right associative) with parentheses
// around any non-literal base or exponent. A compound subexpression whose
// value is below 10^6 prints as its decimal value, so (3^2-1) prints as "8"
// while 3^18-1 stays "3^18-1". Towers print as "2^(2^K)", e.g. "2^(2^8)" and
// "2^(2^(3^18-1))".

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "dioph/bigint.hpp"

namespace dioph {

inline constexpr std::size_t kDefaultMaterializeBits = std::size_t{1} << 20;

class TowerExpr {
public:
    enum class Op { Lit, Add, Sub, Mul, Pow };

    TowerExpr();  // literal 0
    static TowerExpr lit(const BigInt& value);
    static TowerExpr pow(const TowerExpr& base, const TowerExpr& exponent);

    friend TowerExpr operator+(const TowerExpr& a, const TowerExpr& b);
    // Requires a >= b; checked whenever both sides materialize.
    friend TowerExpr operator-(const TowerExpr& a, const TowerExpr& b);
    friend TowerExpr operator*(const TowerExpr& a, const TowerExpr& b);

    Op op() const noexcept;
    const BigInt& literal() const;  // Op::Lit only
    TowerExpr left() const;
    TowerExpr right() const;

    // Exact value when its bit length is at most max_bits.
    std::optional<BigInt> materialize(std::size_t max_bits = kDefaultMaterializeBits) const;

    // Approximate log2 of the value; +inf when even that overflows, -inf for 0.
    long double log2_estimate() const;

    std::string to_string() const;

    // Grammar of to_string(); the identifier 'n' is accepted only when a
    // binding is supplied and is replaced by it.
    static TowerExpr parse(std::string_view text, const std::optional<TowerExpr>& n_binding = std::nullopt);

    // Exact when both sides materialize; otherwise log estimates, then
    // structural rules; unordered when undecidable with those tools.
    std::partial_ordering compare(const TowerExpr& other) const;

    bool structurally_equal(const TowerExpr& other) const;

private:
    struct Node;
    explicit TowerExpr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

// The number 2^(2^k).
class TowerBound {
public:
    explicit TowerBound(TowerExpr k);

    // 2^(2^(n-1)): the conjectural cap for n-variable systems.
    static TowerBound conjecture(std::size_t n);

    const TowerExpr& k() const noexcept { return k_; }
    TowerExpr value() const;  // the full expression 2^(2^k)

    std::optional<BigInt> materialize(std::size_t max_bits = kDefaultMaterializeBits) const;
    std::string to_string() const;
    static TowerBound parse(std::string_view text);

    std::partial_ordering compare(const TowerBound& other) const { return k_.compare(other.k_); }

private:
    TowerExpr k_;
};

// |x| <= 2^(2^k), decided with exact bit-length arithmetic.
bool within(const BigInt& x, const TowerBound& bound);

}  // namespace dioph
