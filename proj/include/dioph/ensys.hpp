#pragma once

// Systems of equations of the three forms x_i = 1, x_i + x_j = x_k and
// x_i * x_j = x_k. Indices are 1-based throughout, matching the system file
// format; tuples are 0-based vectors, so x_i is tuple[i - 1].
//
// System file (JSON, compact, key order fixed):
//   {"n":3,"eqs":[["one",1],["add",1,1,2],["mul",1,2,3]]}

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/bigint.hpp"

namespace dioph::ensys {

enum class EqKind : std::uint8_t { One = 0, Add = 1, Mul = 2 };

struct EnEquation {
    EqKind kind = EqKind::One;
    std::uint32_t i = 0;
    std::uint32_t j = 0;  // unused (0) for One
    std::uint32_t k = 0;  // unused (0) for One

    static EnEquation one(std::uint32_t i);
    // Commutative forms are stored with i <= j.
    static EnEquation add(std::uint32_t i, std::uint32_t j, std::uint32_t k);
    static EnEquation mul(std::uint32_t i, std::uint32_t j, std::uint32_t k);

    std::uint32_t max_index() const noexcept;
    bool holds(std::span<const std::int64_t> x) const;
    bool holds(std::span<const BigInt> x) const;
    std::string to_string() const;

    friend auto operator<=>(const EnEquation&, const EnEquation&) = default;
};

class EnSystem {
public:
    explicit EnSystem(std::uint32_t n = 1);
    EnSystem(std::uint32_t n, std::vector<EnEquation> equations);

    std::uint32_t n() const noexcept { return n_; }
    const std::vector<EnEquation>& equations() const noexcept { return eqs_; }
    std::size_t size() const noexcept { return eqs_.size(); }
    bool empty() const noexcept { return eqs_.empty(); }

    // Returns false when the equation was already present.
    bool insert(const EnEquation& eq);
    bool contains(const EnEquation& eq) const;

    std::string to_string() const;

    friend auto operator<=>(const EnSystem&, const EnSystem&) = default;

private:
    void check_index(const EnEquation& eq) const;

    std::uint32_t n_;
    std::vector<EnEquation> eqs_;  // sorted, duplicate-free
};

// Incrementally allocates variables and collects equations; used by the
// lowerings and the gadget library.
class SystemBuilder {
public:
    explicit SystemBuilder(std::uint32_t initial_vars = 0) : n_(initial_vars) {}

    std::uint32_t fresh() { return ++n_; }
    std::uint32_t num_vars() const noexcept { return n_; }
    void reserve_vars(std::uint32_t n) {
        if (n > n_) n_ = n;
    }

    void one(std::uint32_t i) { eqs_.push_back(EnEquation::one(i)); }
    void add(std::uint32_t i, std::uint32_t j, std::uint32_t k) { eqs_.push_back(EnEquation::add(i, j, k)); }
    void mul(std::uint32_t i, std::uint32_t j, std::uint32_t k) { eqs_.push_back(EnEquation::mul(i, j, k)); }
    void push(const EnEquation& eq) { eqs_.push_back(eq); }

    const std::vector<EnEquation>& equations() const noexcept { return eqs_; }
    EnSystem build() const;

private:
    std::uint32_t n_;
    std::vector<EnEquation> eqs_;
};

bool check_solution(const EnSystem& s, std::span<const std::int64_t> x);
bool check_solution(const EnSystem& s, std::span<const BigInt> x);

// Every equation of E_n that holds at x.
EnSystem induced_system(std::span<const std::int64_t> x);

// Number of canonical equations in E_n.
std::size_t en_size(std::uint32_t n);
// All canonical equations of E_n in ascending order.
std::vector<EnEquation> all_equations(std::uint32_t n);

inline constexpr std::uint32_t kMaxCanonicalN = 8;

struct CanonicalForm {
    EnSystem system;
    // permutation[old - 1] = new index (1-based values)
    std::vector<std::uint32_t> permutation;
};

// Minimal relabeling over all n! permutations; ties go to the first
// permutation in lexicographic order. n > kMaxCanonicalN is rejected.
CanonicalForm canonical_form(const EnSystem& s);

EnSystem relabel(const EnSystem& s, std::span<const std::uint32_t> permutation);
std::vector<std::int64_t> permute_tuple(std::span<const std::int64_t> x, std::span<const std::uint32_t> permutation);

nlohmann::ordered_json to_json(const EnSystem& s);
EnSystem system_from_json(const nlohmann::json& j);
// Compact single-line serialization; stable for cache keys.
std::string serialize(const EnSystem& s);
EnSystem parse_system(const std::string& text);
EnSystem load_system(const std::string& path);

}  // namespace dioph::ensys
