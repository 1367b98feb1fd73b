#pragma once

// Explicit systems with known solution structure.
//
//   chain    x1+x1=x2, x1*x1=x2, x_i*x_i=x_(i+1): solutions 0 and (2, 4, 16, ...)
//   thm7     x1=1, x1+x1=x2, four squarings to x6 = 2^16, x7*x8 = x6,
//            x9*x10 = x6, idempotents beyond 10: 1156 * 2^(n-10) solutions
//   thm8     21 variables, infinitely many solutions, all huge; the squaring
//            depth sets the base b = x6 (depth 4 gives 2^16)
//   example  all integer solutions of x1^5 - x1 = x2^2 - x2

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dioph/bigint.hpp"
#include "dioph/ensys.hpp"
#include "dioph/lower.hpp"

namespace dioph::gallery {

ensys::EnSystem build_chain(std::uint32_t n);
ensys::EnSystem build_thm7(std::uint32_t n);

struct Thm8System {
    ensys::EnSystem system;
    unsigned depth = 4;
    BigInt base;     // b = 2^(2^depth)
    BigInt modulus;  // d = b^3 (2 + b)
};

Thm8System build_thm8(unsigned depth);

// A full solution: x11, x15 from the fundamental Pell solution for d, x16, x21
// from the congruence witness (lemma6_witness) for x12 = x11^2, the rest forced.
std::vector<BigInt> assemble_thm8(const Thm8System& s);

struct WorkedExample {
    explicit WorkedExample(lower::LoweringMap map) : lowering(std::move(map)) {}

    lower::LoweringMap lowering;
    std::uint32_t n = 0;
    std::uint32_t fifth_power_var = 0;  // the variable that stands for x1^5
    std::string bound_tower;            // conjecture bound for n: "2^(2^6)"
    std::string bound;                  // the same number as a power: "2^64"
    BigInt bound_value;
    std::int64_t lower_exclusive = -2;
    std::int64_t upper_exclusive = 0;   // floor of the fifth root of the bound, plus one
    std::vector<std::pair<std::int64_t, std::int64_t>> solutions;
};

WorkedExample worked_example(unsigned threads = 1);

nlohmann::ordered_json to_json(const WorkedExample& w);

}  // namespace dioph::gallery
