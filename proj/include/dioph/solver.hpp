#pragma once

// Bounded search over E_n systems in the closed box [-B, B]^n.
//
// Search: interval (bounds) propagation to a fixpoint, then branching.
//   - add: any two known values determine the third (general linear bounds).
//   - mul: known factors determine the product; a known product and factor
//     determine the other factor when it divides, else the node fails;
//     x_i = 0 forces x_k = 0; squares and idempotents get their own rules.
//   - a pinned non-zero product with both factors open branches over signed
//     divisor pairs instead of scanning a factor's range.
//   - otherwise branch on the first open variable in a static
//     most-constrained-first order (ties by index).
// Variables whose every equation is already entailed are free: they are
// counted as whole ranges and only expanded when solutions are listed.
//
// Results never depend on the worker count: counts are summed, listed
// solutions are the lexicographically smallest `limit` ones, sorted.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/ensys.hpp"

namespace dioph::ensys {

using Tuple = std::vector<std::int64_t>;

inline constexpr std::int64_t kMaxBox = std::int64_t{1} << 62;
inline constexpr std::size_t kDefaultLimit = 1'000'000;

struct SearchOptions {
    std::int64_t box = 0;
    std::size_t limit = kDefaultLimit;
    unsigned threads = 1;
    bool propagate = true;  // false: plain odometer scan of the whole box
};

struct SolutionSet {
    std::uint32_t n = 1;
    std::int64_t box = 0;
    std::vector<Tuple> solutions;  // sorted; the smallest `limit` when truncated
    bool truncated = false;
    BigInt count;                       // exact number of solutions in the box
    std::optional<std::int64_t> max_norm;  // largest max|x_i| over all solutions
};

SolutionSet enumerate_box(const EnSystem& s, const SearchOptions& options);

BigInt count_solutions(const EnSystem& s, std::int64_t box, unsigned threads = 1);

struct BoxSummary {
    BigInt count;
    std::optional<std::int64_t> max_norm;
};

// Count and maximal norm without listing anything.
BoxSummary summarize_box(const EnSystem& s, std::int64_t box, unsigned threads = 1);

// Streams every solution in search order (not sorted) until the visitor
// returns false. Single-threaded.
void for_each_solution(const EnSystem& s, std::int64_t box,
                       const std::function<bool(std::span<const std::int64_t>)>& visit);

// Solutions with max-norm exactly alpha: box(alpha) minus box(alpha - 1).
std::vector<Tuple> enumerate_shell(const EnSystem& s, std::int64_t alpha, unsigned threads = 1);

unsigned default_threads();

}  // namespace dioph::ensys
