#pragma once

// Bounded search for common integer zeros of a list of polynomials.
//
// Used where a transform produces plain polynomial equations rather than an
// E_n system (the hat and rational encodings). Variables are split into the
// projection, which is enumerated in full, and the rest, which only needs a
// witness; the rest is further split into independent components. Interval
// evaluation prunes partial assignments.

#include <cstdint>
#include <span>
#include <vector>

#include "dioph/poly.hpp"

namespace dioph::poly {

struct VarRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// Sorted, duplicate-free projections (variables given 0-based) of the common
// zeros of `equations` inside the ranges.
std::vector<std::vector<std::int64_t>> projected_zeros(std::span<const Polynomial> equations,
                                                       std::span<const VarRange> ranges,
                                                       std::span<const std::size_t> projection);

// Same with every variable in [-box, box].
std::vector<std::vector<std::int64_t>> projected_zeros(std::span<const Polynomial> equations, std::int64_t box,
                                                       std::span<const std::size_t> projection);

}  // namespace dioph::poly
