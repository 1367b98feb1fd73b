#pragma once

// Conjectural height bounds.
//
//   conjecture_bound(n)  2^(2^(n-1)) for n-variable systems
//   bound_D(D)           2^(2^(card_T(D) - 1)) for integer solutions of D = 0
//   bound_nonneg(D)      bound_D of the hat transform (non-negative solutions)
//   bound_rational(D)    bound_D of the single equation obtained from the
//                        rational encoding of the compact lowering of D = 0
//   general_psi_bound    an alternative bound function from a small registry

#include <cstdint>
#include <string>
#include <string_view>

#include "dioph/poly.hpp"
#include "dioph/tower.hpp"

namespace dioph::bounds {

TowerBound conjecture_bound(std::size_t n);

TowerBound bound_D(const poly::Polynomial& d);
TowerBound bound_nonneg(const poly::Polynomial& d);

struct RationalPipeline {
    std::uint32_t lowered_vars = 0;    // n of the compact lowering
    std::size_t rational_vars = 0;     // 12 n
    std::size_t rational_equations = 0;
    poly::Polynomial combined;         // sum of squares of the encoding
    TowerBound bound{TowerExpr()};
};

RationalPipeline rational_pipeline(const poly::Polynomial& d);
TowerBound bound_rational(const poly::Polynomial& d);

// max(|y|, z) of y / z in lowest terms with z > 0.
BigInt height(const BigInt& num, const BigInt& den);

// Descriptors:
//   "default"          2^(2^(n-1))
//   an expression in n, e.g. "2^(2^n)" or "n^3+1"
//   "table:1=2,2=4"    explicit values; other n are rejected
TowerExpr general_psi_bound(const TowerExpr& n, std::string_view psi);
TowerExpr general_psi_bound(std::size_t n, std::string_view psi);

// psi evaluated at card_T(D): the integer-solution bound under psi.
TowerExpr psi_bound_D(const poly::Polynomial& d, std::string_view psi);

}  // namespace dioph::bounds
