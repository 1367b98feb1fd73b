#pragma once

// Compiling polynomial equations into E_n systems.
//
//   card_T          size of the coefficient-bounded family T of a polynomial
//   lower_canonical the construction over all of T (tiny inputs only)
//   lower_compact   three-address lowering with shared subexpressions
//   gadgets         unary constant chains and four-square non-negativity
//                   blocks, and their assembly around a finite-fold system

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "dioph/ensys.hpp"
#include "dioph/poly.hpp"
#include "dioph/tower.hpp"

namespace dioph::lower {

struct LoweringMap {
    poly::PolyEquation source;
    ensys::EnSystem target;
    // meaning[i - 1]: the polynomial in the source variables that variable
    // x_i stands for. meaning[i - 1] == x_i for i <= p.
    std::vector<poly::Polynomial> meaning;
    // Variable forced to zero by x_q + x_q = x_q; the compact lowering has
    // none because it equates both sides through a shared variable.
    std::optional<std::uint32_t> result_var;

    std::size_t p() const noexcept { return source.num_vars(); }

    // Values of every system variable at a point of the source variables.
    std::vector<BigInt> extend(std::span<const BigInt> point) const;
    std::vector<BigInt> extend(std::span<const std::int64_t> point) const;
};

// (2M + 1)^((d_1 + 1) * ... * (d_p + 1)); the zero polynomial is rejected.
TowerExpr card_T(const poly::Polynomial& d);

inline constexpr std::uint64_t kCanonicalCap = 10'000;

// Throws InfeasibleError when card_T exceeds the cap.
LoweringMap lower_canonical(const poly::Polynomial& d, std::uint64_t cap = kCanonicalCap);

LoweringMap lower_compact(const poly::PolyEquation& eq);

// {"meaning": {"1": "x1", ...}, "q": int | null}
nlohmann::ordered_json to_json(const LoweringMap& map);

// A standalone fragment and its designated variable.
struct Fragment {
    ensys::EnSystem system;
    std::uint32_t port = 1;
};

// t_1 = 1, t_k = t_(k-1) + t_1; the last variable is forced to n.
Fragment gadget_value_chain(std::uint32_t n);
std::uint32_t gadget_value_chain(ensys::SystemBuilder& b, std::uint32_t n);

// target = u + v, u = a + b, v = c + d, a = al^2, b = be^2, c = ga^2, d = de^2.
// Standalone: variable 1 is the target and 2..11 are u, v, a, b, c, d, al, be,
// ga, de. In a builder: adds the ten auxiliaries.
Fragment gadget_nonneg();
void gadget_nonneg(ensys::SystemBuilder& b, std::uint32_t target);

inline constexpr std::uint32_t kNonnegBlockVars = 11;

struct FiniteFoldAssembly {
    ensys::EnSystem system;
    std::uint32_t input_var = 0;   // last chain variable, forced to n; plays delta's x_1
    std::uint32_t output_var = 0;  // delta's x_2
};

// Chain for n into x_1, every equation of delta (over x_1..x_m, m >= 3), and a
// non-negativity block for each of x_2..x_m. Uses n + 11 (m - 1) variables.
FiniteFoldAssembly assemble_finite_fold(std::uint32_t n, const ensys::EnSystem& delta);

}  // namespace dioph::lower
