#include <doctest.h>

#include "dioph/error.hpp"
#include "dioph/gallery.hpp"
#include "dioph/pell.hpp"
#include "dioph/solver.hpp"
#include "oracles.hpp"

using namespace dioph;
using namespace dioph::gallery;

namespace {

std::vector<ensys::Tuple> all_solutions(const ensys::EnSystem& s, std::int64_t box) {
    return ensys::enumerate_box(s, {box, ensys::kDefaultLimit, 1, true}).solutions;
}

}  // namespace

TEST_CASE("chain solutions") {
    CHECK(all_solutions(build_chain(2), 4) == std::vector<ensys::Tuple>{{0, 0}, {2, 4}});
    CHECK(all_solutions(build_chain(4), 256) == std::vector<ensys::Tuple>{{0, 0, 0, 0}, {2, 4, 16, 256}});
    const auto five = all_solutions(build_chain(5), 65536);
    REQUIRE(five.size() == 2);
    CHECK(five[1].back() == 65536);
    CHECK_THROWS_AS(build_chain(1), DomainError);
}

TEST_CASE("property: chain has exactly two solutions for n <= 6") {
    for (std::uint32_t n = 2; n <= 6; ++n) {
        const std::int64_t top = std::int64_t{1} << (std::int64_t{1} << (n - 1));
        // a box well past the top value changes nothing
        const auto sols = all_solutions(build_chain(n), n < 6 ? top * 4 : top);
        REQUIRE(sols.size() == 2);
        CHECK(sols[0] == ensys::Tuple(n, 0));
        CHECK(sols[1][0] == 2);
        CHECK(sols[1].back() == top);
        CHECK(oracle::satisfies(build_chain(n), sols[1]));
    }
}

TEST_CASE("thm7 counts and forced values") {
    const std::int64_t box = 1 << 16;
    for (std::uint32_t n = 10; n <= 14; ++n) {
        CHECK(ensys::count_solutions(build_thm7(n), box) == 1156L << (n - 10));
    }
    const auto sols = ensys::enumerate_box(build_thm7(10), {box, ensys::kDefaultLimit, 1, true});
    CHECK(sols.solutions.size() == 1156);
    for (const auto& t : sols.solutions) CHECK(t[5] == 65536);
    CHECK_THROWS_AS(build_thm7(9), DomainError);
}

TEST_CASE("thm8 construction metadata") {
    const auto t4 = build_thm8(4);
    CHECK(t4.system.n() == 21);
    CHECK(t4.system.size() == 19);
    CHECK(t4.base == 65536);
    CHECK(t4.modulus == pow(BigInt(65536), 3) * 65538);
    const auto t2 = build_thm8(2);
    CHECK(t2.base == 16);
    CHECK(t2.modulus == 73728);
    CHECK_THROWS_AS(build_thm8(5), DomainError);
}

TEST_CASE("thm8 depth-2 assembled solution") {
    const auto t = build_thm8(2);
    const auto x = assemble_thm8(t);
    REQUIRE(x.size() == 21);
    CHECK(ensys::check_solution(t.system, x));
    // the equivalences behind the construction
    CHECK(x[20] * x[10] * x[10] == (2 * x[15] - 1) * (3 * x[15] - 1));
    CHECK(x[14] * x[14] == 1 + pow(BigInt(16), 3) * 18 * x[10] * x[10]);
    // the witness lower bound at b = 16 and its square for x12
    const BigInt lower = 16 + pow(BigInt(16), 14);
    CHECK(abs(x[10]) >= lower);
    CHECK(abs(x[11]) >= lower * lower);
    CHECK(pell::lemma8_check(16, x[10]));
}

TEST_CASE("thm8 depth-3 assembled solution") {
    const auto t = build_thm8(3);
    CHECK(t.base == 256);
    const auto x = assemble_thm8(t);
    CHECK(ensys::check_solution(t.system, x));
}

TEST_CASE("worked example") {
    const auto w = worked_example(1);
    CHECK(w.n == 7);
    CHECK(w.fifth_power_var == 5);
    CHECK(w.bound == "2^64");
    CHECK(w.bound_tower == "2^(2^6)");
    CHECK(w.lower_exclusive == -2);
    CHECK(w.upper_exclusive == 7132);
    const std::vector<std::pair<std::int64_t, std::int64_t>> expected{
        {-1, 0}, {-1, 1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, -5}, {2, 6}, {3, -15}, {3, 16}, {30, -4929}, {30, 4930}};
    CHECK(w.solutions == expected);
    // oracle: 7131^5 <= 2^64 < 7132^5
    CHECK(pow(BigInt(7131), 5) <= pow(BigInt(2), 64));
    CHECK(pow(BigInt(7132), 5) > pow(BigInt(2), 64));
    // every reported pair solves the equation and extends to the lowered system
    for (const auto& [a, b] : w.solutions) {
        CHECK(BigInt(a) * a * a * a * a - a == BigInt(b) * b - b);
        CHECK(ensys::check_solution(w.lowering.target, w.lowering.extend(std::vector<std::int64_t>{a, b})));
    }
    CHECK(to_json(worked_example(4)).dump() == to_json(w).dump());
}

TEST_CASE("worked example oracle scan") {
    // independent scan of the same range straight from the equation
    std::vector<std::pair<std::int64_t, std::int64_t>> found;
    for (long x1 = -1; x1 < 7132; ++x1) {
        const mpz_class v = 4 * (mpz_class(x1) * x1 * x1 * x1 * x1) - 4 * x1 + 1;
        if (!oracle::is_square(v)) continue;
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
        const long lo = (1 - r.get_si()) / 2;
        const long hi = (1 + r.get_si()) / 2;
        found.emplace_back(x1, lo);
        if (hi != lo) found.emplace_back(x1, hi);
    }
    std::sort(found.begin(), found.end());
    CHECK(found == worked_example(1).solutions);
}
