#include <doctest.h>

#include <random>

#include "dioph/ensys.hpp"
#include "dioph/error.hpp"
#include "dioph/gallery.hpp"
#include "dioph/solver.hpp"
#include "oracles.hpp"

using namespace dioph;
using namespace dioph::ensys;

namespace {

EnSystem chain3() {
    SystemBuilder b(3);
    b.add(1, 1, 2);
    b.mul(1, 1, 2);
    b.mul(2, 2, 3);
    return b.build();
}

std::vector<Tuple> solve(const EnSystem& s, std::int64_t box, unsigned threads = 1, bool propagate = true) {
    SearchOptions o;
    o.box = box;
    o.threads = threads;
    o.propagate = propagate;
    return enumerate_box(s, o).solutions;
}

}  // namespace

TEST_CASE("equations normalize commutative operands") {
    CHECK(EnEquation::add(3, 1, 2) == EnEquation::add(1, 3, 2));
    CHECK(EnEquation::mul(2, 1, 1).i == 1);
    EnSystem s(3);
    CHECK(s.insert(EnEquation::add(2, 1, 3)));
    CHECK_FALSE(s.insert(EnEquation::add(1, 2, 3)));
    CHECK(s.size() == 1);
    CHECK_THROWS_AS(s.insert(EnEquation::one(4)), DomainError);
}

TEST_CASE("check_solution on the chain") {
    const auto s = chain3();
    CHECK(check_solution(s, std::vector<std::int64_t>{2, 4, 16}));
    CHECK(check_solution(s, std::vector<std::int64_t>{0, 0, 0}));
    CHECK_FALSE(check_solution(s, std::vector<std::int64_t>{1, 2, 4}));
    CHECK_THROWS_AS(check_solution(s, std::vector<std::int64_t>{1, 2}), DomainError);
}

TEST_CASE("enumerate_box examples") {
    EnSystem z(1, {EnEquation::add(1, 1, 1)});
    CHECK(solve(z, 5) == std::vector<Tuple>{{0}});
    CHECK(solve(chain3(), 16) == std::vector<Tuple>{{0, 0, 0}, {2, 4, 16}});
    EnSystem sq(2, {EnEquation::mul(1, 1, 2)});
    CHECK(solve(sq, 2) == std::vector<Tuple>{{-1, 1}, {0, 0}, {1, 1}});
}

TEST_CASE("enumerate_box limit truncates and reports") {
    SearchOptions o;
    o.box = 3;
    o.limit = 4;
    const auto r = enumerate_box(EnSystem(2), o);
    CHECK(r.truncated);
    CHECK(r.count == 49);
    CHECK(r.solutions == std::vector<Tuple>{{-3, -3}, {-3, -2}, {-3, -1}, {-3, 0}});
    CHECK(r.max_norm == 3);
}

TEST_CASE("count_solutions examples") {
    CHECK(count_solutions(EnSystem(1), 1) == 3);
    CHECK(count_solutions(gallery::build_thm7(10), 1 << 16) == 1156);
    CHECK(count_solutions(gallery::build_thm7(12), 1 << 16) == 4624);
    CHECK(count_solutions(EnSystem(1, {EnEquation::one(1)}), 0) == 0);
}

TEST_CASE("box cap") {
    CHECK_THROWS_AS(count_solutions(EnSystem(1), kMaxBox + 1), InfeasibleError);
    CHECK_THROWS_AS(count_solutions(EnSystem(1), -1), DomainError);
}

TEST_CASE("induced_system examples") {
    const auto a = induced_system(std::vector<std::int64_t>{1, 2});
    CHECK(a.to_string() == "n=2 {x1=1, x1+x1=x2, x1*x1=x1, x1*x2=x2}");
    CHECK(induced_system(std::vector<std::int64_t>{0}).to_string() == "n=1 {x1+x1=x1, x1*x1=x1}");
    CHECK(induced_system(std::vector<std::int64_t>{5}).empty());
}

TEST_CASE("canonical_form examples") {
    auto c = canonical_form(EnSystem(2, {EnEquation::one(2)}));
    CHECK(c.system == EnSystem(2, {EnEquation::one(1)}));
    CHECK(c.permutation == std::vector<std::uint32_t>{2, 1});
    const EnSystem dbl(2, {EnEquation::add(1, 1, 2)});
    CHECK(canonical_form(dbl).system == dbl);
    c = canonical_form(EnSystem(2, {EnEquation::mul(2, 2, 1)}));
    CHECK(c.system == EnSystem(2, {EnEquation::mul(1, 1, 2)}));
    CHECK(c.permutation == std::vector<std::uint32_t>{2, 1});
    CHECK_THROWS_AS(canonical_form(EnSystem(kMaxCanonicalN + 1)), InfeasibleError);
}

TEST_CASE("E_n sizes") {
    CHECK(en_size(1) == 3);
    CHECK(en_size(2) == 2 + 6 + 6);
    CHECK(all_equations(2).size() == en_size(2));
    CHECK(en_size(3) == 3 + 18 + 18);
}

TEST_CASE("system file round trip") {
    const auto s = chain3();
    CHECK(serialize(s) == R"({"n":3,"eqs":[["add",1,1,2],["mul",1,1,2],["mul",2,2,3]]})");
    CHECK(parse_system(serialize(s)) == s);
    CHECK_THROWS_AS(parse_system(R"({"n":2,"eqs":[["add",1,1,3]]})"), ParseError);
    CHECK_THROWS_AS(parse_system(R"({"n":2,"eqs":[["sub",1,1,2]]})"), ParseError);
    CHECK_THROWS_AS(parse_system(R"({"eqs":[]})"), ParseError);
}

TEST_CASE("shells") {
    EnSystem sq(2, {EnEquation::mul(1, 1, 2)});
    CHECK(enumerate_shell(sq, 1) == std::vector<Tuple>{{-1, 1}, {1, 1}});
    CHECK(enumerate_shell(sq, 4) == std::vector<Tuple>{{-2, 4}, {2, 4}});
    CHECK(enumerate_shell(sq, 3).empty());
}

// ---------------------------------------------------------------------------
// Properties.

TEST_CASE("property: search equals the naive scan (n <= 3, B <= 8)") {
    std::mt19937_64 gen(2024);
    for (int round = 0; round < 300; ++round) {
        const auto n = static_cast<std::uint32_t>(1 + gen() % 3);
        const std::int64_t b = static_cast<std::int64_t>(gen() % 9);
        const auto s = oracle::random_system(gen, n, 5);
        const auto expected = oracle::box_solutions(s, b);
        const auto r = enumerate_box(s, SearchOptions{b, kDefaultLimit, 1, true});
        CHECK(r.solutions == expected);
        CHECK(r.count == static_cast<long>(expected.size()));
        for (const auto& t : r.solutions) CHECK(check_solution(s, t));
    }
}

TEST_CASE("property: propagation on and off agree (n <= 4, B <= 10)") {
    std::mt19937_64 gen(99);
    for (int round = 0; round < 80; ++round) {
        const auto n = static_cast<std::uint32_t>(1 + gen() % 4);
        const std::int64_t b = n == 4 ? 4 + static_cast<std::int64_t>(gen() % 3) : static_cast<std::int64_t>(gen() % 11);
        const auto s = oracle::random_system(gen, n, 6);
        CHECK(solve(s, b, 1, true) == solve(s, b, 1, false));
        CHECK(count_solutions(s, b) == static_cast<long>(solve(s, b, 1, false).size()));
    }
}

TEST_CASE("property: worker count does not change results") {
    std::mt19937_64 gen(5);
    for (int round = 0; round < 40; ++round) {
        const auto n = static_cast<std::uint32_t>(1 + gen() % 4);
        const auto s = oracle::random_system(gen, n, 5);
        const auto one = solve(s, 6, 1);
        CHECK(solve(s, 6, 2) == one);
        CHECK(solve(s, 6, 4) == one);
        CHECK(summarize_box(s, 6, 4).count == summarize_box(s, 6, 1).count);
        CHECK(summarize_box(s, 6, 4).max_norm == summarize_box(s, 6, 1).max_norm);
    }
}

TEST_CASE("property: induced_system is exactly the oracle set") {
    std::mt19937_64 gen(17);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 1 + gen() % 3;
        Tuple x(n);
        for (auto& v : x) v = static_cast<std::int64_t>(gen() % 9) - 4;
        const auto got = induced_system(x);
        std::set<std::array<std::uint32_t, 4>> seen;
        for (const auto& e : got.equations()) {
            seen.insert({static_cast<std::uint32_t>(e.kind), e.i, e.j, e.k});
            CHECK(e.holds(x));
        }
        CHECK(seen == oracle::induced(x));
        // maximality: every other equation of E_n fails
        for (const auto& e : all_equations(static_cast<std::uint32_t>(n))) {
            if (!got.contains(e)) CHECK_FALSE(oracle::holds(e, x));
        }
    }
}

TEST_CASE("property: canonical form preserves solutions under the permutation") {
    std::mt19937_64 gen(23);
    for (int round = 0; round < 100; ++round) {
        const auto n = static_cast<std::uint32_t>(1 + gen() % 3);
        const auto s = oracle::random_system(gen, n, 4);
        const auto c = canonical_form(s);
        CHECK(relabel(s, c.permutation) == c.system);
        for (const auto& x : oracle::box_solutions(s, 2)) {
            CHECK(check_solution(c.system, permute_tuple(x, c.permutation)));
        }
        // relabelled copies share the canonical form
        std::vector<std::uint32_t> perm(n);
        for (std::uint32_t i = 0; i < n; ++i) perm[i] = n - i;
        CHECK(canonical_form(relabel(s, perm)).system == c.system);
    }
}
