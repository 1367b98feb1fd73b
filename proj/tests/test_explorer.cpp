#include <doctest.h>

#include <random>

#include "dioph/error.hpp"
#include "dioph/explorer.hpp"
#include "dioph/gallery.hpp"
#include "oracles.hpp"

using namespace dioph;
using namespace dioph::explorer;
using ensys::EnEquation;
using ensys::EnSystem;
using poly::parse_polynomial;

namespace {

// Witness condition from the oracle side: every add/mul relation of x holds
// at y, and y beats |x_1| (coordinate 1 only when strict).
bool valid_witness(const oracle::Tuple& x, const oracle::Tuple& y, bool strict) {
    for (const auto& e : oracle::induced(x)) {
        if (e[0] == 0) continue;
        const ensys::EnEquation eq = e[0] == 1 ? EnEquation::add(e[1], e[2], e[3]) : EnEquation::mul(e[1], e[2], e[3]);
        if (!oracle::holds(eq, y)) return false;
    }
    const auto x1 = x[0] < 0 ? -x[0] : x[0];
    if (strict) return (y[0] < 0 ? -y[0] : y[0]) > x1;
    for (auto v : y)
        if ((v < 0 ? -v : v) > x1) return true;
    return false;
}

const Classification* find(const std::vector<Classification>& all, const EnSystem& s) {
    const auto canon = ensys::canonical_form(s).system;
    for (const auto& c : all)
        if (c.system == canon) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("probe examples") {
    const auto v = probe(std::vector<std::int64_t>{5}, 10, false);
    CHECK(v.kind == VerdictKind::WitnessFound);
    REQUIRE(v.witness);
    CHECK(*v.witness == ensys::Tuple{6});
    CHECK(probe(std::vector<std::int64_t>{5}, 10, true).witness == ensys::Tuple{6});
    CHECK(probe(std::vector<std::int64_t>{1, 2}, 5, false).kind == VerdictKind::Vacuous);
    CHECK(probe(std::vector<std::int64_t>{0, 0}, 5, true).kind == VerdictKind::Vacuous);
    CHECK_THROWS_AS(probe(std::vector<std::int64_t>{5}, 5, false), DomainError);
}

TEST_CASE("probe lax and strict witnesses differ") {
    // (5, 25) only satisfies x1 * x1 = x2: lax mode is happy with y2 = 9 > 5,
    // strict mode needs |y1| > 5
    const auto lax = probe(std::vector<std::int64_t>{5, 25}, 40, false);
    CHECK(lax.kind == VerdictKind::WitnessFound);
    CHECK(*lax.witness == ensys::Tuple{3, 9});
    const auto strict = probe(std::vector<std::int64_t>{5, 25}, 40, true);
    CHECK(strict.kind == VerdictKind::WitnessFound);
    CHECK(*strict.witness == ensys::Tuple{6, 36});
    // below the horizon needed for y1 = 6
    CHECK(probe(std::vector<std::int64_t>{5, 25}, 30, true).kind != VerdictKind::WitnessFound);
}

TEST_CASE("relation system drops x_i = 1") {
    const auto r = relation_system(std::vector<std::int64_t>{1, 2});
    for (const auto& e : r.equations()) CHECK(e.kind != ensys::EqKind::One);
    CHECK(r.contains(EnEquation::add(1, 1, 2)));
}

TEST_CASE("classify small systems") {
    const auto chain = classify(gallery::build_chain(2), 100);
    CHECK(chain.status == Status::FiniteWithinBound);
    CHECK(chain.max_norm_seen == 4);
    CHECK(chain.bound == 4);
    const auto sq = classify(EnSystem(2, {EnEquation::mul(1, 1, 2)}), 100);
    CHECK(sq.status == Status::GrowingFamily);
    CHECK(sq.inner_count < sq.growth_count);
    const auto z = classify(EnSystem(1, {EnEquation::add(1, 1, 1)}), 100);
    CHECK(z.status == Status::FiniteWithinBound);
    CHECK(z.max_norm_seen == 0);
}

TEST_CASE("survey n = 1") {
    const auto all = survey({1, 100, 1, 10, 1});
    CHECK(all.size() == 8);  // every subset of E_1 is its own canonical form
    const auto* z = find(all, EnSystem(1, {EnEquation::add(1, 1, 1)}));
    REQUIRE(z);
    CHECK(z->status == Status::FiniteWithinBound);
    CHECK(z->max_norm_seen == 0);
    for (const auto& c : all) CHECK(c.status != Status::SolutionBeyondBound);
}

TEST_CASE("survey n = 2 at a small growth box") {
    const auto all = survey({2, 1000, 1, 10, 2});
    const auto* chain = find(all, gallery::build_chain(2));
    REQUIRE(chain);
    CHECK(chain->status == Status::FiniteWithinBound);
    CHECK(chain->max_norm_seen == 4);
    const auto* sq = find(all, EnSystem(2, {EnEquation::mul(1, 1, 2)}));
    REQUIRE(sq);
    CHECK(sq->status == Status::GrowingFamily);
    std::size_t beyond = 0;
    for (const auto& c : all) beyond += c.status == Status::SolutionBeyondBound;
    CHECK(beyond == 0);
    CHECK(std::is_sorted(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.system < b.system; }));
}

TEST_CASE("survey n = 3 sampling is seeded") {
    const auto a = survey({3, 200, 7, 30, 1});
    const auto b = survey({3, 200, 7, 30, 3});
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(to_json(a[t]).dump() == to_json(b[t]).dump());
    CHECK_THROWS_AS(survey({4, 200, 7, 30, 1}), DomainError);
}

TEST_CASE("classification JSON schema") {
    const auto c = classify(EnSystem(2, {EnEquation::mul(1, 1, 2)}), 100);
    CHECK(to_json(c).dump() ==
          R"({"system":{"n":2,"eqs":[["mul",1,1,2]]},"status":"GrowingFamily","max_norm_seen":100,"bound":4,)"
          R"("evidence":{"horizons":[50,100],"counts":["15","21"]}})");
}

TEST_CASE("semi-algorithm examples") {
    auto r = semi_algorithm_infinite(parse_polynomial("x1 - x2"), {3, 10, false});
    CHECK(r.status == SemiStatus::Terminated);
    CHECK(r.shell == 3);
    CHECK(*r.witness == ensys::Tuple{3, 3});
    r = semi_algorithm_infinite(parse_polynomial("x1^2 + x2^2 + 1"), {1, 50, false});
    CHECK(r.status == SemiStatus::Exhausted);
    CHECK(r.shell == 50);
    r = semi_algorithm_infinite(parse_polynomial("x1 - 1"), {std::nullopt, 1000, false});
    CHECK(r.status == SemiStatus::StartNotEnumerable);
    CHECK(r.start == "2^(2^8)+1");
    r = semi_algorithm_infinite(parse_polynomial("x1 - 1"), {std::nullopt, 1000, true});
    CHECK(r.status == SemiStatus::StartNotEnumerable);
    CHECK_THROWS_AS(semi_algorithm_infinite(parse_polynomial("x1"), {5, 4, false}), DomainError);
}

TEST_CASE("semi-algorithm non-negative shells") {
    // x1 = x2 + 1 over non-negatives: shell alpha has (alpha, alpha - 1)
    const auto r = semi_algorithm_infinite(parse_polynomial("x1 - x2 - 1"), {4, 10, true});
    CHECK(r.status == SemiStatus::Terminated);
    CHECK(*r.witness == ensys::Tuple{4, 3});
    // x1 + 1 = 0 has no non-negative solution
    CHECK(semi_algorithm_infinite(parse_polynomial("x1 + 1"), {0, 20, true}).status == SemiStatus::Exhausted);
}

// ---------------------------------------------------------------------------
// Properties.

TEST_CASE("property: probe witnesses are valid and minimal-shell") {
    std::mt19937_64 gen(61);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 1 + gen() % 2;
        oracle::Tuple x(n);
        const std::int64_t bound = n == 1 ? 2 : 4;
        x[0] = (bound + 1 + static_cast<std::int64_t>(gen() % 6)) * (gen() % 2 ? 1 : -1);
        for (std::size_t i = 1; i < n; ++i) x[i] = static_cast<std::int64_t>(gen() % 21) - 10;
        const std::int64_t horizon = 25;
        for (bool strict : {false, true}) {
            const auto v = probe(x, horizon, strict);
            if (v.kind == VerdictKind::WitnessFound) {
                CHECK(valid_witness(x, *v.witness, strict));
                // no valid witness in a smaller shell
                std::int64_t alpha = 0;
                for (auto c : *v.witness) alpha = std::max(alpha, c < 0 ? -c : c);
                const auto rel = relation_system(x);
                for (const auto& y : oracle::box_solutions(rel, alpha - 1)) CHECK_FALSE(valid_witness(x, y, strict));
            } else {
                CHECK(v.kind != VerdictKind::Vacuous);
                for (const auto& y : oracle::box_solutions(relation_system(x), horizon))
                    CHECK_FALSE(valid_witness(x, y, strict));
            }
        }
    }
}

TEST_CASE("property: vacuous exactly at or below the bound for n <= 5") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const std::int64_t bound = std::int64_t{1} << (std::size_t{1} << (n - 1));
        oracle::Tuple at(n, 0), above(n, 0);
        at[0] = bound;
        above[0] = -(bound + 1);
        CHECK(probe(at, bound + 2, false).kind == VerdictKind::Vacuous);
        if (n <= 3) CHECK(probe(above, bound + 2, false).kind != VerdictKind::Vacuous);
    }
}

TEST_CASE("property: strict and lax agree on symmetric gallery tuples") {
    // the chain tuple scaled past the bound has coordinate-symmetric relations
    for (std::int64_t v : {5, 7, 9}) {
        const oracle::Tuple x{v, v};
        const auto lax = probe(x, 12, false);
        const auto strict = probe(x, 12, true);
        CHECK(lax.kind == strict.kind);
        REQUIRE(lax.witness);
        REQUIRE(strict.witness);
        CHECK(*std::max_element(lax.witness->begin(), lax.witness->end()) ==
              *std::max_element(strict.witness->begin(), strict.witness->end()));
    }
}
