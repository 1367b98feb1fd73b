// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dioph/bounds.hpp"
#include "dioph/explorer.hpp"
#include "dioph/gallery.hpp"
#include "dioph/lower.hpp"
#include "dioph/pell.hpp"
#include "dioph/polysearch.hpp"
#include "dioph/solver.hpp"
#include "dioph/transforms.hpp"
#include "oracles.hpp"

using namespace dioph;
using ensys::EnEquation;
using ensys::EnSystem;
using poly::parse_polynomial;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Accumulates failure reasons for one criterion.
struct Check {
    std::ostringstream why;
    bool ok = true;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) why << "; ";
            why << what;
            ok = false;
        }
    }
};

std::string worked_example_output(unsigned threads) { return gallery::to_json(gallery::worked_example(threads)).dump(); }

std::string thm7_output(unsigned threads) {
    std::string out;
    for (std::uint32_t n = 10; n <= 12; ++n) {
        out += ensys::count_solutions(gallery::build_thm7(n), 1 << 16, threads).get_str() + "\n";
    }
    return out;
}

std::string survey_output(unsigned threads) {
    std::string out;
    for (const auto& c : explorer::survey({2, 10'000, 1, explorer::kDefaultSamples, threads})) {
        out += explorer::to_json(c).dump() + "\n";
    }
    return out;
}

void criterion_1(Check& c) {
    const auto t0 = Clock::now();
    const auto w = gallery::worked_example(1);
    const double dt = seconds_since(t0);
    const std::vector<std::pair<std::int64_t, std::int64_t>> expected{
        {-1, 0}, {-1, 1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, -5}, {2, 6}, {3, -15}, {3, 16}, {30, -4929}, {30, 4930}};
    c.expect(w.solutions == expected, "solution list differs");
    c.expect(w.n == 7, "n != 7");
    c.expect(w.bound == "2^64" && w.bound_value == pow(BigInt(2), 64), "bound != 2^64");
    c.expect(w.lower_exclusive == -2 && w.upper_exclusive == 7132, "scan range != (-2, 7132)");
    c.expect(dt < 10.0, "took " + std::to_string(dt) + " s");
}

void criterion_2(Check& c) {
    const long expected[] = {1156, 2312, 4624};
    for (std::uint32_t n = 10; n <= 12; ++n) {
        const auto t0 = Clock::now();
        const auto count = ensys::count_solutions(gallery::build_thm7(n), 1 << 16, 1);
        const double dt = seconds_since(t0);
        c.expect(count == expected[n - 10], "S_" + std::to_string(n) + " count " + count.get_str());
        c.expect(dt < 60.0, "S_" + std::to_string(n) + " took " + std::to_string(dt) + " s");
    }
}

void criterion_3(Check& c) {
    const auto t0 = Clock::now();
    for (std::uint32_t n = 2; n <= 6; ++n) {
        const auto top = pow(BigInt(2), 1UL << (n - 1));
        const auto box = top.get_si();
        const auto r = ensys::enumerate_box(gallery::build_chain(n), {box, ensys::kDefaultLimit, 1, true});
        ensys::Tuple tower{2};
        while (tower.size() < n) tower.push_back(tower.back() * tower.back());
        c.expect(r.solutions == std::vector<ensys::Tuple>{ensys::Tuple(n, 0), tower}, "n=" + std::to_string(n) + " solutions");
        c.expect(!r.solutions.empty() && BigInt(static_cast<long>(r.solutions.back().back())) == top,
                 "n=" + std::to_string(n) + " top value");
        c.expect(within(top, bounds::conjecture_bound(n)) && !within(top + 1, bounds::conjecture_bound(n)),
                 "n=" + std::to_string(n) + " tightness");
    }
    const double dt = seconds_since(t0);
    c.expect(dt < 1.0, "took " + std::to_string(dt) + " s");
}

void criterion_4(Check& c) {
    struct Fixture {
        const char* d;
        const char* card;
        const char* bound;
    };
    // hand evaluations of (2M + 1)^((d_1 + 1)...(d_p + 1)) and 2^(2^(card - 1))
    const Fixture fixtures[] = {
        {"x1 - 1", "9", "2^(2^8)"},
        {"x1^5 - x1 - x2^2 + x2", "3^18", "2^(2^(3^18-1))"},
        {"2*x1", "25", "2^(2^24)"},
        {"x1^2", "27", "2^(2^26)"},
        {"x1*x2 + 3", "2401", "2^(2^2400)"},
    };
    for (const auto& f : fixtures) {
        const auto d = parse_polynomial(f.d);
        c.expect(lower::card_T(d).to_string() == f.card, std::string("card_T(") + f.d + ")");
        c.expect(bounds::bound_D(d).to_string() == f.bound, std::string("bound_D(") + f.d + ")");
    }
    c.expect(*lower::card_T(parse_polynomial("x1^5 - x1 - x2^2 + x2")).materialize() == 387420489, "3^18 value");
    c.expect(*bounds::bound_D(parse_polynomial("x1 - 1")).materialize() == pow(BigInt(2), 256), "2^256 value");
}

std::vector<oracle::Tuple> with_zero(std::vector<oracle::Tuple> sols, std::uint32_t n) {
    const oracle::Tuple z(n, 0);
    if (std::find(sols.begin(), sols.end(), z) == sols.end()) sols.push_back(z);
    std::sort(sols.begin(), sols.end());
    return sols;
}

void criterion_5(Check& c) {
    std::size_t violations = 0;
    std::size_t checked = 0;
    const auto all = ensys::all_equations(2);
    std::set<EnSystem> systems;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
        std::vector<EnEquation> eqs;
        for (std::size_t t = 0; t < all.size(); ++t)
            if ((mask >> t) & 1U) eqs.push_back(all[t]);
        systems.insert(ensys::canonical_form(EnSystem(2, eqs)).system);
    }
    for (const auto& s : systems) {
        ++checked;
        if (oracle::box_solutions(transforms::tilde(s), 5) != with_zero(oracle::box_solutions(s, 5), 2)) ++violations;
    }
    std::mt19937_64 gen(5);
    const auto e3 = ensys::all_equations(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<EnEquation> eqs;
        const auto size = 1 + gen() % 6;
        for (std::size_t k = 0; k < size; ++k) eqs.push_back(e3[gen() % e3.size()]);
        const EnSystem s(3, eqs);
        ++checked;
        if (oracle::box_solutions(transforms::tilde(s), 5) != with_zero(oracle::box_solutions(s, 5), 3)) ++violations;
    }
    c.expect(violations == 0, std::to_string(violations) + " violations in " + std::to_string(checked) + " systems");
}

void criterion_6(Check& c) {
    for (const char* text : {"x1 - 2", "x1 + 1", "x1", "x1^2 - 3*x1 + 2", "x1^2 - 4", "x1^2 - x1 - 12"}) {
        const auto d = parse_polynomial(text);
        std::set<std::int64_t> expected;
        for (std::int64_t v = 0; v <= 4; ++v)
            if (oracle::eval(d, oracle::Tuple{v}) == 0) expected.insert(v);
        const std::vector<poly::Polynomial> eqs{transforms::hat(d)};
        const std::vector<std::size_t> proj{transforms::hat_index(0)};
        std::set<std::int64_t> got;
        for (const auto& t : poly::projected_zeros(eqs, 4, proj)) got.insert(t[0]);
        c.expect(got == expected, std::string("hat projection of ") + text);
    }
}

void criterion_7(Check& c) {
    using transforms::Fraction;
    const auto one = transforms::rational_solutions_in_box(EnSystem(1, {EnEquation::one(1)}), 3);
    c.expect(one == std::vector<std::vector<Fraction>>{{{1, 1}}}, "{x1 = 1} does not give {1}");
    const auto idem = transforms::rational_solutions_in_box(EnSystem(1, {EnEquation::mul(1, 1, 1)}), 3);
    c.expect(idem == std::vector<std::vector<Fraction>>{{{0, 1}}, {{1, 1}}}, "{x1 * x1 = x1} does not give {0, 1}");
    for (const char* text : {"2*x1 - 1", "x1", "x1^2 - 2", "x1^5 - x1 - x2^2 + x2"}) {
        const auto b = bounds::bound_rational(parse_polynomial(text));
        const auto s = b.to_string();
        c.expect(!s.empty() && TowerBound::parse(s).to_string() == s, std::string("bound_rational(") + text + ")");
    }
    c.expect(within(bounds::height(1, 2), bounds::bound_rational(parse_polynomial("2*x1 - 1"))), "height of 1/2");
}

void criterion_8(Check& c) {
    const auto t0 = Clock::now();
    for (long x = 2; x <= 8; ++x) {
        const auto d = pell::lemma7_modulus(x);
        const auto f = pell::pell_fundamental(d);
        c.expect(f.x * f.x - d * f.y * f.y == 1, "pell x=" + std::to_string(x));
        const auto ws = pell::lemma7_witnesses(x, 3);
        c.expect(ws.size() >= 3, "fewer than 3 witnesses at x=" + std::to_string(x));
        for (const auto& y : ws) c.expect(oracle::is_square(1 + d * y * y), "non-square witness at x=" + std::to_string(x));
        c.expect(!ws.empty() && pell::lemma8_check(x, ws.front()), "witness below x + x^(x-2) at x=" + std::to_string(x));
        c.expect(!ws.empty() && ws.front() >= x + pow(BigInt(x), static_cast<unsigned long>(x - 2)),
                 "y_min below x + x^(x-2) at x=" + std::to_string(x));
    }
    const auto w2 = pell::lemma7_witnesses(2, 1);
    c.expect(w2 == std::vector<BigInt>{3} && BigInt(3) == 2 + pow(BigInt(2), 0), "equality at x=2");
    const double dt = seconds_since(t0);
    c.expect(dt < 5.0, "took " + std::to_string(dt) + " s");
}

void criterion_9(Check& c) {
    const auto t2 = gallery::build_thm8(2);
    c.expect(t2.base == 16 && t2.modulus == 73728, "depth-2 metadata");
    const auto x = gallery::assemble_thm8(t2);
    c.expect(ensys::check_solution(t2.system, x), "depth-2 assembly fails check_solution");
    c.expect(abs(x[10]) >= 16 + pow(BigInt(16), 14), "|x11| < 16 + 16^14");
    const auto t4 = gallery::build_thm8(4);
    c.expect(t4.base == 65536 && t4.modulus == pow(BigInt(65536), 3) * 65538, "depth-4 metadata");
    const auto big = gallery::assemble_thm8(t4);
    c.expect(ensys::check_solution(t4.system, big), "full-scale assembly fails check_solution");
    c.expect(pell::lemma8_check(65536, big[10]), "full-scale witness lower bound");
}

void criterion_10(Check& c) {
    const EnSystem delta(3, {EnEquation::one(3), EnEquation::add(1, 3, 2)});
    const auto a = lower::assemble_finite_fold(5, delta);
    c.expect(a.system.n() == 5 + 11 * 2, "variable count " + std::to_string(a.system.n()));
}

void criterion_11(Check& c) {
    const auto r = explorer::semi_algorithm_infinite(parse_polynomial("x1 - x2"), {3, 10, false});
    c.expect(r.status == explorer::SemiStatus::Terminated && r.shell == 3 && r.witness == ensys::Tuple{3, 3},
             "override run did not stop at shell 3 with (3, 3)");
    const auto s = explorer::semi_algorithm_infinite(parse_polynomial("x1 - x2"), {std::nullopt, 10, false});
    c.expect(s.status == explorer::SemiStatus::StartNotEnumerable && s.start == "2^(2^80)+1",
             "non-materializable start reported as '" + s.start + "'");
}

void criterion_12(Check& c) {
    const auto all = explorer::survey({2, 10'000, 1, explorer::kDefaultSamples, 1});
    std::size_t beyond = 0;
    for (const auto& k : all) beyond += k.status == explorer::Status::SolutionBeyondBound;
    c.expect(beyond == 0, std::to_string(beyond) + " SolutionBeyondBound systems");
    const auto chain = ensys::canonical_form(gallery::build_chain(2)).system;
    bool found = false;
    for (const auto& k : all) {
        if (k.system == chain) {
            found = k.max_norm_seen == 4 && k.status == explorer::Status::FiniteWithinBound;
        }
    }
    c.expect(found, "chain system not found with max norm 4");
}

void criterion_13(Check& c) {
    c.expect(worked_example_output(1) == worked_example_output(4), "worked example differs");
    c.expect(thm7_output(1) == thm7_output(4), "thm7 counts differ");
    c.expect(survey_output(1) == survey_output(4), "survey differs");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"worked example: 12 integer solutions, n=7, bound 2^64, scan (-2, 7132)", criterion_1},
        {"counting system: 1156, 2312, 4624 solutions by propagation", criterion_2},
        {"chain system n=2..6: two solutions, top 2^(2^(n-1))", criterion_3},
        {"card_T and bound_D on five fixtures", criterion_4},
        {"tilde adds exactly the zero tuple (E_2 all, E_3 sampled, B=5)", criterion_5},
        {"hat projects onto non-negative solutions (B=4)", criterion_6},
        {"rational encoding recovers {1} and {0,1}; finite rational bounds", criterion_7},
        {"Pell witnesses for x=2..8 and y >= x + x^(x-2)", criterion_8},
        {"21-variable system: base-16 assembly and full-scale assembly", criterion_9},
        {"finite-fold gadget: 27 variables for n=5, m=3", criterion_10},
        {"shell semi-algorithm: shell 3 with override, honest start without", criterion_11},
        {"survey n=2 at growth box 10^4: no SolutionBeyondBound, chain max norm 4", criterion_12},
        {"determinism of criteria 1, 2, 12 at 1 and 4 workers", criterion_13},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        const auto t0 = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double dt = seconds_since(t0);
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first;
        if (!c.ok) std::cout << " [" << c.why.str() << "]";
        std::cout << " (" << static_cast<long>(dt * 1000) << " ms)\n";
        failures += c.ok ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
