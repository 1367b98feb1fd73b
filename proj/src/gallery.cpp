#include "dioph/gallery.hpp"

#include <algorithm>
#include <thread>

#include "dioph/bounds.hpp"
#include "dioph/error.hpp"
#include "dioph/pell.hpp"
#include "dioph/transforms.hpp"

namespace dioph::gallery {

using ensys::EnSystem;
using ensys::SystemBuilder;

EnSystem build_chain(std::uint32_t n) {
    if (n < 2) throw DomainError("the chain system needs n >= 2");
    SystemBuilder b(n);
    b.add(1, 1, 2);
    b.mul(1, 1, 2);
    for (std::uint32_t i = 2; i < n; ++i) b.mul(i, i, i + 1);
    return b.build();
}

EnSystem build_thm7(std::uint32_t n) {
    if (n < 10) throw DomainError("the counting system needs n >= 10");
    SystemBuilder b(n);
    b.one(1);
    b.add(1, 1, 2);
    for (std::uint32_t i = 2; i <= 5; ++i) b.mul(i, i, i + 1);
    b.mul(7, 8, 6);
    b.mul(9, 10, 6);
    for (std::uint32_t i = 11; i <= n; ++i) b.mul(i, i, i);
    return b.build();
}

Thm8System build_thm8(unsigned depth) {
    if (depth < 2 || depth > 4) throw DomainError("thm8 squaring depth must be 2, 3 or 4");
    SystemBuilder b(21);
    b.one(1);
    b.add(1, 1, 2);
    // x3 = 4, then depth - 1 further squarings; the rest of the chain copies
    // the base by multiplying with x1 = 1 so the system keeps its shape
    b.mul(2, 2, 3);
    for (std::uint32_t i = 3; i <= 5; ++i) {
        if (i < depth + 2) {
            b.mul(i, i, i + 1);
        } else {
            b.mul(1, i, i + 1);
        }
    }
    b.mul(6, 6, 7);
    b.mul(6, 7, 8);
    b.add(2, 6, 9);
    b.mul(8, 9, 10);
    b.mul(11, 11, 12);
    b.mul(10, 12, 13);
    b.add(1, 13, 14);
    b.mul(15, 15, 14);
    b.add(16, 16, 17);
    b.add(1, 18, 17);
    b.add(16, 18, 19);
    b.mul(18, 19, 20);
    b.mul(12, 21, 20);
    Thm8System out;
    out.system = b.build();
    out.depth = depth;
    out.base = pow(BigInt(2), 1UL << depth);
    out.modulus = pell::lemma7_modulus(out.base);
    return out;
}

std::vector<BigInt> assemble_thm8(const Thm8System& s) {
    std::vector<BigInt> x(22);  // 1-based
    const BigInt& b = s.base;
    x[1] = 1;
    x[2] = 2;
    x[3] = 4;
    for (std::uint32_t i = 3; i <= 5; ++i) x[i + 1] = (i < s.depth + 2) ? x[i] * x[i] : x[i];
    if (x[6] != b) throw Error("thm8: chain does not reach the base");
    x[7] = x[6] * x[6];
    x[8] = x[6] * x[7];
    x[9] = x[2] + x[6];
    x[10] = x[8] * x[9];
    const auto pell_solution = pell::pell_fundamental(s.modulus);
    x[11] = pell_solution.y;
    x[12] = x[11] * x[11];
    x[13] = x[10] * x[12];
    x[14] = x[1] + x[13];
    x[15] = pell_solution.x;
    const auto [a, w] = transforms::lemma6_witness(x[12]);
    x[16] = w;
    x[17] = x[16] + x[16];
    x[18] = x[17] - x[1];
    x[19] = x[16] + x[18];
    x[20] = x[18] * x[19];
    x[21] = a;
    x.erase(x.begin());
    return x;
}

WorkedExample worked_example(unsigned threads) {
    WorkedExample w{lower::lower_compact(poly::parse_equation("x1^5 - x1 = x2^2 - x2"))};
    w.n = w.lowering.target.n();
    const auto fifth = poly::parse_polynomial("x1^5", 2);
    for (std::size_t i = 0; i < w.lowering.meaning.size(); ++i) {
        if (w.lowering.meaning[i] == fifth) w.fifth_power_var = static_cast<std::uint32_t>(i + 1);
    }
    const auto bound = bounds::conjecture_bound(w.n);
    w.bound_tower = bound.to_string();
    w.bound = bound.value().to_string();
    w.bound_value = *bound.materialize();
    // |x1^5| <= bound gives x1 <= floor(bound^(1/5))
    BigInt root;
    mpz_root(root.get_mpz_t(), w.bound_value.get_mpz_t(), 5);
    w.upper_exclusive = root.get_si() + 1;
    // x2^2 - x2 >= -1/4 forces x1^5 - x1 > -1, hence x1 > -2; taken as given
    w.lower_exclusive = -2;

    // 4 x1^5 - 4 x1 + 1 = (2 x2 - 1)^2
    const std::int64_t lo = w.lower_exclusive + 1;
    const std::int64_t hi = w.upper_exclusive - 1;
    const unsigned workers = std::max(1U, threads);
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> parts(workers);
    const auto scan = [&](unsigned t) {
        const std::int64_t total = hi - lo + 1;
        const std::int64_t from = lo + total * t / workers;
        const std::int64_t to = lo + total * (t + 1) / workers;
        for (std::int64_t x1 = from; x1 < to; ++x1) {
            const BigInt v = 4 * pow(BigInt(static_cast<long>(x1)), 5) - 4 * x1 + 1;
            if (const auto r = exact_sqrt(v)) {
                const BigInt a = (1 - *r) / 2;
                const BigInt b = (1 + *r) / 2;
                parts[t].emplace_back(x1, a.get_si());
                if (b != a) parts[t].emplace_back(x1, b.get_si());
            }
        }
    };
    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(scan, t);
        for (auto& th : pool) th.join();
    }
    for (auto& p : parts) w.solutions.insert(w.solutions.end(), p.begin(), p.end());
    std::sort(w.solutions.begin(), w.solutions.end());
    return w;
}

nlohmann::ordered_json to_json(const WorkedExample& w) {
    nlohmann::ordered_json j;
    j["equation"] = w.lowering.source.to_string();
    j["n"] = w.n;
    j["system"] = ensys::to_json(w.lowering.target);
    j["fifth_power_var"] = w.fifth_power_var;
    j["bound"] = w.bound;
    j["bound_tower"] = w.bound_tower;
    j["bound_value"] = w.bound_value.get_str();
    j["scan"] = {w.lower_exclusive, w.upper_exclusive};
    auto sols = nlohmann::ordered_json::array();
    for (const auto& [a, b] : w.solutions) sols.push_back({a, b});
    j["solutions"] = std::move(sols);
    return j;
}

}  // namespace dioph::gallery
