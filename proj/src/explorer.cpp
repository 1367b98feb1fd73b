#include "dioph/explorer.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "dioph/bounds.hpp"
#include "dioph/error.hpp"

namespace dioph::explorer {

using ensys::EnSystem;
using ensys::Tuple;

namespace {

std::int64_t norm(std::span<const std::int64_t> t) {
    std::int64_t m = 0;
    for (auto v : t) m = std::max(m, v < 0 ? -v : v);
    return m;
}

bool zigzag_lex_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), zigzag_less);
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

std::int64_t materialized_bound(std::size_t n) {
    const auto b = bounds::conjecture_bound(n).materialize(62);
    if (!b) throw InfeasibleError("2^(2^(n-1)) does not fit a machine integer for n=" + std::to_string(n));
    return b->get_si();
}

// Smallest tuple in zigzag-lex order among solutions with max-norm alpha that pass `keep`.
std::optional<Tuple> best_in_shell(const EnSystem& s, std::int64_t alpha,
                                   const std::function<bool(std::span<const std::int64_t>)>& keep) {
    std::optional<Tuple> best;
    ensys::for_each_solution(s, alpha, [&](std::span<const std::int64_t> t) {
        if (norm(t) == alpha && keep(t) && (!best || zigzag_lex_less(t, *best))) best = Tuple(t.begin(), t.end());
        return true;
    });
    return best;
}

}  // namespace

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Vacuous: return "Vacuous";
        case VerdictKind::WitnessFound: return "WitnessFound";
        case VerdictKind::CandidateCounterexample: return "CandidateCounterexample";
        case VerdictKind::Exhausted: return "Exhausted";
    }
    return {};
}

EnSystem relation_system(std::span<const std::int64_t> x) {
    const EnSystem full = ensys::induced_system(x);
    std::vector<ensys::EnEquation> eqs;
    for (const auto& eq : full.equations()) {
        if (eq.kind != ensys::EqKind::One) eqs.push_back(eq);
    }
    return EnSystem(full.n(), std::move(eqs));
}

Verdict probe(std::span<const std::int64_t> x, std::int64_t horizon, bool strict) {
    if (x.empty()) throw DomainError("probe needs a non-empty tuple");
    if (horizon <= norm(x)) throw DomainError("probe horizon must exceed max |x_i|");
    Verdict v;
    v.horizon = horizon;
    const std::int64_t x1 = abs64(x[0]);
    // the bound is 2^(2^(n-1)); anything beyond 2^62 is certainly above |x_1|
    const auto bound = bounds::conjecture_bound(x.size()).materialize(62);
    if (!bound || BigInt(static_cast<long>(x1)) <= *bound) {
        v.kind = VerdictKind::Vacuous;
        return v;
    }
    const EnSystem rel = relation_system(x);
    const auto keep = [&](std::span<const std::int64_t> t) { return strict ? abs64(t[0]) > x1 : true; };
    const auto at_horizon = ensys::summarize_box(rel, horizon);
    if (at_horizon.max_norm && *at_horizon.max_norm > x1) {
        if (!strict) {
            // least alpha with a solution of max-norm in (|x_1|, alpha]
            const BigInt base = ensys::count_solutions(rel, x1);
            std::int64_t lo = x1 + 1;
            std::int64_t hi = horizon;
            while (lo < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (ensys::count_solutions(rel, mid) > base) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            v.witness = best_in_shell(rel, lo, keep);
        } else {
            for (std::int64_t alpha = x1 + 1; alpha <= horizon && !v.witness; ++alpha) {
                v.witness = best_in_shell(rel, alpha, keep);
            }
        }
    }
    if (v.witness) {
        v.kind = VerdictKind::WitnessFound;
        return v;
    }
    // no growth between half the horizon and the horizon: x looks isolated
    const auto inner = ensys::count_solutions(rel, std::max<std::int64_t>(horizon / 2, norm(x)));
    v.kind = inner == at_horizon.count ? VerdictKind::CandidateCounterexample : VerdictKind::Exhausted;
    return v;
}

namespace {

nlohmann::ordered_json tuple_json(const Tuple& t) {
    auto a = nlohmann::ordered_json::array();
    for (auto v : t) a.push_back(v);
    return a;
}

}  // namespace

nlohmann::ordered_json to_json(const Verdict& v) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(v.kind);
    j["witness"] = v.witness ? tuple_json(*v.witness) : nlohmann::ordered_json(nullptr);
    j["horizon"] = v.horizon;
    return j;
}

std::string to_string(Status status) {
    switch (status) {
        case Status::FiniteWithinBound: return "FiniteWithinBound";
        case Status::GrowingFamily: return "GrowingFamily";
        case Status::SolutionBeyondBound: return "SolutionBeyondBound";
        case Status::Unknown: return "Unknown";
    }
    return {};
}

Classification classify(const EnSystem& s, std::int64_t growth_box) {
    Classification c;
    c.system = s;
    c.bound = materialized_bound(s.n());
    c.growth_box = growth_box;
    c.inner_box = growth_box / 2;
    const auto outer = ensys::summarize_box(s, growth_box);
    c.growth_count = outer.count;
    c.max_norm_seen = outer.max_norm;
    c.inner_count = ensys::count_solutions(s, c.inner_box);
    if (!outer.max_norm || *outer.max_norm <= c.bound) {
        c.status = Status::FiniteWithinBound;
    } else if (growth_box <= c.bound || c.inner_box < c.bound) {
        c.status = Status::Unknown;  // the horizons cannot separate the bound from growth
    } else if (c.growth_count > c.inner_count) {
        c.status = Status::GrowingFamily;
    } else {
        c.status = Status::SolutionBeyondBound;
    }
    return c;
}

std::vector<Classification> survey(const SurveyOptions& options) {
    if (options.n < 1 || options.n > 3) throw DomainError("survey supports n = 1, 2, 3");
    if (options.growth_box < 1) throw DomainError("survey growth box must be positive");
    const auto all = ensys::all_equations(options.n);
    std::set<EnSystem> systems;
    if (options.n <= 2) {
        const std::uint64_t subsets = std::uint64_t{1} << all.size();
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            std::vector<ensys::EnEquation> eqs;
            for (std::size_t t = 0; t < all.size(); ++t) {
                if ((mask >> t) & 1U) eqs.push_back(all[t]);
            }
            systems.insert(ensys::canonical_form(EnSystem(options.n, std::move(eqs))).system);
        }
    } else {
        std::mt19937_64 gen(options.seed);
        for (std::size_t t = 0; t < options.samples; ++t) {
            const std::size_t size = 1 + gen() % 6;
            std::vector<ensys::EnEquation> eqs;
            for (std::size_t k = 0; k < size; ++k) eqs.push_back(all[gen() % all.size()]);
            systems.insert(ensys::canonical_form(EnSystem(options.n, std::move(eqs))).system);
        }
    }
    const std::vector<EnSystem> order(systems.begin(), systems.end());
    std::vector<Classification> out(order.size());
    const unsigned workers = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(order.size())));
    const auto work = [&](unsigned w) {
        for (std::size_t t = w; t < order.size(); t += workers) out[t] = classify(order[t], options.growth_box);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    return out;
}

nlohmann::ordered_json to_json(const Classification& c) {
    nlohmann::ordered_json j;
    j["system"] = ensys::to_json(c.system);
    j["status"] = to_string(c.status);
    j["max_norm_seen"] = c.max_norm_seen ? nlohmann::ordered_json(*c.max_norm_seen) : nlohmann::ordered_json(nullptr);
    j["bound"] = c.bound;
    nlohmann::ordered_json ev;
    ev["horizons"] = {c.inner_box, c.growth_box};
    ev["counts"] = {c.inner_count.get_str(), c.growth_count.get_str()};
    j["evidence"] = std::move(ev);
    return j;
}

std::string to_string(SemiStatus status) {
    switch (status) {
        case SemiStatus::Terminated: return "Terminated";
        case SemiStatus::Exhausted: return "Exhausted";
        case SemiStatus::StartNotEnumerable: return "StartNotEnumerable";
    }
    return {};
}

namespace {

bool is_zero_at(const poly::Polynomial& d, std::span<const std::int64_t> y) {
    if (const auto v = d.evaluate_small(y)) return *v == 0;
    return d.evaluate(y) == 0;
}

// Tuples with max-norm exactly alpha in zigzag-lex order (non-negative: in [0, alpha]).
std::optional<Tuple> first_zero_in_shell(const poly::Polynomial& d, std::int64_t alpha, bool nonneg) {
    const std::size_t p = d.num_vars();
    const std::int64_t digits = nonneg ? alpha + 1 : 2 * alpha + 1;
    const auto value = [&](std::int64_t idx) -> std::int64_t {
        if (nonneg) return idx;
        return idx % 2 == 1 ? (idx + 1) / 2 : -(idx / 2);
    };
    std::vector<std::int64_t> idx(p, 0);
    Tuple y(p, 0);
    for (;;) {
        for (std::size_t i = 0; i < p; ++i) y[i] = value(idx[i]);
        if (norm(y) == alpha && is_zero_at(d, y)) return y;
        std::size_t pos = p;
        while (pos > 0) {
            if (idx[pos - 1] + 1 < digits) {
                ++idx[pos - 1];
                break;
            }
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) return std::nullopt;
    }
}

}  // namespace

SemiReport semi_algorithm_infinite(const poly::Polynomial& d, const SemiOptions& options) {
    SemiReport r;
    r.cutoff = options.cutoff;
    std::int64_t start = 0;
    if (options.start_override) {
        start = *options.start_override;
        if (start < 0) throw DomainError("semi-algorithm start must be non-negative");
        r.start = std::to_string(start);
    } else {
        const TowerBound bound = options.nonneg ? bounds::bound_nonneg(d) : bounds::bound_D(d);
        const auto exact = bound.materialize(62);
        if (!exact || *exact + 1 > BigInt(static_cast<long>(options.cutoff))) {
            r.status = SemiStatus::StartNotEnumerable;
            r.start = bound.to_string() + "+1";
            return r;
        }
        start = exact->get_si() + 1;
        r.start = std::to_string(start);
    }
    if (options.cutoff < start) throw DomainError("semi-algorithm cutoff must be at least the start");
    for (std::int64_t alpha = start; alpha <= options.cutoff; ++alpha) {
        if (auto w = first_zero_in_shell(d, alpha, options.nonneg)) {
            r.status = SemiStatus::Terminated;
            r.shell = alpha;
            r.witness = std::move(w);
            return r;
        }
    }
    r.status = SemiStatus::Exhausted;
    r.shell = options.cutoff;
    return r;
}

nlohmann::ordered_json to_json(const SemiReport& r) {
    nlohmann::ordered_json j;
    j["status"] = to_string(r.status);
    j["start"] = r.start;
    j["cutoff"] = r.cutoff;
    j["shell"] = r.shell ? nlohmann::ordered_json(*r.shell) : nlohmann::ordered_json(nullptr);
    j["witness"] = r.witness ? tuple_json(*r.witness) : nlohmann::ordered_json(nullptr);
    return j;
}

}  // namespace dioph::explorer
