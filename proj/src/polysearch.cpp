#include "dioph/polysearch.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "dioph/error.hpp"

namespace dioph::poly {

namespace {

using i128 = __int128;

struct Interval {
    i128 lo;
    i128 hi;
};

std::optional<i128> mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

std::optional<Interval> mul(const Interval& a, const Interval& b) {
    i128 lo = 0;
    i128 hi = 0;
    bool first = true;
    for (i128 x : {a.lo, a.hi}) {
        for (i128 y : {b.lo, b.hi}) {
            const auto p = mul(x, y);
            if (!p) return std::nullopt;
            if (first || *p < lo) lo = *p;
            if (first || *p > hi) hi = *p;
            first = false;
        }
    }
    return Interval{lo, hi};
}

std::optional<i128> ipow(i128 base, std::uint32_t e) {
    i128 r = 1;
    for (std::uint32_t t = 0; t < e; ++t) {
        const auto next = mul(r, base);
        if (!next) return std::nullopt;
        r = *next;
    }
    return r;
}

std::optional<Interval> pow_range(const Interval& x, std::uint32_t e) {
    if (e == 0) return Interval{1, 1};
    const auto pl = ipow(x.lo, e);
    const auto ph = ipow(x.hi, e);
    if (!pl || !ph) return std::nullopt;
    if (e % 2 == 1) return Interval{*pl, *ph};
    if (x.lo <= 0 && x.hi >= 0) return Interval{0, std::max(*pl, *ph)};
    return Interval{std::min(*pl, *ph), std::max(*pl, *ph)};
}

struct Term {
    i128 coef = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (var, exponent)
};

struct Compiled {
    const Polynomial* source = nullptr;
    std::vector<Term> terms;
    std::vector<std::uint32_t> vars;
    bool exact_coefficients = true;  // every coefficient fits in 128 bits
};

Compiled compile(const Polynomial& p) {
    Compiled c;
    c.source = &p;
    std::vector<char> seen(p.num_vars(), 0);
    for (const auto& [exps, coef] : p.terms()) {
        Term t;
        if (bit_length(coef) > 120) {
            c.exact_coefficients = false;
        } else {
            const auto v = to_int64(coef);
            if (v) {
                t.coef = *v;
            } else {
                // between 64 and 120 bits: split into two halves
                BigInt hi = coef >> 60;
                BigInt lo = coef - (hi << 60);
                t.coef = (static_cast<i128>(*to_int64(hi)) << 60) + *to_int64(lo);
            }
        }
        for (std::uint32_t v = 0; v < exps.size(); ++v) {
            if (exps[v] == 0) continue;
            t.factors.emplace_back(v, exps[v]);
            if (!seen[v]) {
                seen[v] = 1;
                c.vars.push_back(v);
            }
        }
        c.terms.push_back(std::move(t));
    }
    std::sort(c.vars.begin(), c.vars.end());
    return c;
}

enum class Range { Excludes, Contains, Unknown };

class Search {
public:
    Search(std::span<const Polynomial> equations, std::span<const VarRange> ranges,
           std::span<const std::size_t> projection)
        : p_(ranges.size()), projection_(projection.begin(), projection.end()) {
        for (const auto& e : equations) {
            if (e.num_vars() != p_) throw DomainError("projected_zeros: polynomial arity differs from the ranges");
            eqs_.push_back(compile(e));
        }
        for (auto v : projection_) {
            if (v >= p_) throw DomainError("projected_zeros: projection index out of range");
        }
        cur_.resize(p_);
        for (std::size_t v = 0; v < p_; ++v) cur_[v] = Interval{ranges[v].lo, ranges[v].hi};
        by_var_.assign(p_, {});
        for (std::uint32_t t = 0; t < eqs_.size(); ++t) {
            for (auto v : eqs_[t].vars) by_var_[v].push_back(t);
        }
        point_.assign(p_, 0);
    }

    std::vector<std::vector<std::int64_t>> run() {
        for (const auto& r : cur_) {
            if (r.lo > r.hi) return {};
        }
        for (std::uint32_t t = 0; t < eqs_.size(); ++t) {
            if (check(t) == Range::Excludes) return {};
        }
        project(0);
        std::sort(found_.begin(), found_.end());
        found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
        return found_;
    }

private:
    Range check(std::uint32_t t) {
        const auto& c = eqs_[t];
        bool all_fixed = true;
        for (auto v : c.vars) all_fixed = all_fixed && cur_[v].lo == cur_[v].hi;
        if (c.exact_coefficients) {
            i128 lo = 0;
            i128 hi = 0;
            bool overflow = false;
            for (const auto& term : c.terms) {
                std::optional<Interval> acc = Interval{term.coef, term.coef};
                for (const auto& [v, e] : term.factors) {
                    const auto pr = pow_range(cur_[v], e);
                    if (!pr) {
                        acc.reset();
                        break;
                    }
                    acc = mul(*acc, *pr);
                    if (!acc) break;
                }
                if (!acc || __builtin_add_overflow(lo, acc->lo, &lo) || __builtin_add_overflow(hi, acc->hi, &hi)) {
                    overflow = true;
                    break;
                }
            }
            if (!overflow) {
                if (lo > 0 || hi < 0) return Range::Excludes;
                return all_fixed ? Range::Contains : Range::Unknown;
            }
        }
        if (!all_fixed) return Range::Unknown;
        for (std::size_t v = 0; v < p_; ++v) point_[v] = static_cast<std::int64_t>(cur_[v].lo);
        // unassigned variables outside this equation do not matter for its value
        return c.source->evaluate(std::span<const std::int64_t>(point_)) == 0 ? Range::Contains : Range::Excludes;
    }

    bool consistent_after(std::uint32_t v) {
        for (auto t : by_var_[v]) {
            if (check(t) == Range::Excludes) return false;
        }
        return true;
    }

    void project(std::size_t depth) {
        if (depth == projection_.size()) {
            if (rest_solvable()) {
                std::vector<std::int64_t> key;
                key.reserve(projection_.size());
                for (auto v : projection_) key.push_back(static_cast<std::int64_t>(cur_[v].lo));
                found_.push_back(std::move(key));
            }
            return;
        }
        const auto v = projection_[depth];
        const Interval saved = cur_[v];
        if (saved.lo == saved.hi) {
            project(depth + 1);
            return;
        }
        for (i128 x = saved.lo; x <= saved.hi; ++x) {
            cur_[v] = Interval{x, x};
            if (consistent_after(v)) project(depth + 1);
        }
        cur_[v] = saved;
    }

    bool rest_solvable() {
        // union-find over variables still open
        std::vector<std::uint32_t> parent(p_);
        std::iota(parent.begin(), parent.end(), 0U);
        const auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        const auto open = [&](std::uint32_t v) { return cur_[v].lo != cur_[v].hi; };
        for (const auto& c : eqs_) {
            std::optional<std::uint32_t> first;
            for (auto v : c.vars) {
                if (!open(v)) continue;
                if (!first) {
                    first = v;
                } else {
                    parent[find(v)] = find(*first);
                }
            }
        }
        std::vector<std::vector<std::uint32_t>> groups(p_);
        for (std::uint32_t v = 0; v < p_; ++v) {
            if (open(v) && !by_var_[v].empty()) groups[find(v)].push_back(v);
        }
        for (auto& g : groups) {
            if (g.empty()) continue;
            if (!exists(g, 0)) return false;
        }
        // every equation is now decided by fixed variables or checked inside a component
        for (std::uint32_t t = 0; t < eqs_.size(); ++t) {
            bool closed = true;
            for (auto v : eqs_[t].vars) closed = closed && !open(v);
            if (closed && check(t) != Range::Contains) return false;
        }
        return true;
    }

    bool exists(const std::vector<std::uint32_t>& group, std::size_t depth) {
        if (depth == group.size()) {
            for (auto v : group) {
                for (auto t : by_var_[v]) {
                    if (check(t) != Range::Contains) return false;
                }
            }
            return true;
        }
        const auto v = group[depth];
        const Interval saved = cur_[v];
        // small magnitudes first: witnesses tend to be near zero
        const i128 reach = std::max(saved.hi < 0 ? -saved.hi : saved.hi, saved.lo < 0 ? -saved.lo : saved.lo);
        bool ok = false;
        for (i128 step = 0; step <= 2 * reach && !ok; ++step) {
            const i128 off = (step + 1) / 2;
            const i128 x = step % 2 == 1 ? off : -off;
            if (x < saved.lo || x > saved.hi) continue;
            cur_[v] = Interval{x, x};
            if (consistent_after(v) && exists(group, depth + 1)) ok = true;
        }
        cur_[v] = saved;
        return ok;
    }

    std::size_t p_;
    std::vector<std::size_t> projection_;
    std::vector<Compiled> eqs_;
    std::vector<Interval> cur_;
    std::vector<std::vector<std::uint32_t>> by_var_;
    std::vector<std::int64_t> point_;
    std::vector<std::vector<std::int64_t>> found_;
};

}  // namespace

std::vector<std::vector<std::int64_t>> projected_zeros(std::span<const Polynomial> equations,
                                                       std::span<const VarRange> ranges,
                                                       std::span<const std::size_t> projection) {
    return Search(equations, ranges, projection).run();
}

std::vector<std::vector<std::int64_t>> projected_zeros(std::span<const Polynomial> equations, std::int64_t box,
                                                       std::span<const std::size_t> projection) {
    if (box < 0) throw DomainError("box radius must be non-negative");
    if (equations.empty()) throw DomainError("projected_zeros needs at least one equation to fix the arity");
    std::vector<VarRange> ranges(equations.front().num_vars(), VarRange{-box, box});
    return projected_zeros(equations, ranges, projection);
}

}  // namespace dioph::poly
