#include "dioph/solver.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <thread>

#include "dioph/error.hpp"

namespace dioph::ensys {

namespace {

using i128 = __int128;

struct Interval {
    std::int64_t lo;
    std::int64_t hi;

    bool fixed() const noexcept { return lo == hi; }
    bool contains(i128 v) const noexcept { return lo <= v && v <= hi; }
};

using Domains = std::vector<Interval>;

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 ceil_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

std::int64_t isqrt_floor(i128 v) {
    if (v <= 0) return 0;
    auto r = static_cast<i128>(__builtin_sqrtl(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return static_cast<std::int64_t>(r);
}

std::int64_t isqrt_ceil(i128 v) {
    const std::int64_t r = isqrt_floor(v);
    return static_cast<i128>(r) * r == v ? r : r + 1;
}

std::int64_t magnitude(const Interval& d) { return std::max(d.lo < 0 ? -d.lo : d.lo, d.hi < 0 ? -d.hi : d.hi); }

// Internal 0-based form of an equation, with the shape decided once.
struct Constraint {
    enum class Shape {
        Linear,     // sum coef[t] * x[var[t]] = 0 (all add forms, one folds to a fixed domain)
        Idempotent, // x * x = x
        Square,     // x_a * x_a = x_c
        ZeroOrOne,  // x_a * x_b = x_a   <=>   x_a * (x_b - 1) = 0
        Product,    // x_a * x_b = x_c, all distinct
    };
    Shape shape = Shape::Linear;
    std::uint32_t a = 0, b = 0, c = 0;
    std::uint32_t nvars = 0;
    std::uint32_t var[3] = {0, 0, 0};
    std::int64_t coef[3] = {0, 0, 0};

    std::span<const std::uint32_t> vars() const { return {var, nvars}; }
};

Constraint make_constraint(const EnEquation& eq) {
    Constraint c;
    const std::uint32_t i = eq.i - 1;
    const std::uint32_t j = eq.j - 1;
    const std::uint32_t k = eq.k - 1;
    auto add_linear = [&](std::uint32_t v, std::int64_t w) {
        for (std::uint32_t t = 0; t < c.nvars; ++t) {
            if (c.var[t] == v) {
                c.coef[t] += w;
                return;
            }
        }
        c.var[c.nvars] = v;
        c.coef[c.nvars] = w;
        ++c.nvars;
    };
    switch (eq.kind) {
        case EqKind::One:
            // handled as a root domain restriction; keep a trivial linear record
            c.shape = Constraint::Shape::Linear;
            c.nvars = 0;
            return c;
        case EqKind::Add: {
            c.shape = Constraint::Shape::Linear;
            add_linear(i, 1);
            add_linear(j, 1);
            add_linear(k, -1);
            std::uint32_t w = 0;
            for (std::uint32_t t = 0; t < c.nvars; ++t) {
                if (c.coef[t] != 0) {
                    c.var[w] = c.var[t];
                    c.coef[w] = c.coef[t];
                    ++w;
                }
            }
            c.nvars = w;
            return c;
        }
        case EqKind::Mul:
            if (i == j && j == k) {
                c.shape = Constraint::Shape::Idempotent;
                c.a = i;
                c.nvars = 1;
                c.var[0] = i;
            } else if (i == j) {
                c.shape = Constraint::Shape::Square;
                c.a = i;
                c.c = k;
                c.nvars = 2;
                c.var[0] = i;
                c.var[1] = k;
            } else if (k == i || k == j) {
                c.shape = Constraint::Shape::ZeroOrOne;
                c.a = k;
                c.b = (k == i) ? j : i;
                c.nvars = 2;
                c.var[0] = c.a;
                c.var[1] = c.b;
            } else {
                c.shape = Constraint::Shape::Product;
                c.a = i;
                c.b = j;
                c.c = k;
                c.nvars = 3;
                c.var[0] = i;
                c.var[1] = j;
                c.var[2] = k;
            }
            return c;
    }
    return c;
}

enum class Status { Entailed, Violated, Open };

// A branching decision applied at one node: either one variable or a divisor pair.
struct Choice {
    std::uint32_t var_a = 0;
    std::int64_t val_a = 0;
    std::uint32_t var_b = 0;
    std::int64_t val_b = 0;
    bool pair = false;
};

enum class Mode { Count, Collect, Visit };

class Search {
public:
    Search(const EnSystem& s, std::int64_t box, Mode mode, std::size_t limit)
        : n_(s.n()), box_(box), mode_(mode), limit_(limit) {
        root_ = Domains(n_, Interval{-box, box});
        std::vector<std::uint32_t> membership(n_, 0);
        for (const auto& eq : s.equations()) {
            if (eq.kind == EqKind::One) {
                auto& d = root_[eq.i - 1];
                if (d.contains(1)) {
                    d = Interval{1, 1};
                } else {
                    infeasible_root_ = true;
                }
                membership[eq.i - 1]++;
                continue;
            }
            Constraint c = make_constraint(eq);
            if (c.shape == Constraint::Shape::Linear && c.nvars == 0) continue;  // x_i + x_j = x_i + x_j style identity
            cons_.push_back(c);
            for (auto idx : {eq.i, eq.j, eq.k}) membership[idx - 1]++;
        }
        var_cons_.assign(n_, {});
        for (std::uint32_t t = 0; t < cons_.size(); ++t) {
            for (auto v : cons_[t].vars()) {
                auto& lst = var_cons_[v];
                if (lst.empty() || lst.back() != t) lst.push_back(t);
            }
        }
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0U);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::uint32_t x, std::uint32_t y) { return membership[x] > membership[y]; });
        in_queue_.assign(cons_.size(), 0);
    }

    // Propagates the root and returns its branching choices (empty when the
    // root is already a leaf or infeasible; see root_state()).
    enum class RootState { Infeasible, Leaf, Branch };

    RootState prepare_root(std::vector<Choice>& choices) {
        if (infeasible_root_ || !propagate_all(root_)) return RootState::Infeasible;
        bool open = false;
        switch (classify(root_, open)) {
            case Status::Violated: return RootState::Infeasible;
            default: break;
        }
        if (!open) return RootState::Leaf;
        choices = branch_choices(root_);
        return RootState::Branch;
    }

    const Domains& root() const { return root_; }

    void run_leaf(const Domains& d) { leaf(d); }

    void run_choice(const Domains& parent, const Choice& ch) {
        if (stopped_) return;
        Domains d = parent;
        if (!apply(d, ch)) return;
        dfs(d);
    }

    void run_from_root() {
        std::vector<Choice> choices;
        switch (prepare_root(choices)) {
            case RootState::Infeasible: return;
            case RootState::Leaf: leaf(root_); return;
            case RootState::Branch:
                for (const auto& ch : choices) {
                    run_choice(root_, ch);
                    if (stopped_) return;
                }
        }
    }

    void set_visitor(const std::function<bool(std::span<const std::int64_t>)>* visit) { visit_ = visit; }

    BigInt count;
    std::optional<std::int64_t> max_norm;
    std::priority_queue<Tuple> heap;  // max-heap: the worst kept solution on top

private:
    bool tighten(Domains& d, std::uint32_t v, i128 lo, i128 hi) {
        auto& cur = d[v];
        const i128 new_lo = std::max<i128>(cur.lo, lo);
        const i128 new_hi = std::min<i128>(cur.hi, hi);
        if (new_lo > new_hi) return false;
        if (new_lo != cur.lo || new_hi != cur.hi) {
            cur.lo = static_cast<std::int64_t>(new_lo);
            cur.hi = static_cast<std::int64_t>(new_hi);
            for (auto t : var_cons_[v]) {
                if (!in_queue_[t]) {
                    in_queue_[t] = 1;
                    queue_.push_back(t);
                }
            }
        }
        return true;
    }

    bool propagate_linear(Domains& d, const Constraint& c) {
        // sum coef[t] * x[t] = 0
        i128 min_term[3];
        i128 max_term[3];
        i128 total_min = 0;
        i128 total_max = 0;
        for (std::uint32_t t = 0; t < c.nvars; ++t) {
            const auto& dv = d[c.var[t]];
            const i128 p = static_cast<i128>(c.coef[t]) * dv.lo;
            const i128 q = static_cast<i128>(c.coef[t]) * dv.hi;
            min_term[t] = std::min(p, q);
            max_term[t] = std::max(p, q);
            total_min += min_term[t];
            total_max += max_term[t];
        }
        for (std::uint32_t t = 0; t < c.nvars; ++t) {
            // coef * x in [-(total_max - max_term), -(total_min - min_term)]
            const i128 lo = -(total_max - max_term[t]);
            const i128 hi = -(total_min - min_term[t]);
            const i128 w = c.coef[t];
            i128 xlo;
            i128 xhi;
            if (w > 0) {
                xlo = ceil_div(lo, w);
                xhi = floor_div(hi, w);
            } else {
                xlo = ceil_div(hi, w);
                xhi = floor_div(lo, w);
            }
            if (!tighten(d, c.var[t], xlo, xhi)) return false;
        }
        return true;
    }

    bool propagate_product(Domains& d, const Constraint& c) {
        // x_a * x_b = x_c with distinct variables
        const auto& a = d[c.a];
        const auto& b = d[c.b];
        {
            const i128 p1 = static_cast<i128>(a.lo) * b.lo;
            const i128 p2 = static_cast<i128>(a.lo) * b.hi;
            const i128 p3 = static_cast<i128>(a.hi) * b.lo;
            const i128 p4 = static_cast<i128>(a.hi) * b.hi;
            if (!tighten(d, c.c, std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}))) return false;
        }
        // x_a = x_c / x_b when x_b has constant sign, and symmetrically.
        const auto divide = [&](std::uint32_t target, std::uint32_t divisor) {
            const auto& q = d[divisor];
            const auto& k = d[c.c];
            if (q.lo <= 0 && q.hi >= 0) {
                // x_c != 0 forces both factors non-zero; nothing else to learn here.
                return true;
            }
            const i128 corners[4] = {
                static_cast<i128>(k.lo), static_cast<i128>(k.lo), static_cast<i128>(k.hi), static_cast<i128>(k.hi)};
            const i128 divs[4] = {q.lo, q.hi, q.lo, q.hi};
            i128 lo = 0;
            i128 hi = 0;
            for (int t = 0; t < 4; ++t) {
                const i128 fl = floor_div(corners[t], divs[t]);
                const i128 ce = ceil_div(corners[t], divs[t]);
                if (t == 0) {
                    lo = ce;
                    hi = fl;
                } else {
                    lo = std::min(lo, ce);
                    hi = std::max(hi, fl);
                }
            }
            return tighten(d, target, lo, hi);
        };
        if (!divide(c.a, c.b)) return false;
        if (!divide(c.b, c.a)) return false;
        // a pinned non-zero product excludes zero factors at the interval ends
        const auto& k = d[c.c];
        if (k.lo > 0 || k.hi < 0) {
            for (auto v : {c.a, c.b}) {
                auto& dv = d[v];
                if (dv.lo == 0 && !tighten(d, v, 1, dv.hi)) return false;
                if (d[v].hi == 0 && !tighten(d, v, d[v].lo, -1)) return false;
            }
        }
        // exact division check once both the product and one factor are fixed
        if (k.fixed()) {
            for (auto [v, w] : {std::pair{c.a, c.b}, std::pair{c.b, c.a}}) {
                if (d[w].fixed() && d[w].lo != 0) {
                    if (k.lo % d[w].lo != 0) return false;
                    const i128 q = k.lo / d[w].lo;
                    if (!tighten(d, v, q, q)) return false;
                }
            }
        }
        return true;
    }

    bool propagate_square(Domains& d, const Constraint& c) {
        const auto& x = d[c.a];
        i128 sq_lo;
        i128 sq_hi;
        const i128 l2 = static_cast<i128>(x.lo) * x.lo;
        const i128 h2 = static_cast<i128>(x.hi) * x.hi;
        if (x.lo <= 0 && x.hi >= 0) {
            sq_lo = 0;
            sq_hi = std::max(l2, h2);
        } else {
            sq_lo = std::min(l2, h2);
            sq_hi = std::max(l2, h2);
        }
        if (!tighten(d, c.c, sq_lo, sq_hi)) return false;
        const auto& k = d[c.c];
        const std::int64_t r_hi = isqrt_floor(k.hi);
        if (!tighten(d, c.a, -static_cast<i128>(r_hi), r_hi)) return false;
        if (k.lo > 0) {
            const std::int64_t r_lo = isqrt_ceil(k.lo);
            auto& y = d[c.a];
            if (y.lo > -r_lo && !tighten(d, c.a, r_lo, y.hi)) return false;
            if (d[c.a].hi < r_lo && !tighten(d, c.a, d[c.a].lo, -static_cast<i128>(r_lo))) return false;
        }
        if (d[c.c].fixed()) {
            const std::int64_t r = isqrt_floor(d[c.c].lo);
            if (static_cast<i128>(r) * r != d[c.c].lo) return false;
            auto& y = d[c.a];
            if (y.lo > -r && !tighten(d, c.a, r, r)) return false;
            if (d[c.a].hi < r && !tighten(d, c.a, -static_cast<i128>(r), -static_cast<i128>(r))) return false;
        }
        return true;
    }

    bool propagate_zero_or_one(Domains& d, const Constraint& c) {
        // x_a * (x_b - 1) = 0
        const auto& a = d[c.a];
        const auto& b = d[c.b];
        if (!a.contains(0) && !tighten(d, c.b, 1, 1)) return false;
        if (!d[c.b].contains(1) && !tighten(d, c.a, 0, 0)) return false;
        (void)b;
        return true;
    }

    bool propagate_one(Domains& d, std::uint32_t t) {
        const auto& c = cons_[t];
        switch (c.shape) {
            case Constraint::Shape::Linear: return propagate_linear(d, c);
            case Constraint::Shape::Idempotent: return tighten(d, c.a, 0, 1);
            case Constraint::Shape::Square: return propagate_square(d, c);
            case Constraint::Shape::ZeroOrOne: return propagate_zero_or_one(d, c);
            case Constraint::Shape::Product: return propagate_product(d, c);
        }
        return true;
    }

    bool drain(Domains& d) {
        std::size_t head = 0;
        bool ok = true;
        while (head < queue_.size()) {
            const auto t = queue_[head++];
            in_queue_[t] = 0;
            if (ok && !propagate_one(d, t)) ok = false;
        }
        queue_.clear();
        if (!ok) {
            std::fill(in_queue_.begin(), in_queue_.end(), 0);
        }
        return ok;
    }

    bool propagate_all(Domains& d) {
        for (std::uint32_t t = 0; t < cons_.size(); ++t) {
            in_queue_[t] = 1;
            queue_.push_back(t);
        }
        return drain(d);
    }

    bool apply(Domains& d, const Choice& ch) {
        if (!tighten(d, ch.var_a, ch.val_a, ch.val_a)) {
            queue_.clear();
            std::fill(in_queue_.begin(), in_queue_.end(), 0);
            return false;
        }
        if (ch.pair && !tighten(d, ch.var_b, ch.val_b, ch.val_b)) {
            queue_.clear();
            std::fill(in_queue_.begin(), in_queue_.end(), 0);
            return false;
        }
        return drain(d);
    }

    Status status(const Domains& d, const Constraint& c) const {
        const auto fixed = [&](std::uint32_t v) { return d[v].fixed(); };
        const auto val = [&](std::uint32_t v) -> i128 { return d[v].lo; };
        switch (c.shape) {
            case Constraint::Shape::Linear: {
                i128 sum = 0;
                for (std::uint32_t t = 0; t < c.nvars; ++t) {
                    if (!fixed(c.var[t])) return Status::Open;
                    sum += static_cast<i128>(c.coef[t]) * val(c.var[t]);
                }
                return sum == 0 ? Status::Entailed : Status::Violated;
            }
            case Constraint::Shape::Idempotent:
                if (!fixed(c.a)) return Status::Open;
                return val(c.a) * val(c.a) == val(c.a) ? Status::Entailed : Status::Violated;
            case Constraint::Shape::Square:
                if (!fixed(c.a) || !fixed(c.c)) return Status::Open;
                return val(c.a) * val(c.a) == val(c.c) ? Status::Entailed : Status::Violated;
            case Constraint::Shape::ZeroOrOne:
                if (fixed(c.a) && val(c.a) == 0) return Status::Entailed;
                if (fixed(c.b) && val(c.b) == 1) return Status::Entailed;
                if (fixed(c.a) && fixed(c.b)) return Status::Violated;
                return Status::Open;
            case Constraint::Shape::Product: {
                const bool fa = fixed(c.a);
                const bool fb = fixed(c.b);
                const bool fc = fixed(c.c);
                if (fa && fb && fc) {
                    return val(c.a) * val(c.b) == val(c.c) ? Status::Entailed : Status::Violated;
                }
                if (fc && val(c.c) == 0 && ((fa && val(c.a) == 0) || (fb && val(c.b) == 0))) {
                    return Status::Entailed;
                }
                return Status::Open;
            }
        }
        return Status::Open;
    }

    Status classify(const Domains& d, bool& any_open) {
        any_open = false;
        open_.clear();
        for (std::uint32_t t = 0; t < cons_.size(); ++t) {
            switch (status(d, cons_[t])) {
                case Status::Violated: return Status::Violated;
                case Status::Open:
                    any_open = true;
                    open_.push_back(t);
                    break;
                case Status::Entailed: break;
            }
        }
        return any_open ? Status::Open : Status::Entailed;
    }

    // Requires classify() to have filled open_.
    std::vector<Choice> branch_choices(const Domains& d) {
        std::vector<Choice> out;
        for (auto t : open_) {
            const auto& c = cons_[t];
            if (c.shape != Constraint::Shape::Product) continue;
            const auto& k = d[c.c];
            if (!k.fixed() || k.lo == 0 || d[c.a].fixed() || d[c.b].fixed()) continue;
            divisor_pairs(d, c, out);
            return out;
        }
        std::vector<char> constrained(n_, 0);
        for (auto t : open_) {
            for (auto v : cons_[t].vars()) {
                if (!d[v].fixed()) constrained[v] = 1;
            }
        }
        std::uint32_t pick = n_;
        for (auto v : order_) {
            if (constrained[v]) {
                pick = v;
                break;
            }
        }
        if (pick == n_) return out;  // cannot happen: an open constraint has an open variable
        // a square with a known value admits only the two roots
        for (auto t : open_) {
            const auto& c = cons_[t];
            if (c.shape == Constraint::Shape::Square && c.a == pick && d[c.c].fixed()) {
                const std::int64_t r = isqrt_floor(d[c.c].lo);
                if (static_cast<i128>(r) * r != d[c.c].lo) return out;
                for (i128 v : {-static_cast<i128>(r), static_cast<i128>(r)}) {
                    if (d[pick].contains(v) && !(r == 0 && v < 0 && false)) {
                        if (r == 0 && !out.empty()) break;
                        out.push_back(Choice{pick, static_cast<std::int64_t>(v), 0, 0, false});
                    }
                }
                return out;
            }
        }
        for (std::int64_t v = d[pick].lo;; ++v) {
            out.push_back(Choice{pick, v, 0, 0, false});
            if (v == d[pick].hi) break;
        }
        return out;
    }

    void divisor_pairs(const Domains& d, const Constraint& c, std::vector<Choice>& out) const {
        const i128 k = d[c.c].lo;
        const i128 mag = k < 0 ? -k : k;
        const auto& da = d[c.a];
        const auto& db = d[c.b];
        const auto try_factor = [&](i128 f) {
            if (f == 0 || k % f != 0) return;
            const i128 g = k / f;
            if (da.contains(f) && db.contains(g)) {
                out.push_back(Choice{c.a, static_cast<std::int64_t>(f), c.b, static_cast<std::int64_t>(g), true});
            }
        };
        const i128 span_a = static_cast<i128>(da.hi) - da.lo + 1;
        const i128 root = isqrt_floor(mag);
        if (span_a <= 2 * root + 2) {
            for (i128 f = da.lo; f <= da.hi; ++f) try_factor(f);
            return;
        }
        std::vector<i128> divisors;
        for (i128 f = 1; f <= root; ++f) {
            if (mag % f == 0) {
                divisors.push_back(f);
                if (f * f != mag) divisors.push_back(mag / f);
            }
        }
        std::sort(divisors.begin(), divisors.end());
        for (auto it = divisors.rbegin(); it != divisors.rend(); ++it) try_factor(-*it);
        for (auto f : divisors) try_factor(f);
    }

    void dfs(Domains& d) {
        if (stopped_) return;
        bool open = false;
        if (classify(d, open) == Status::Violated) return;
        if (!open) {
            leaf(d);
            return;
        }
        const std::vector<Choice> choices = branch_choices(d);
        for (const auto& ch : choices) {
            Domains child = d;
            if (apply(child, ch)) dfs(child);
            if (stopped_) return;
        }
    }

    void leaf(const Domains& d) {
        BigInt factor = 1;
        std::int64_t norm = 0;
        std::vector<std::uint32_t> free_vars;
        for (std::uint32_t v = 0; v < n_; ++v) {
            norm = std::max(norm, magnitude(d[v]));
            if (!d[v].fixed()) {
                free_vars.push_back(v);
                const i128 width = static_cast<i128>(d[v].hi) - d[v].lo + 1;
                factor *= from_int128(width);
            }
        }
        count += factor;
        if (!max_norm || norm > *max_norm) max_norm = norm;
        if (mode_ == Mode::Count) return;

        Tuple t(n_);
        for (std::uint32_t v = 0; v < n_; ++v) t[v] = d[v].lo;
        // odometer over free variables, lowest index most significant, so
        // tuples come out in increasing lexicographic order
        for (;;) {
            if (mode_ == Mode::Visit) {
                if (!(*visit_)(std::span<const std::int64_t>(t))) {
                    stopped_ = true;
                    return;
                }
            } else {
                if (heap.size() < limit_) {
                    heap.push(t);
                } else if (t < heap.top()) {
                    heap.pop();
                    heap.push(t);
                } else {
                    return;  // every later tuple of this leaf is larger still
                }
            }
            std::size_t pos = free_vars.size();
            while (pos > 0) {
                const auto v = free_vars[pos - 1];
                if (t[v] < d[v].hi) {
                    ++t[v];
                    break;
                }
                t[v] = d[v].lo;
                --pos;
            }
            if (pos == 0) return;
        }
    }

    std::uint32_t n_;
    std::int64_t box_;
    Mode mode_;
    std::size_t limit_;
    Domains root_;
    bool infeasible_root_ = false;
    bool stopped_ = false;
    std::vector<Constraint> cons_;
    std::vector<std::vector<std::uint32_t>> var_cons_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> queue_;
    std::vector<char> in_queue_;
    std::vector<std::uint32_t> open_;
    const std::function<bool(std::span<const std::int64_t>)>* visit_ = nullptr;
};

void check_box(std::int64_t box) {
    if (box < 0) throw DomainError("box radius must be non-negative");
    if (box > kMaxBox) throw InfeasibleError("box radius above 2^62 is not supported by the search");
}

struct Outcome {
    BigInt count;
    std::optional<std::int64_t> max_norm;
    std::vector<Tuple> smallest;  // sorted
};

void merge_into(Outcome& out, Search& s) {
    out.count += s.count;
    if (s.max_norm && (!out.max_norm || *s.max_norm > *out.max_norm)) out.max_norm = s.max_norm;
    while (!s.heap.empty()) {
        out.smallest.push_back(s.heap.top());
        s.heap.pop();
    }
}

Outcome run_propagating(const EnSystem& s, std::int64_t box, Mode mode, std::size_t limit, unsigned threads) {
    Outcome out;
    Search root(s, box, mode, limit);
    std::vector<Choice> choices;
    const auto state = root.prepare_root(choices);
    if (state == Search::RootState::Infeasible) return out;
    if (state == Search::RootState::Leaf || threads <= 1 || choices.size() < 2) {
        if (state == Search::RootState::Leaf) {
            root.run_leaf(root.root());
        } else {
            for (const auto& ch : choices) root.run_choice(root.root(), ch);
        }
        merge_into(out, root);
    } else {
        const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(choices.size()));
        std::vector<Search> searches;
        searches.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) searches.emplace_back(s, box, mode, limit);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < choices.size(); t += workers) {
                    searches[w].run_choice(root.root(), choices[t]);
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& sr : searches) merge_into(out, sr);
    }
    std::sort(out.smallest.begin(), out.smallest.end());
    if (out.smallest.size() > limit) out.smallest.resize(limit);
    return out;
}

// Plain scan of every point of the box; a reference path with no propagation.
Outcome run_scan(const EnSystem& s, std::int64_t box, std::size_t limit) {
    Outcome out;
    Tuple t(s.n(), -box);
    std::priority_queue<Tuple> heap;
    for (;;) {
        if (check_solution(s, t)) {
            out.count += 1;
            std::int64_t norm = 0;
            for (auto v : t) norm = std::max(norm, v < 0 ? -v : v);
            if (!out.max_norm || norm > *out.max_norm) out.max_norm = norm;
            if (heap.size() < limit) {
                heap.push(t);
            } else if (t < heap.top()) {
                heap.pop();
                heap.push(t);
            }
        }
        std::size_t pos = t.size();
        while (pos > 0) {
            if (t[pos - 1] < box) {
                ++t[pos - 1];
                break;
            }
            t[pos - 1] = -box;
            --pos;
        }
        if (pos == 0) break;
    }
    while (!heap.empty()) {
        out.smallest.push_back(heap.top());
        heap.pop();
    }
    std::sort(out.smallest.begin(), out.smallest.end());
    return out;
}

}  // namespace

unsigned default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

SolutionSet enumerate_box(const EnSystem& s, const SearchOptions& options) {
    check_box(options.box);
    const std::size_t limit = options.limit;
    Outcome out = options.propagate ? run_propagating(s, options.box, Mode::Collect, limit, options.threads)
                                    : run_scan(s, options.box, limit);
    SolutionSet result;
    result.n = s.n();
    result.box = options.box;
    result.count = out.count;
    result.max_norm = out.max_norm;
    result.truncated = out.count > static_cast<unsigned long>(limit);
    result.solutions = std::move(out.smallest);
    return result;
}

BigInt count_solutions(const EnSystem& s, std::int64_t box, unsigned threads) {
    return summarize_box(s, box, threads).count;
}

BoxSummary summarize_box(const EnSystem& s, std::int64_t box, unsigned threads) {
    check_box(box);
    Outcome out = run_propagating(s, box, Mode::Count, 0, threads);
    return {out.count, out.max_norm};
}

void for_each_solution(const EnSystem& s, std::int64_t box,
                       const std::function<bool(std::span<const std::int64_t>)>& visit) {
    check_box(box);
    Search search(s, box, Mode::Visit, 0);
    search.set_visitor(&visit);
    search.run_from_root();
}

std::vector<Tuple> enumerate_shell(const EnSystem& s, std::int64_t alpha, unsigned /*threads*/) {
    std::vector<Tuple> out;
    for_each_solution(s, alpha, [&](std::span<const std::int64_t> t) {
        std::int64_t norm = 0;
        for (auto v : t) norm = std::max(norm, v < 0 ? -v : v);
        if (norm == alpha) out.emplace_back(t.begin(), t.end());
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dioph::ensys
