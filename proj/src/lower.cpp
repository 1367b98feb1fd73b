#include "dioph/lower.hpp"

#include <algorithm>
#include <map>

#include "dioph/error.hpp"

namespace dioph::lower {

using ensys::EnSystem;
using ensys::SystemBuilder;
using poly::Exponents;
using poly::Polynomial;

std::vector<BigInt> LoweringMap::extend(std::span<const BigInt> point) const {
    std::vector<BigInt> out;
    out.reserve(meaning.size());
    for (const auto& m : meaning) out.push_back(m.evaluate(point));
    return out;
}

std::vector<BigInt> LoweringMap::extend(std::span<const std::int64_t> point) const {
    std::vector<BigInt> out;
    out.reserve(meaning.size());
    for (const auto& m : meaning) out.push_back(m.evaluate(point));
    return out;
}

TowerExpr card_T(const Polynomial& d) {
    if (d.is_zero()) throw DomainError("card_T is undefined for the zero polynomial");
    const auto stats = poly::coeff_stats(d);
    BigInt slots = 1;
    for (auto deg : stats.degrees) slots *= deg + 1;
    return TowerExpr::pow(TowerExpr::lit(2 * stats.max_abs_coefficient + 1), TowerExpr::lit(slots));
}

// ---------------------------------------------------------------------------
// Canonical construction over the whole family T.

namespace {

class Family {
public:
    Family(const std::vector<std::uint32_t>& degrees, std::int64_t m) : degrees_(degrees), m_(m) {
        strides_.resize(degrees.size());
        std::size_t k = 1;
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            strides_[i] = k;
            k *= degrees[i] + 1;
        }
        slots_ = k;
    }

    std::size_t slots() const { return slots_; }

    std::size_t slot_of(const Exponents& e) const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * strides_[i];
        return s;
    }

    Exponents exponents_of(std::size_t slot) const {
        Exponents e(degrees_.size());
        for (std::size_t i = 0; i < degrees_.size(); ++i) {
            e[i] = static_cast<std::uint32_t>((slot / strides_[i]) % (degrees_[i] + 1));
        }
        return e;
    }

    // Element id <-> coefficient vector; digit s is coefficient of slot s plus M.
    std::vector<std::int64_t> coefficients(std::uint64_t id) const {
        std::vector<std::int64_t> c(slots_);
        const auto base = static_cast<std::uint64_t>(2 * m_ + 1);
        for (std::size_t s = 0; s < slots_; ++s) {
            c[s] = static_cast<std::int64_t>(id % base) - m_;
            id /= base;
        }
        return c;
    }

    std::optional<std::uint64_t> id_of(const std::vector<std::int64_t>& c) const {
        const auto base = static_cast<std::uint64_t>(2 * m_ + 1);
        std::uint64_t id = 0;
        for (std::size_t s = slots_; s-- > 0;) {
            if (c[s] < -m_ || c[s] > m_) return std::nullopt;
            id = id * base + static_cast<std::uint64_t>(c[s] + m_);
        }
        return id;
    }

    Polynomial polynomial(const std::vector<std::int64_t>& c) const {
        Polynomial p(degrees_.size());
        for (std::size_t s = 0; s < slots_; ++s) {
            if (c[s] != 0) p.add_term(exponents_of(s), BigInt(static_cast<long>(c[s])));
        }
        return p;
    }

    // Product within the degree box, or nullopt when a degree overflows.
    std::optional<std::vector<std::int64_t>> product(const std::vector<std::int64_t>& a,
                                                     const std::vector<std::int64_t>& b) const {
        std::vector<std::int64_t> out(slots_, 0);
        for (std::size_t s = 0; s < slots_; ++s) {
            if (a[s] == 0) continue;
            const auto es = exponents_of(s);
            for (std::size_t t = 0; t < slots_; ++t) {
                if (b[t] == 0) continue;
                const auto et = exponents_of(t);
                std::size_t slot = 0;
                for (std::size_t i = 0; i < es.size(); ++i) {
                    const auto e = es[i] + et[i];
                    if (e > degrees_[i]) return std::nullopt;
                    slot += e * strides_[i];
                }
                out[slot] += a[s] * b[t];
            }
        }
        return out;
    }

private:
    std::vector<std::uint32_t> degrees_;
    std::int64_t m_;
    std::vector<std::size_t> strides_;
    std::size_t slots_ = 1;
};

}  // namespace

LoweringMap lower_canonical(const Polynomial& d, std::uint64_t cap) {
    const TowerExpr card = card_T(d);
    const auto exact = card.materialize(64);
    if (!exact || *exact > BigInt(static_cast<unsigned long>(cap))) {
        throw InfeasibleError("canonical lowering materializes all of T, but card(T) = " + card.to_string() +
                              " exceeds the cap of " + std::to_string(cap));
    }
    const std::uint64_t size = exact->get_ui();
    const auto stats = poly::coeff_stats(d);
    const std::int64_t m = stats.max_abs_coefficient.get_si();
    const std::size_t p = d.num_vars();
    const Family fam(stats.degrees, m);

    std::vector<std::vector<std::int64_t>> elems(size);
    for (std::uint64_t id = 0; id < size; ++id) elems[id] = fam.coefficients(id);

    // x_1..x_p keep their indices; the rest of T follows in id order
    std::vector<std::uint32_t> var_of(size, 0);
    std::vector<Polynomial> meaning;
    for (std::size_t i = 0; i < p; ++i) meaning.push_back(Polynomial::variable(p, i));
    for (std::size_t i = 0; i < p; ++i) {
        if (stats.degrees[i] == 0) continue;  // x_i lies outside T; it stays a free variable
        std::vector<std::int64_t> c(fam.slots(), 0);
        Exponents e(p, 0);
        e[i] = 1;
        c[fam.slot_of(e)] = 1;
        var_of[*fam.id_of(c)] = static_cast<std::uint32_t>(i + 1);
    }
    std::uint32_t next = static_cast<std::uint32_t>(p);
    for (std::uint64_t id = 0; id < size; ++id) {
        if (var_of[id] != 0) continue;
        var_of[id] = ++next;
        meaning.push_back(fam.polynomial(elems[id]));
    }

    SystemBuilder b(next);
    {
        std::vector<std::int64_t> one(fam.slots(), 0);
        one[0] = 1;
        if (const auto id = fam.id_of(one)) b.one(var_of[*id]);
    }
    std::vector<std::int64_t> sum(fam.slots());
    for (std::uint64_t a = 0; a < size; ++a) {
        for (std::uint64_t c = a; c < size; ++c) {
            for (std::size_t s = 0; s < fam.slots(); ++s) sum[s] = elems[a][s] + elems[c][s];
            if (const auto id = fam.id_of(sum)) b.add(var_of[a], var_of[c], var_of[*id]);
            if (const auto prod = fam.product(elems[a], elems[c])) {
                if (const auto id = fam.id_of(*prod)) b.mul(var_of[a], var_of[c], var_of[*id]);
            }
        }
    }
    std::vector<std::int64_t> dc(fam.slots(), 0);
    for (const auto& [exps, coef] : d.terms()) dc[fam.slot_of(exps)] = coef.get_si();
    const std::uint32_t q = var_of[*fam.id_of(dc)];
    b.add(q, q, q);

    return LoweringMap{poly::PolyEquation(d, Polynomial(p)), b.build(), std::move(meaning), q};
}

// ---------------------------------------------------------------------------
// Compact lowering.

namespace {

class Compact {
public:
    explicit Compact(std::size_t p) : p_(p), b_(static_cast<std::uint32_t>(p)) {
        for (std::size_t i = 0; i < p; ++i) {
            meaning_.push_back(Polynomial::variable(p, i));
            Exponents e(p, 0);
            e[i] = 1;
            mono_[e] = static_cast<std::uint32_t>(i + 1);
        }
    }

    // Variable equal to `side`; the last operation writes into `target` when given.
    std::uint32_t side(const Polynomial& s, std::optional<std::uint32_t> target) {
        Polynomial pos(p_);
        Polynomial neg(p_);
        for (const auto& [e, c] : s.terms()) {
            if (c > 0) {
                pos.add_term(e, c);
            } else {
                neg.add_term(e, -c);
            }
        }
        if (pos.is_zero() && neg.is_zero()) {
            if (target) {
                b_.add(*target, *target, *target);
                return *target;
            }
            return zero();
        }
        if (neg.is_zero()) return sum(pos, target);
        const std::uint32_t pv = pos.is_zero() ? 0 : sum(pos, std::nullopt);
        const std::uint32_t nv = sum(neg, std::nullopt);
        const std::uint32_t out = target ? *target : fresh(s);
        if (pv != 0) {
            b_.add(nv, out, pv);
        } else {
            b_.add(out, nv, zero());
        }
        return out;
    }

    SystemBuilder& builder() { return b_; }
    std::vector<Polynomial>& meaning() { return meaning_; }

private:
    std::uint32_t fresh(const Polynomial& m) {
        meaning_.push_back(m);
        return b_.fresh();
    }

    std::uint32_t zero() {
        if (!zero_) {
            zero_ = fresh(Polynomial(p_));
            b_.add(*zero_, *zero_, *zero_);
        }
        return *zero_;
    }

    // Makes `target` equal to the existing variable v (no-op when they coincide).
    std::uint32_t equate(std::uint32_t v, std::optional<std::uint32_t> target) {
        if (!target || *target == v) return v;
        b_.add(v, zero(), *target);
        return *target;
    }

    // Result slot for a new operation: the target when this is the last step.
    std::uint32_t slot(const Polynomial& m, std::optional<std::uint32_t>& target, bool last) {
        if (last && target) {
            const auto t = *target;
            target.reset();
            return t;
        }
        return fresh(m);
    }

    Polynomial mono_poly(const Exponents& e) const { return Polynomial::monomial(e, 1); }

    std::uint32_t one() {
        const Exponents e(p_, 0);
        if (auto it = mono_.find(e); it != mono_.end()) return it->second;
        const auto v = fresh(Polynomial::constant(p_, 1));
        b_.one(v);
        mono_[e] = v;
        return v;
    }

    // x^e by left-to-right square-and-multiply per variable, then products of
    // the per-variable powers in index order; every partial result is shared.
    std::uint32_t monomial(const Exponents& e, std::optional<std::uint32_t> target) {
        if (std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; })) {
            if (!target || mono_.count(e)) return equate(one(), target);
            const auto v = *target;
            b_.one(v);
            mono_[e] = v;
            return v;
        }
        if (auto it = mono_.find(e); it != mono_.end()) return equate(it->second, target);

        struct Step {
            Exponents result;
            bool square;
            Exponents other;
        };
        std::vector<Step> steps;
        Exponents acc(p_, 0);
        for (std::size_t i = 0; i < p_; ++i) {
            if (e[i] == 0) continue;
            Exponents piece(p_, 0);
            piece[i] = 1;
            const int top = 31 - __builtin_clz(e[i]);
            for (int bit = top - 1; bit >= 0; --bit) {
                Exponents sq = piece;
                sq[i] *= 2;
                steps.push_back({sq, true, piece});
                piece = sq;
                if ((e[i] >> bit) & 1U) {
                    Exponents next = piece;
                    next[i] += 1;
                    Exponents xi(p_, 0);
                    xi[i] = 1;
                    steps.push_back({next, false, xi});
                    piece = next;
                }
            }
            if (std::any_of(acc.begin(), acc.end(), [](auto x) { return x != 0; })) {
                Exponents prod = acc;
                for (std::size_t t = 0; t < p_; ++t) prod[t] += piece[t];
                steps.push_back({prod, false, acc});
                acc = prod;
            } else {
                acc = piece;
            }
        }
        // replay; each step multiplies `other` by result - other, both already built
        std::uint32_t last_var = 0;
        for (std::size_t t = 0; t < steps.size(); ++t) {
            const auto& st = steps[t];
            if (auto it = mono_.find(st.result); it != mono_.end()) {
                last_var = it->second;
                continue;
            }
            const bool last = t + 1 == steps.size();
            Exponents factor(p_);
            for (std::size_t i = 0; i < p_; ++i) factor[i] = st.result[i] - st.other[i];
            const auto a = mono_.at(st.other);
            const auto bvar = mono_.at(factor);
            const auto out = slot(mono_poly(st.result), target, last);
            b_.mul(a, bvar, out);
            mono_[st.result] = out;
            last_var = out;
        }
        return equate(last_var, target);
    }

    // c * x^e by doubling and adding, shared per (e, c).
    std::uint32_t term(const Exponents& e, const BigInt& c, std::optional<std::uint32_t> target) {
        if (c == 1) return monomial(e, target);
        if (auto it = scaled_.find({e, c}); it != scaled_.end()) return equate(it->second, target);
        const auto base = monomial(e, std::nullopt);
        const std::size_t bits = bit_length(c);
        std::uint32_t acc = base;
        BigInt k = 1;
        for (std::size_t bit = bits - 1; bit-- > 0;) {
            const bool set = mpz_tstbit(c.get_mpz_t(), bit) != 0;
            {
                const BigInt k2 = 2 * k;
                if (auto it = scaled_.find({e, k2}); it != scaled_.end()) {
                    acc = it->second;
                } else {
                    const auto out = slot(Polynomial::monomial(e, k2), target, !set && bit == 0);
                    b_.add(acc, acc, out);
                    scaled_[{e, k2}] = out;
                    acc = out;
                }
                k = k2;
            }
            if (set) {
                const BigInt k1 = k + 1;
                if (auto it = scaled_.find({e, k1}); it != scaled_.end()) {
                    acc = it->second;
                } else {
                    const auto out = slot(Polynomial::monomial(e, k1), target, bit == 0);
                    b_.add(acc, base, out);
                    scaled_[{e, k1}] = out;
                    acc = out;
                }
                k = k1;
            }
        }
        return equate(acc, target);
    }

    // Sum of positive-coefficient terms, folded left in canonical term order.
    std::uint32_t sum(const Polynomial& s, std::optional<std::uint32_t> target) {
        const auto& terms = s.terms();
        if (terms.size() == 1) return term(terms.begin()->first, terms.begin()->second, target);
        std::vector<std::uint32_t> vars;
        for (const auto& [e, c] : terms) vars.push_back(term(e, c, std::nullopt));
        Polynomial partial = Polynomial::monomial(terms.begin()->first, terms.begin()->second);
        std::uint32_t acc = vars[0];
        auto it = std::next(terms.begin());
        for (std::size_t t = 1; t < vars.size(); ++t, ++it) {
            partial.add_term(it->first, it->second);
            const auto out = slot(partial, target, t + 1 == vars.size());
            b_.add(acc, vars[t], out);
            acc = out;
        }
        return acc;
    }

    std::size_t p_;
    SystemBuilder b_;
    std::vector<Polynomial> meaning_;
    std::map<Exponents, std::uint32_t> mono_;
    std::map<std::pair<Exponents, BigInt>, std::uint32_t> scaled_;
    std::optional<std::uint32_t> zero_;
};

}  // namespace

LoweringMap lower_compact(const poly::PolyEquation& eq) {
    const std::size_t p = eq.num_vars();
    Compact c(p);
    if (!eq.normalized.is_zero()) {
        const auto lhs = c.side(eq.lhs, std::nullopt);
        c.side(eq.rhs, lhs);
    }
    auto& b = c.builder();
    return LoweringMap{eq, b.build(), std::move(c.meaning()), std::nullopt};
}

nlohmann::ordered_json to_json(const LoweringMap& map) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meaning = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < map.meaning.size(); ++i) meaning[std::to_string(i + 1)] = map.meaning[i].to_string();
    j["meaning"] = std::move(meaning);
    j["q"] = map.result_var ? nlohmann::ordered_json(*map.result_var) : nlohmann::ordered_json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// Gadgets.

std::uint32_t gadget_value_chain(SystemBuilder& b, std::uint32_t n) {
    if (n == 0) throw DomainError("value chain needs n >= 1");
    const auto t1 = b.fresh();
    b.one(t1);
    std::uint32_t prev = t1;
    for (std::uint32_t k = 2; k <= n; ++k) {
        const auto t = b.fresh();
        b.add(prev, t1, t);
        prev = t;
    }
    return prev;
}

Fragment gadget_value_chain(std::uint32_t n) {
    SystemBuilder b;
    const auto out = gadget_value_chain(b, n);
    return {b.build(), out};
}

void gadget_nonneg(SystemBuilder& b, std::uint32_t target) {
    const auto u = b.fresh();
    const auto v = b.fresh();
    const auto a = b.fresh();
    const auto bb = b.fresh();
    const auto c = b.fresh();
    const auto d = b.fresh();
    const auto al = b.fresh();
    const auto be = b.fresh();
    const auto ga = b.fresh();
    const auto de = b.fresh();
    b.add(u, v, target);
    b.add(a, bb, u);
    b.add(c, d, v);
    b.mul(al, al, a);
    b.mul(be, be, bb);
    b.mul(ga, ga, c);
    b.mul(de, de, d);
}

Fragment gadget_nonneg() {
    SystemBuilder b(1);
    gadget_nonneg(b, 1);
    return {b.build(), 1};
}

FiniteFoldAssembly assemble_finite_fold(std::uint32_t n, const EnSystem& delta) {
    const std::uint32_t m = delta.n();
    if (m < 3) throw DomainError("the finite-fold system needs m >= 3 variables");
    SystemBuilder b;
    const auto x1 = gadget_value_chain(b, n);
    // delta's x_1 is the chain output, x_2..x_m follow it
    const auto map = [&](std::uint32_t i) { return i == 1 ? x1 : x1 + i - 1; };
    b.reserve_vars(x1 + m - 1);
    for (const auto& eq : delta.equations()) {
        switch (eq.kind) {
            case ensys::EqKind::One: b.one(map(eq.i)); break;
            case ensys::EqKind::Add: b.add(map(eq.i), map(eq.j), map(eq.k)); break;
            case ensys::EqKind::Mul: b.mul(map(eq.i), map(eq.j), map(eq.k)); break;
        }
    }
    for (std::uint32_t i = 2; i <= m; ++i) gadget_nonneg(b, map(i));
    return {b.build(), x1, map(2)};
}

}  // namespace dioph::lower
