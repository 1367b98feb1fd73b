#include "dioph/bounds.hpp"

#include <map>

#include "dioph/error.hpp"
#include "dioph/lower.hpp"
#include "dioph/transforms.hpp"

namespace dioph::bounds {

TowerBound conjecture_bound(std::size_t n) { return TowerBound::conjecture(n); }

TowerBound bound_D(const poly::Polynomial& d) {
    if (d.is_zero()) throw DomainError("bound(D) is undefined for the zero polynomial");
    return TowerBound(lower::card_T(d) - TowerExpr::lit(1));
}

TowerBound bound_nonneg(const poly::Polynomial& d) {
    if (d.is_zero()) throw DomainError("bound(D) is undefined for the zero polynomial");
    return bound_D(transforms::hat(d));
}

RationalPipeline rational_pipeline(const poly::Polynomial& d) {
    if (d.is_zero()) throw DomainError("bound(D) is undefined for the zero polynomial");
    const auto lowered = lower::lower_compact(poly::PolyEquation(d, poly::Polynomial(d.num_vars())));
    const auto eqs = transforms::rationalize(lowered.target);
    std::vector<poly::Polynomial> normalized;
    normalized.reserve(eqs.size());
    for (const auto& e : eqs) normalized.push_back(e.normalized);
    RationalPipeline out;
    out.lowered_vars = lowered.target.n();
    out.rational_vars = transforms::kSlots * lowered.target.n();
    out.rational_equations = eqs.size();
    out.combined = poly::sum_of_squares(normalized).value;
    out.bound = bound_D(out.combined);
    return out;
}

TowerBound bound_rational(const poly::Polynomial& d) { return rational_pipeline(d).bound; }

BigInt height(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("height: zero denominator");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g == 0) g = 1;
    const BigInt y = abs(num) / g;
    const BigInt z = abs(den) / g;
    return y > z ? y : z;
}

namespace {

TowerExpr table_lookup(const TowerExpr& n, std::string_view spec) {
    std::map<BigInt, BigInt> table;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const auto comma = spec.find(',', pos);
        const auto item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw DomainError("psi table entries look like n=value");
        table[parse_bigint(item.substr(0, eq))] = parse_bigint(item.substr(eq + 1));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    const auto key = n.materialize(64);
    if (!key) throw DomainError("psi table: n is too large to look up");
    const auto it = table.find(*key);
    if (it == table.end()) throw DomainError("psi table has no entry for n=" + key->get_str());
    return TowerExpr::lit(it->second);
}

}  // namespace

TowerExpr general_psi_bound(const TowerExpr& n, std::string_view psi) {
    if (psi == "default") {
        const auto one = TowerExpr::lit(1);
        const auto two = TowerExpr::lit(2);
        if (n.compare(one) == std::partial_ordering::less) throw DomainError("psi needs n >= 1");
        return TowerExpr::pow(two, TowerExpr::pow(two, n - one));
    }
    constexpr std::string_view kTable = "table:";
    if (psi.substr(0, kTable.size()) == kTable) return table_lookup(n, psi.substr(kTable.size()));
    try {
        return TowerExpr::parse(psi, n);
    } catch (const ParseError& e) {
        throw DomainError("unknown psi descriptor '" + std::string(psi) + "': " + e.what());
    }
}

TowerExpr general_psi_bound(std::size_t n, std::string_view psi) {
    return general_psi_bound(TowerExpr::lit(static_cast<unsigned long>(n)), psi);
}

TowerExpr psi_bound_D(const poly::Polynomial& d, std::string_view psi) {
    return general_psi_bound(lower::card_T(d), psi);
}

}  // namespace dioph::bounds
