#include "dioph/ensys.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dioph/error.hpp"

namespace dioph::ensys {

EnEquation EnEquation::one(std::uint32_t i) { return {EqKind::One, i, 0, 0}; }

EnEquation EnEquation::add(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return {EqKind::Add, std::min(i, j), std::max(i, j), k};
}

EnEquation EnEquation::mul(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return {EqKind::Mul, std::min(i, j), std::max(i, j), k};
}

std::uint32_t EnEquation::max_index() const noexcept { return std::max({i, j, k}); }

bool EnEquation::holds(std::span<const std::int64_t> x) const {
    const auto at = [&](std::uint32_t idx) -> __int128 { return x[idx - 1]; };
    switch (kind) {
        case EqKind::One: return at(i) == 1;
        case EqKind::Add: return at(i) + at(j) == at(k);
        case EqKind::Mul: return at(i) * at(j) == at(k);
    }
    return false;
}

bool EnEquation::holds(std::span<const BigInt> x) const {
    switch (kind) {
        case EqKind::One: return x[i - 1] == 1;
        case EqKind::Add: return x[i - 1] + x[j - 1] == x[k - 1];
        case EqKind::Mul: return x[i - 1] * x[j - 1] == x[k - 1];
    }
    return false;
}

std::string EnEquation::to_string() const {
    const auto v = [](std::uint32_t idx) { return "x" + std::to_string(idx); };
    switch (kind) {
        case EqKind::One: return v(i) + "=1";
        case EqKind::Add: return v(i) + "+" + v(j) + "=" + v(k);
        case EqKind::Mul: return v(i) + "*" + v(j) + "=" + v(k);
    }
    return {};
}

EnSystem::EnSystem(std::uint32_t n) : n_(n) {
    if (n == 0) throw DomainError("a system needs n >= 1");
}

EnSystem::EnSystem(std::uint32_t n, std::vector<EnEquation> equations) : EnSystem(n) {
    for (auto& eq : equations) {
        if (eq.kind != EqKind::One && eq.i > eq.j) std::swap(eq.i, eq.j);
        check_index(eq);
    }
    std::sort(equations.begin(), equations.end());
    equations.erase(std::unique(equations.begin(), equations.end()), equations.end());
    eqs_ = std::move(equations);
}

void EnSystem::check_index(const EnEquation& eq) const {
    const bool bad_one = eq.kind == EqKind::One && (eq.i == 0 || eq.j != 0 || eq.k != 0);
    const bool bad_other = eq.kind != EqKind::One && (eq.i == 0 || eq.j == 0 || eq.k == 0);
    if (bad_one || bad_other || eq.max_index() > n_) {
        throw DomainError("equation " + eq.to_string() + " has an index outside 1.." + std::to_string(n_));
    }
}

bool EnSystem::insert(const EnEquation& eq_in) {
    EnEquation eq = eq_in;
    if (eq.kind != EqKind::One && eq.i > eq.j) std::swap(eq.i, eq.j);
    check_index(eq);
    auto it = std::lower_bound(eqs_.begin(), eqs_.end(), eq);
    if (it != eqs_.end() && *it == eq) return false;
    eqs_.insert(it, eq);
    return true;
}

bool EnSystem::contains(const EnEquation& eq) const {
    return std::binary_search(eqs_.begin(), eqs_.end(), eq);
}

std::string EnSystem::to_string() const {
    std::string out = "n=" + std::to_string(n_) + " {";
    for (std::size_t t = 0; t < eqs_.size(); ++t) {
        if (t != 0) out += ", ";
        out += eqs_[t].to_string();
    }
    return out + "}";
}

EnSystem SystemBuilder::build() const { return EnSystem(std::max<std::uint32_t>(n_, 1), eqs_); }

bool check_solution(const EnSystem& s, std::span<const std::int64_t> x) {
    if (x.size() != s.n()) {
        throw DomainError("check_solution: tuple has " + std::to_string(x.size()) + " entries, system has n=" +
                          std::to_string(s.n()));
    }
    return std::all_of(s.equations().begin(), s.equations().end(), [&](const auto& eq) { return eq.holds(x); });
}

bool check_solution(const EnSystem& s, std::span<const BigInt> x) {
    if (x.size() != s.n()) {
        throw DomainError("check_solution: tuple has " + std::to_string(x.size()) + " entries, system has n=" +
                          std::to_string(s.n()));
    }
    return std::all_of(s.equations().begin(), s.equations().end(), [&](const auto& eq) { return eq.holds(x); });
}

std::vector<EnEquation> all_equations(std::uint32_t n) {
    std::vector<EnEquation> out;
    for (std::uint32_t i = 1; i <= n; ++i) out.push_back(EnEquation::one(i));
    for (auto kind : {EqKind::Add, EqKind::Mul}) {
        for (std::uint32_t i = 1; i <= n; ++i) {
            for (std::uint32_t j = i; j <= n; ++j) {
                for (std::uint32_t k = 1; k <= n; ++k) out.push_back({kind, i, j, k});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t en_size(std::uint32_t n) {
    const std::size_t pairs = static_cast<std::size_t>(n) * (n + 1) / 2;
    return n + 2 * pairs * n;
}

EnSystem induced_system(std::span<const std::int64_t> x) {
    if (x.empty()) throw DomainError("induced_system needs a non-empty tuple");
    const auto n = static_cast<std::uint32_t>(x.size());
    std::vector<EnEquation> eqs;
    for (const auto& eq : all_equations(n)) {
        if (eq.holds(x)) eqs.push_back(eq);
    }
    return EnSystem(n, std::move(eqs));
}

EnSystem relabel(const EnSystem& s, std::span<const std::uint32_t> permutation) {
    if (permutation.size() != s.n()) throw DomainError("relabel: permutation size mismatch");
    std::vector<EnEquation> eqs;
    eqs.reserve(s.size());
    const auto p = [&](std::uint32_t idx) { return idx == 0 ? 0 : permutation[idx - 1]; };
    for (const auto& eq : s.equations()) {
        switch (eq.kind) {
            case EqKind::One: eqs.push_back(EnEquation::one(p(eq.i))); break;
            case EqKind::Add: eqs.push_back(EnEquation::add(p(eq.i), p(eq.j), p(eq.k))); break;
            case EqKind::Mul: eqs.push_back(EnEquation::mul(p(eq.i), p(eq.j), p(eq.k))); break;
        }
    }
    return EnSystem(s.n(), std::move(eqs));
}

std::vector<std::int64_t> permute_tuple(std::span<const std::int64_t> x, std::span<const std::uint32_t> permutation) {
    if (x.size() != permutation.size()) throw DomainError("permute_tuple: size mismatch");
    std::vector<std::int64_t> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[permutation[i] - 1] = x[i];
    return y;
}

CanonicalForm canonical_form(const EnSystem& s) {
    if (s.n() > kMaxCanonicalN) {
        throw InfeasibleError("canonical_form enumerates n! relabelings; n=" + std::to_string(s.n()) +
                              " exceeds the limit of " + std::to_string(kMaxCanonicalN));
    }
    std::vector<std::uint32_t> perm(s.n());
    std::iota(perm.begin(), perm.end(), 1U);
    CanonicalForm best{s, perm};
    do {
        EnSystem candidate = relabel(s, perm);
        if (candidate.equations() < best.system.equations()) {
            best = {std::move(candidate), perm};
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace {

const char* kind_name(EqKind kind) {
    switch (kind) {
        case EqKind::One: return "one";
        case EqKind::Add: return "add";
        case EqKind::Mul: return "mul";
    }
    return "";
}

}  // namespace

nlohmann::ordered_json to_json(const EnSystem& s) {
    nlohmann::ordered_json j;
    j["n"] = s.n();
    auto eqs = nlohmann::ordered_json::array();
    for (const auto& eq : s.equations()) {
        if (eq.kind == EqKind::One) {
            eqs.push_back({kind_name(eq.kind), eq.i});
        } else {
            eqs.push_back({kind_name(eq.kind), eq.i, eq.j, eq.k});
        }
    }
    j["eqs"] = std::move(eqs);
    return j;
}

EnSystem system_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("eqs")) {
        throw ParseError("system file needs keys \"n\" and \"eqs\"", 0);
    }
    const auto n = j.at("n").get<std::int64_t>();
    if (n < 1 || n > 1'000'000) throw ParseError("system \"n\" out of range", 0);
    std::vector<EnEquation> eqs;
    std::size_t position = 0;
    for (const auto& item : j.at("eqs")) {
        if (!item.is_array() || item.empty() || !item[0].is_string()) {
            throw ParseError("malformed equation entry", position);
        }
        const auto kind = item[0].get<std::string>();
        const auto idx = [&](std::size_t t) {
            const auto v = item.at(t).get<std::int64_t>();
            if (v < 1 || v > n) throw ParseError("equation index out of range", position);
            return static_cast<std::uint32_t>(v);
        };
        if (kind == "one" && item.size() == 2) {
            eqs.push_back(EnEquation::one(idx(1)));
        } else if (kind == "add" && item.size() == 4) {
            eqs.push_back(EnEquation::add(idx(1), idx(2), idx(3)));
        } else if (kind == "mul" && item.size() == 4) {
            eqs.push_back(EnEquation::mul(idx(1), idx(2), idx(3)));
        } else {
            throw ParseError("unknown equation form '" + kind + "'", position);
        }
        ++position;
    }
    return EnSystem(static_cast<std::uint32_t>(n), std::move(eqs));
}

std::string serialize(const EnSystem& s) { return to_json(s).dump(); }

EnSystem parse_system(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    return system_from_json(j);
}

EnSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open system file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_system(buffer.str());
}

}  // namespace dioph::ensys
