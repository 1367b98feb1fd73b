#include "dioph/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "dioph/error.hpp"

namespace dioph::poly {

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
    std::uint64_t da = 0;
    std::uint64_t db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
    if (num_vars == 0) {
        throw DomainError("a polynomial needs at least one variable slot");
    }
}

Polynomial Polynomial::constant(std::size_t num_vars, const BigInt& value) {
    Polynomial p(num_vars);
    p.add_term(Exponents(num_vars, 0), value);
    return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars) {
        throw DomainError("variable index out of range");
    }
    Polynomial p(num_vars);
    Exponents e(num_vars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

Polynomial Polynomial::monomial(const Exponents& exponents, const BigInt& coefficient) {
    Polynomial p(exponents.size());
    p.add_term(exponents, coefficient);
    return p;
}

void Polynomial::add_term(const Exponents& exponents, const BigInt& coefficient) {
    if (exponents.size() != num_vars_) {
        throw DomainError("exponent vector length does not match num_vars");
    }
    if (coefficient == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

BigInt Polynomial::constant_term() const {
    auto it = terms_.find(Exponents(num_vars_, 0));
    return it == terms_.end() ? BigInt(0) : it->second;
}

std::uint32_t Polynomial::degree_in(std::size_t index) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
        d = std::max(d, e.at(index));
    }
    return d;
}

std::uint32_t Polynomial::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
        std::uint32_t s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

BigInt Polynomial::evaluate(std::span<const BigInt> point) const {
    if (point.size() != num_vars_) {
        throw DomainError("evaluate: point has " + std::to_string(point.size()) + " coordinates, expected " +
                          std::to_string(num_vars_));
    }
    BigInt total = 0;
    BigInt term;
    BigInt power;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < num_vars_; ++i) {
            if (e[i] != 0) {
                mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), e[i]);
                term *= power;
            }
        }
        total += term;
    }
    return total;
}

BigInt Polynomial::evaluate(std::span<const std::int64_t> point) const {
    if (point.size() != num_vars_) {
        throw DomainError("evaluate: point has " + std::to_string(point.size()) + " coordinates, expected " +
                          std::to_string(num_vars_));
    }
    std::vector<BigInt> big;
    big.reserve(point.size());
    for (auto v : point) big.emplace_back(static_cast<long>(v));
    return evaluate(std::span<const BigInt>(big));
}

std::optional<__int128> Polynomial::evaluate_small(std::span<const std::int64_t> point) const {
    if (point.size() != num_vars_) {
        throw DomainError("evaluate: arity mismatch");
    }
    __int128 total = 0;
    for (const auto& [e, c] : terms_) {
        auto c64 = to_int64(c);
        if (!c64) {
            return std::nullopt;
        }
        __int128 term = *c64;
        for (std::size_t i = 0; i < num_vars_; ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) {
                if (__builtin_mul_overflow(term, static_cast<__int128>(point[i]), &term)) {
                    return std::nullopt;
                }
            }
        }
        if (__builtin_add_overflow(total, term, &total)) {
            return std::nullopt;
        }
    }
    return total;
}

Polynomial Polynomial::remap(std::size_t new_num_vars, std::span<const std::size_t> mapping) const {
    if (mapping.size() != num_vars_) {
        throw DomainError("remap: mapping size does not match num_vars");
    }
    Polynomial out(new_num_vars);
    for (const auto& [e, c] : terms_) {
        Exponents f(new_num_vars, 0);
        for (std::size_t i = 0; i < num_vars_; ++i) {
            if (mapping[i] >= new_num_vars) {
                throw DomainError("remap: target index out of range");
            }
            f[mapping[i]] += e[i];
        }
        out.add_term(f, c);
    }
    return out;
}

Polynomial Polynomial::widen(std::size_t new_num_vars) const {
    if (new_num_vars < num_vars_) {
        throw DomainError("widen: cannot drop variables");
    }
    std::vector<std::size_t> mapping(num_vars_);
    for (std::size_t i = 0; i < num_vars_; ++i) mapping[i] = i;
    return remap(new_num_vars, mapping);
}

Polynomial Polynomial::pow(std::uint32_t exponent) const {
    Polynomial result = constant(num_vars_, 1);
    Polynomial base = *this;
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent != 0) base *= base;
    }
    return result;
}

namespace {

std::string monomial_text(const Exponents& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += 'x' + std::to_string(i + 1);
        if (e[i] > 1) out += '^' + std::to_string(e[i]);
    }
    return out;
}

}  // namespace

std::string Polynomial::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool negative = c < 0;
        BigInt mag = abs(c);
        std::string mono = monomial_text(e);
        std::string body;
        if (mono.empty()) {
            body = mag.get_str();
        } else if (mag == 1) {
            body = mono;
        } else {
            body = mag.get_str() + "*" + mono;
        }
        if (first) {
            out += negative ? "-" + body : body;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
        first = false;
    }
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

void Polynomial::check_arity(const Polynomial& other) const {
    if (other.num_vars_ != num_vars_) {
        throw DomainError("polynomial arity mismatch: " + std::to_string(num_vars_) + " vs " +
                          std::to_string(other.num_vars_));
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    check_arity(other);
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    check_arity(other);
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
    check_arity(other);
    Polynomial out(num_vars_);
    Exponents f(num_vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            for (std::size_t i = 0; i < num_vars_; ++i) f[i] = ea[i] + eb[i];
            out.add_term(f, ca * cb);
        }
    }
    *this = std::move(out);
    return *this;
}

PolyEquation::PolyEquation(Polynomial left, Polynomial right)
    : lhs(std::move(left)), rhs(std::move(right)), normalized(1) {
    const std::size_t p = std::max(lhs.num_vars(), rhs.num_vars());
    lhs = lhs.widen(p);
    rhs = rhs.widen(p);
    normalized = lhs - rhs;
}

std::string PolyEquation::to_string() const { return lhs.to_string() + " = " + rhs.to_string(); }

namespace {

// Recursive-descent parser. A first pass finds the largest variable index so
// every intermediate polynomial shares one arity.
class Parser {
public:
    Parser(std::string_view text, std::size_t num_vars) : text_(text), num_vars_(num_vars) {}

    static std::size_t scan_num_vars(std::string_view text) {
        std::size_t max_index = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != 'x') continue;
            std::size_t j = i + 1;
            std::size_t index = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                index = index * 10 + static_cast<std::size_t>(text[j] - '0');
                if (index > 1'000'000) throw ParseError("variable index too large", i);
                ++j;
            }
            max_index = std::max(max_index, index);
        }
        return max_index;
    }

    Polynomial parse_expression() {
        Polynomial value = parse_term();
        for (;;) {
            skip_space();
            if (peek() == '+') {
                ++pos_;
                value += parse_term();
            } else if (peek() == '-') {
                ++pos_;
                value -= parse_term();
            } else {
                return value;
            }
        }
    }

    void expect_end() {
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) {
            if (c == '=') throw ParseError("missing '='", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Polynomial parse_term() {
        Polynomial value = parse_unary();
        for (;;) {
            skip_space();
            if (peek() != '*') return value;
            ++pos_;
            value *= parse_unary();
        }
    }

    Polynomial parse_unary() {
        skip_space();
        if (peek() == '-') {
            ++pos_;
            return -parse_unary();
        }
        if (peek() == '+') {
            ++pos_;
            return parse_unary();
        }
        return parse_power();
    }

    Polynomial parse_power() {
        Polynomial base = parse_atom();
        skip_space();
        if (peek() != '^') return base;
        ++pos_;
        skip_space();
        const std::size_t at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            throw ParseError("exponent must be a non-negative integer literal", at);
        }
        std::uint64_t exponent = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            exponent = exponent * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (exponent > std::numeric_limits<std::uint32_t>::max()) {
                throw ParseError("exponent too large", at);
            }
            ++pos_;
        }
        skip_space();
        if (peek() == '^') {
            throw ParseError("chained exponent; use parentheses", pos_);
        }
        return base.pow(static_cast<std::uint32_t>(exponent));
    }

    Polynomial parse_atom() {
        skip_space();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial inner = parse_expression();
            skip_space();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            return Polynomial::constant(num_vars_, BigInt(std::string(text_.substr(start, pos_ - start)), 10));
        }
        if (c == 'x') {
            const std::size_t start = pos_;
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw ParseError("variable name must be x followed by an index", start);
            }
            std::size_t index = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                index = index * 10 + static_cast<std::size_t>(text_[pos_] - '0');
                ++pos_;
            }
            if (index == 0) throw ParseError("variable indices start at 1", start);
            return Polynomial::variable(num_vars_, index - 1);
        }
        if (c == '\0') throw ParseError("unexpected end of input", pos_);
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view text_;
    std::size_t num_vars_;
    std::size_t pos_ = 0;
};

}  // namespace

PolyEquation parse_equation(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError("missing '='", text.size());
    }
    if (text.find('=', eq + 1) != std::string_view::npos) {
        throw ParseError("more than one '='", text.find('=', eq + 1));
    }
    const std::size_t p = std::max<std::size_t>(1, Parser::scan_num_vars(text));
    Parser parser(text, p);
    Polynomial lhs = parser.parse_expression();
    parser.expect('=');
    Polynomial rhs = parser.parse_expression();
    parser.expect_end();
    return PolyEquation(std::move(lhs), std::move(rhs));
}

Polynomial parse_polynomial(std::string_view text, std::size_t min_vars) {
    const std::size_t p = std::max<std::size_t>({1, min_vars, Parser::scan_num_vars(text)});
    Parser parser(text, p);
    Polynomial value = parser.parse_expression();
    parser.expect_end();
    return value;
}

CoeffStats coeff_stats(const Polynomial& p) {
    CoeffStats stats{0, std::vector<std::uint32_t>(p.num_vars(), 0)};
    for (const auto& [e, c] : p.terms()) {
        const BigInt mag = abs(c);
        if (mag > stats.max_abs_coefficient) stats.max_abs_coefficient = mag;
        for (std::size_t i = 0; i < e.size(); ++i) stats.degrees[i] = std::max(stats.degrees[i], e[i]);
    }
    return stats;
}

SumOfSquares sum_of_squares(std::span<const Polynomial> ps) {
    if (ps.empty()) {
        return {Polynomial(1), true};
    }
    Polynomial total(ps.front().num_vars());
    for (const auto& p : ps) {
        total += p * p;
    }
    return {std::move(total), false};
}

std::optional<BigInt> integer_sqrt_test(const BigInt& n) { return exact_sqrt(n); }

}  // namespace dioph::poly
