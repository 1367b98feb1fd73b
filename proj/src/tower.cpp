#include "dioph/tower.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "dioph/error.hpp"

namespace dioph {

struct TowerExpr::Node {
    Op op = Op::Lit;
    BigInt value;  // Op::Lit
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

const BigInt kFoldLimit = 1'000'000;
constexpr std::size_t kFoldBits = 64;

}  // namespace

TowerExpr::TowerExpr() : TowerExpr(lit(0).node_) {}

TowerExpr::TowerExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

TowerExpr TowerExpr::lit(const BigInt& value) {
    if (value < 0) {
        throw DomainError("tower expressions denote non-negative integers");
    }
    auto node = std::make_shared<Node>();
    node->op = Op::Lit;
    node->value = value;
    return TowerExpr(std::move(node));
}

TowerExpr TowerExpr::pow(const TowerExpr& base, const TowerExpr& exponent) {
    auto node = std::make_shared<Node>();
    node->op = Op::Pow;
    node->lhs = base.node_;
    node->rhs = exponent.node_;
    return TowerExpr(std::move(node));
}

TowerExpr operator+(const TowerExpr& a, const TowerExpr& b) {
    auto node = std::make_shared<TowerExpr::Node>();
    node->op = TowerExpr::Op::Add;
    node->lhs = a.node_;
    node->rhs = b.node_;
    return TowerExpr(std::move(node));
}

TowerExpr operator-(const TowerExpr& a, const TowerExpr& b) {
    auto ma = a.materialize();
    auto mb = b.materialize();
    if (ma && mb && *ma < *mb) {
        throw DomainError("tower subtraction would be negative");
    }
    auto node = std::make_shared<TowerExpr::Node>();
    node->op = TowerExpr::Op::Sub;
    node->lhs = a.node_;
    node->rhs = b.node_;
    return TowerExpr(std::move(node));
}

TowerExpr operator*(const TowerExpr& a, const TowerExpr& b) {
    auto node = std::make_shared<TowerExpr::Node>();
    node->op = TowerExpr::Op::Mul;
    node->lhs = a.node_;
    node->rhs = b.node_;
    return TowerExpr(std::move(node));
}

TowerExpr::Op TowerExpr::op() const noexcept { return node_->op; }

const BigInt& TowerExpr::literal() const {
    if (node_->op != Op::Lit) throw DomainError("not a literal");
    return node_->value;
}

TowerExpr TowerExpr::left() const {
    if (!node_->lhs) throw DomainError("literal has no children");
    return TowerExpr(node_->lhs);
}

TowerExpr TowerExpr::right() const {
    if (!node_->rhs) throw DomainError("literal has no children");
    return TowerExpr(node_->rhs);
}

std::optional<BigInt> TowerExpr::materialize(std::size_t max_bits) const {
    switch (node_->op) {
        case Op::Lit:
            if (bit_length(node_->value) > max_bits) return std::nullopt;
            return node_->value;
        case Op::Add: {
            auto a = left().materialize(max_bits);
            auto b = right().materialize(max_bits);
            if (!a || !b) return std::nullopt;
            BigInt s = *a + *b;
            if (bit_length(s) > max_bits) return std::nullopt;
            return s;
        }
        case Op::Sub: {
            // Operands may exceed the cap while the difference does not; allow
            // one extra level of headroom before giving up.
            auto a = left().materialize(max_bits + 64);
            auto b = right().materialize(max_bits + 64);
            if (!a || !b) return std::nullopt;
            if (*a < *b) throw DomainError("tower subtraction is negative");
            BigInt d = *a - *b;
            if (bit_length(d) > max_bits) return std::nullopt;
            return d;
        }
        case Op::Mul: {
            auto a = left().materialize(max_bits);
            auto b = right().materialize(max_bits);
            if (!a || !b) {
                // 0 times anything is still 0.
                if ((a && *a == 0) || (b && *b == 0)) return BigInt(0);
                return std::nullopt;
            }
            if (bit_length(*a) + bit_length(*b) > max_bits + 1) {
                if (*a == 0 || *b == 0) return BigInt(0);
                return std::nullopt;
            }
            BigInt p = *a * *b;
            if (bit_length(p) > max_bits) return std::nullopt;
            return p;
        }
        case Op::Pow: {
            auto base = left().materialize(max_bits);
            if (base && (*base == 0 || *base == 1)) {
                auto e = right().materialize(64);
                if (*base == 1) return BigInt(1);
                if (e) return BigInt(*e == 0 ? 1 : 0);
                return BigInt(0);
            }
            auto e = right().materialize(64);
            if (!base || !e) return std::nullopt;
            if (!e->fits_ulong_p()) return std::nullopt;
            const unsigned long exponent = e->get_ui();
            const std::size_t base_bits = bit_length(*base);
            // (base_bits - 1) * exponent < bits of the power <= base_bits * exponent
            if (exponent != 0 && static_cast<long double>(base_bits - 1) * exponent > max_bits) {
                return std::nullopt;
            }
            BigInt r = dioph::pow(*base, exponent);
            if (bit_length(r) > max_bits) return std::nullopt;
            return r;
        }
    }
    return std::nullopt;
}

namespace {

long double log2_of(const BigInt& v) {
    if (v == 0) return -std::numeric_limits<long double>::infinity();
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log2(static_cast<long double>(mant)) + static_cast<long double>(exp);
}

// log2(2^a + 2^b)
long double log2_add(long double a, long double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(b) && b < 0) return a;
    return a + std::log2(1.0L + std::exp2(b - a));
}

}  // namespace

long double TowerExpr::log2_estimate() const {
    constexpr long double inf = std::numeric_limits<long double>::infinity();
    if (auto exact = materialize(4096)) return log2_of(*exact);
    switch (node_->op) {
        case Op::Lit:
            return log2_of(node_->value);
        case Op::Add:
            return log2_add(left().log2_estimate(), right().log2_estimate());
        case Op::Sub: {
            const long double a = left().log2_estimate();
            const long double b = right().log2_estimate();
            if (std::isinf(a) && a > 0) {
                return std::isinf(b) ? std::numeric_limits<long double>::quiet_NaN() : inf;
            }
            if (a - b < 1.0L / 1024) return std::numeric_limits<long double>::quiet_NaN();
            return a + std::log2(1.0L - std::exp2(b - a));
        }
        case Op::Mul:
            return left().log2_estimate() + right().log2_estimate();
        case Op::Pow: {
            const long double lb = left().log2_estimate();
            const long double le = right().log2_estimate();
            if (std::isinf(le) && le > 0) return inf;
            if (lb <= 0) return 0;  // base 1 (base 0 materializes above)
            const long double r = std::exp2(le) * lb;
            return std::isfinite(r) ? r : inf;
        }
    }
    return std::numeric_limits<long double>::quiet_NaN();
}

namespace {

int precedence(TowerExpr::Op op) {
    switch (op) {
        case TowerExpr::Op::Lit: return 4;
        case TowerExpr::Op::Pow: return 3;
        case TowerExpr::Op::Mul: return 2;
        case TowerExpr::Op::Add:
        case TowerExpr::Op::Sub: return 1;
    }
    return 0;
}

std::string render(const TowerExpr& e);

std::string render_child(const TowerExpr& child, int min_prec) {
    std::string s = render(child);
    const bool atom = child.op() == TowerExpr::Op::Lit || s.find_first_not_of("0123456789") == std::string::npos;
    if (!atom && precedence(child.op()) < min_prec) return "(" + s + ")";
    return s;
}

std::string render(const TowerExpr& e) {
    if (e.op() == TowerExpr::Op::Lit) return e.literal().get_str();
    if (auto v = e.materialize(kFoldBits); v && *v < kFoldLimit) return v->get_str();
    switch (e.op()) {
        case TowerExpr::Op::Add:
            return render_child(e.left(), 1) + "+" + render_child(e.right(), 1);
        case TowerExpr::Op::Sub:
            return render_child(e.left(), 1) + "-" + render_child(e.right(), 2);
        case TowerExpr::Op::Mul:
            return render_child(e.left(), 2) + "*" + render_child(e.right(), 3);
        case TowerExpr::Op::Pow:
            // Base and exponent are parenthesized unless they are atoms.
            return render_child(e.left(), 4) + "^" + render_child(e.right(), 4);
        case TowerExpr::Op::Lit:
            break;
    }
    return {};
}

class ExprParser {
public:
    ExprParser(std::string_view text, const std::optional<TowerExpr>& n) : text_(text), n_(n) {}

    TowerExpr parse_all() {
        TowerExpr e = parse_sum();
        skip();
        if (pos_ != text_.size()) throw ParseError("unexpected character in tower expression", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    TowerExpr parse_sum() {
        TowerExpr e = parse_product();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                e = e + parse_product();
            } else if (c == '-') {
                ++pos_;
                e = e - parse_product();
            } else {
                return e;
            }
        }
    }

    TowerExpr parse_product() {
        TowerExpr e = parse_power();
        while (peek() == '*') {
            ++pos_;
            e = e * parse_power();
        }
        return e;
    }

    TowerExpr parse_power() {
        TowerExpr base = parse_atom();
        if (peek() == '^') {
            ++pos_;
            return TowerExpr::pow(base, parse_power());
        }
        return base;
    }

    TowerExpr parse_atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            TowerExpr e = parse_sum();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return TowerExpr::lit(BigInt(std::string(text_.substr(start, pos_ - start)), 10));
        }
        if (c == 'n' && n_) {
            ++pos_;
            return *n_;
        }
        if (c == '\0') throw ParseError("unexpected end of tower expression", pos_);
        throw ParseError(std::string("unexpected character '") + c + "' in tower expression", pos_);
    }

    std::string_view text_;
    std::optional<TowerExpr> n_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string TowerExpr::to_string() const { return render(*this); }

TowerExpr TowerExpr::parse(std::string_view text, const std::optional<TowerExpr>& n_binding) {
    return ExprParser(text, n_binding).parse_all();
}

bool TowerExpr::structurally_equal(const TowerExpr& other) const {
    if (node_ == other.node_) return true;
    if (op() != other.op()) return false;
    if (op() == Op::Lit) return literal() == other.literal();
    return left().structurally_equal(other.left()) && right().structurally_equal(other.right());
}

std::partial_ordering TowerExpr::compare(const TowerExpr& other) const {
    auto a = materialize();
    auto b = other.materialize();
    if (a && b) {
        const int c = cmp(*a, *b);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    if (structurally_equal(other)) return std::partial_ordering::equivalent;
    // Same shape with one differing operand: monotone operators decide.
    if (op() == other.op() && op() != Op::Lit) {
        const bool same_left = left().structurally_equal(other.left());
        const bool same_right = right().structurally_equal(other.right());
        if (same_left && !same_right) {
            auto r = right().compare(other.right());
            if (op() == Op::Sub) {
                if (r == std::partial_ordering::less) return std::partial_ordering::greater;
                if (r == std::partial_ordering::greater) return std::partial_ordering::less;
                return r;
            }
            if (op() == Op::Pow) {
                auto base = left().materialize(64);
                if (base && *base >= 2) return r;
            } else {
                return r;
            }
        }
        if (same_right && !same_left) {
            auto r = left().compare(other.left());
            if (op() == Op::Pow) {
                auto e = right().materialize(64);
                if (!e || *e >= 1) return r;
            } else {
                return r;
            }
        }
    }
    const long double la = log2_estimate();
    const long double lb = other.log2_estimate();
    if (!std::isnan(la) && !std::isnan(lb) && !(std::isinf(la) && std::isinf(lb))) {
        const long double slack = 1e-9L * std::max<long double>(1.0L, std::fabs(std::max(la, lb)));
        if (la + slack < lb) return std::partial_ordering::less;
        if (lb + slack < la) return std::partial_ordering::greater;
    }
    return std::partial_ordering::unordered;
}

TowerBound::TowerBound(TowerExpr k) : k_(std::move(k)) {}

TowerBound TowerBound::conjecture(std::size_t n) {
    if (n == 0) throw DomainError("conjecture bound needs n >= 1");
    return TowerBound(TowerExpr::lit(static_cast<unsigned long>(n - 1)));
}

TowerExpr TowerBound::value() const {
    const auto two = TowerExpr::lit(2);
    return TowerExpr::pow(two, TowerExpr::pow(two, k_));
}

std::optional<BigInt> TowerBound::materialize(std::size_t max_bits) const {
    auto k = k_.materialize(64);
    if (!k || !k->fits_ulong_p() || k->get_ui() >= 63) return std::nullopt;
    const unsigned long e = 1UL << k->get_ui();
    if (e + 1 > max_bits) return std::nullopt;
    BigInt v = 1;
    v <<= e;
    return v;
}

std::string TowerBound::to_string() const {
    std::string k = k_.to_string();
    if (k.find_first_not_of("0123456789") != std::string::npos) k = "(" + k + ")";
    return "2^(2^" + k + ")";
}

TowerBound TowerBound::parse(std::string_view text) {
    const TowerExpr e = TowerExpr::parse(text);
    const auto is_two = [](const TowerExpr& x) { return x.op() == TowerExpr::Op::Lit && x.literal() == 2; };
    if (e.op() == TowerExpr::Op::Pow && is_two(e.left()) && e.right().op() == TowerExpr::Op::Pow &&
        is_two(e.right().left())) {
        return TowerBound(e.right().right());
    }
    throw ParseError("tower bounds have the form 2^(2^k)", 0);
}

bool within(const BigInt& x, const TowerBound& bound) {
    const BigInt mag = abs(x);
    const std::size_t len = bit_length(mag);
    // |x| <= 2^e  iff  bitlen(|x|) <= e, or |x| == 2^e exactly.
    const auto k = bound.k().materialize(64);
    if (!k || !k->fits_ulong_p() || k->get_ui() >= 64) {
        const auto ord = bound.k().compare(TowerExpr::lit(64));
        if (ord == std::partial_ordering::greater || ord == std::partial_ordering::equivalent) return true;
        throw InfeasibleError("cannot decide tower comparison for exponent " + bound.k().to_string());
    }
    const unsigned long kk = k->get_ui();
    const unsigned __int128 e = static_cast<unsigned __int128>(1) << kk;
    if (len <= e) return true;
    if (len == e + 1) {
        // a power of two has a single set bit
        return mpz_scan1(mag.get_mpz_t(), 0) == len - 1;
    }
    return false;
}

}  // namespace dioph
