#include "fmsilp/expression.hpp"

#include "fmsilp/errors.hpp"

#include <cctype>
#include <climits>

namespace fmsilp {

struct Expression::Node {
    enum class Kind { Literal, Symbol, Neg, Add, Sub, Mul, Div, Pow };
    Kind kind;
    Rational literal;
    std::size_t symbol = 0;
    long exponent = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_literal(Rational r)
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Literal;
    n->literal = std::move(r);
    return n;
}

NodePtr make_unary(Node::Kind k, NodePtr a, long exponent = 0)
{
    if (a->kind == Node::Kind::Literal) {
        if (k == Node::Kind::Neg) return make_literal(-a->literal);
        if (k == Node::Kind::Pow && (exponent >= 0 || a->literal != 0)) {
            Rational base = exponent < 0 ? Rational(1 / a->literal) : a->literal;
            Rational r(1);
            for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) r *= base;
            return make_literal(r);
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->exponent = exponent;
    return n;
}

NodePtr make_binary(Node::Kind k, NodePtr a, NodePtr b)
{
    if (a->kind == Node::Kind::Literal && b->kind == Node::Kind::Literal) {
        const Rational& x = a->literal;
        const Rational& y = b->literal;
        switch (k) {
        case Node::Kind::Add: return make_literal(x + y);
        case Node::Kind::Sub: return make_literal(x - y);
        case Node::Kind::Mul: return make_literal(x * y);
        case Node::Kind::Div:
            if (y != 0) return make_literal(x / y);
            break;
        default: break;
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& symbols)
        : text_(text), symbols_(symbols)
    {
    }

    NodePtr parse()
    {
        auto e = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError("expression '" + std::string(text_) + "': " + msg, 1, pos_ + 1);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        auto lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Node::Kind::Add, lhs, term());
            else if (accept('-'))
                lhs = make_binary(Node::Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        auto lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(Node::Kind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make_binary(Node::Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary()
    {
        if (accept('-')) return make_unary(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power()
    {
        auto base = primary();
        if (!accept('^')) return base;
        skip_space();
        bool negative = false;
        if (accept('-')) negative = true;
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ - start > 6) fail("exponent too large");
        long e = std::stol(std::string(text_.substr(start, pos_ - start)));
        return make_unary(Node::Kind::Pow, base, negative ? -e : e);
    }

    NodePtr primary()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return symbol();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        try {
            return make_literal(parse_rational(text_.substr(start, pos_ - start)));
        } catch (const ParseError&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    NodePtr symbol()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (symbols_[i] == name) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Symbol;
                n->symbol = i;
                return n;
            }
        }
        pos_ = start;
        fail("unknown symbol '" + name + "'");
    }

    std::string_view text_;
    const std::vector<std::string>& symbols_;
    std::size_t pos_ = 0;
};

template <typename Scalar>
Scalar eval(const Node& n, std::span<const Scalar> values)
{
    switch (n.kind) {
    case Node::Kind::Literal: return ScalarTraits<Scalar>::from_rational(n.literal);
    case Node::Kind::Symbol: return values[n.symbol];
    case Node::Kind::Neg: return -eval<Scalar>(*n.lhs, values);
    case Node::Kind::Add: return eval<Scalar>(*n.lhs, values) + eval<Scalar>(*n.rhs, values);
    case Node::Kind::Sub: return eval<Scalar>(*n.lhs, values) - eval<Scalar>(*n.rhs, values);
    case Node::Kind::Mul: return eval<Scalar>(*n.lhs, values) * eval<Scalar>(*n.rhs, values);
    case Node::Kind::Div: {
        Scalar d = eval<Scalar>(*n.rhs, values);
        if (d == 0) throw ExpressionEvalError("division by zero");
        return eval<Scalar>(*n.lhs, values) / d;
    }
    case Node::Kind::Pow: {
        Scalar base = eval<Scalar>(*n.lhs, values);
        long e = n.exponent;
        if (e < 0) {
            if (base == 0) throw ExpressionEvalError("zero raised to a negative power");
            base = Scalar(1) / base;
            e = -e;
        }
        Scalar r(1);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }
    }
    return Scalar(0);
}

void print(const Node& n, const std::vector<std::string>& symbols, std::string& out)
{
    switch (n.kind) {
    case Node::Kind::Literal:
        if (n.literal < 0 || denominator(n.literal) != 1)
            out += "(" + n.literal.str() + ")";
        else
            out += n.literal.str();
        return;
    case Node::Kind::Symbol: out += symbols[n.symbol]; return;
    case Node::Kind::Neg:
        out += "(-";
        print(*n.lhs, symbols, out);
        out += ")";
        return;
    case Node::Kind::Pow:
        out += "(";
        print(*n.lhs, symbols, out);
        out += "^" + std::to_string(n.exponent) + ")";
        return;
    default: break;
    }
    const char* op = n.kind == Node::Kind::Add   ? " + "
                     : n.kind == Node::Kind::Sub ? " - "
                     : n.kind == Node::Kind::Mul ? " * "
                                                 : " / ";
    out += "(";
    print(*n.lhs, symbols, out);
    out += op;
    print(*n.rhs, symbols, out);
    out += ")";
}

bool equal(const Node& a, const std::vector<std::string>& sa, const Node& b,
           const std::vector<std::string>& sb)
{
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Node::Kind::Literal: return a.literal == b.literal;
    case Node::Kind::Symbol: return sa[a.symbol] == sb[b.symbol];
    case Node::Kind::Neg: return equal(*a.lhs, sa, *b.lhs, sb);
    case Node::Kind::Pow: return a.exponent == b.exponent && equal(*a.lhs, sa, *b.lhs, sb);
    default: return equal(*a.lhs, sa, *b.lhs, sb) && equal(*a.rhs, sa, *b.rhs, sb);
    }
}

}  // namespace

Expression::Expression() : root_(make_literal(Rational(0))) {}

Expression::Expression(Rational constant) : root_(make_literal(std::move(constant))) {}

Expression Expression::parse(std::string_view text, const std::vector<std::string>& symbols)
{
    Expression e;
    e.root_ = Parser(text, symbols).parse();
    e.symbols_ = symbols;
    return e;
}

template <typename Scalar>
Scalar Expression::evaluate(std::span<const Scalar> values) const
{
    if (values.size() < symbols_.size())
        throw ExpressionEvalError("expression needs " + std::to_string(symbols_.size()) +
                                  " symbol values");
    return eval<Scalar>(*root_, values);
}

bool Expression::is_constant() const
{
    return root_->kind == Node::Kind::Literal;
}

std::string Expression::str() const
{
    std::string out;
    print(*root_, symbols_, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b)
{
    return equal(*a.root_, a.symbols_, *b.root_, b.symbols_);
}

template Rational Expression::evaluate<Rational>(std::span<const Rational>) const;
template double Expression::evaluate<double>(std::span<const double>) const;

}  // namespace fmsilp
