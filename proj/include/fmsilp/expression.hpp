#pragma once

#include "fmsilp/scalar.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fmsilp {

// Rational expressions over named symbols:
//   literals (integer, decimal, p/q), symbols, + - * /, unary -, integer ^, parentheses.
// Literal-only subexpressions are folded at parse time.
class Expression {
public:
    Expression();  // the constant 0
    explicit Expression(Rational constant);

    // Identifiers must appear in `symbols`; a ParseError carries the 1-based column.
    static Expression parse(std::string_view text, const std::vector<std::string>& symbols);

    template <typename Scalar>
    Scalar evaluate(std::span<const Scalar> values) const;

    template <typename Scalar>
    Scalar evaluate(const Scalar& value) const
    {
        return evaluate<Scalar>(std::span<const Scalar>(&value, 1));
    }

    bool is_constant() const;
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::string str() const;

    friend bool operator==(const Expression& a, const Expression& b);

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::vector<std::string> symbols_;
};

}  // namespace fmsilp
