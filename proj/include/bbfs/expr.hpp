#pragma once

#include <array>
#include <memory>
#include <string>

namespace bbfs {

/// Small arithmetic expression language used in experiment configs for
/// probe functions, variable exponents and Young functions.
///
/// Grammar (precedence low to high):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+')* power
///   power  := atom ('^' unary)?            (right associative)
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Variables: x1, x2 (x aliases x1), t (scalar contexts).
/// Functions: abs, max, min, log, exp, sqrt, sign, step, sin, cos, pow.
/// Constants: pi, e.
class Expression {
public:
    /// Parses `text`; throws ContractError with position info on bad input.
    static Expression parse(const std::string& text);

    double operator()(std::array<double, 2> x) const;
    double operator()(double t) const { return (*this)({t, 0.0}); }

    const std::string& text() const { return text_; }

    Expression(const Expression&);
    Expression(Expression&&) noexcept;
    Expression& operator=(Expression);
    ~Expression();

    struct Node;

private:
    explicit Expression(std::shared_ptr<const Node> root, std::string text);
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace bbfs
