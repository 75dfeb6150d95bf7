#pragma once

#include <memory>
#include <span>
#include <string>

#include "yfl/grid.hpp"

namespace yfl {

/// Field expressions used for analytic inputs (u0, phi, psi, delta, R0).
///
/// Grammar (whitespace is ignored):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary (('^' | '**') unary)?        right associative
///   primary := number | 'pi' | 'x1'..'xn' | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | sqrt | log | abs
///
/// Numbers accept the usual decimal and exponent forms (2, 0.25, 1e-3).
class Expression {
public:
    /// Throws std::invalid_argument with the offending position on a parse
    /// error, or when a coordinate index exceeds `dimension`.
    static Expression parse(const std::string& text, int dimension);

    double evaluate(std::span<const double> x) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

/// Parses `text` and samples it at every node of `grid`.
ScalarField sample_expression(const GridPtr& grid, const std::string& text);

}  // namespace yfl
