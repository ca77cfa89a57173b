#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qmorse/jet.hpp"

namespace qmorse {

enum class NodeKind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct ExprNode {
    NodeKind kind;
    double number = 0.0;       // Const
    int var_index = 0;         // Var, zero-based
    long long exponent = 0;    // Pow
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

// Recursive-descent parser for
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | 'x' integer | '(' expr ')'
//           | ('sin'|'cos'|'exp') '(' expr ')'
// plus leading unary minus on terms. Variables are 1-based in the source
// ("x1".."xn") and validated against dim. Throws ParseError with the byte
// offset of the offending token.
ExprPtr parse_expression(const std::string& text, int dim);

// Evaluate over truncated Taylor polynomials; vars[i] is the polynomial for
// variable i. Division by (numerically) zero throws DomainError.
TaylorPoly eval_expr(const ExprNode& node, const std::vector<TaylorPoly>& vars);

// Plain double evaluation. div_floor guards denominators: |den| < div_floor
// throws DomainError. Used for cheap scans and the load-time domain check.
double eval_expr_double(const ExprNode& node, const Vec& x, double div_floor = 1e-14);

}  // namespace qmorse
