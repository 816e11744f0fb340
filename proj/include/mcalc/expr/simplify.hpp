#pragma once

#include "mcalc/expr/ast.hpp"
#include "mcalc/expr/normal_form.hpp"

namespace mcalc::expr {

/// Canonical form of an expression. Equal canonical forms mean equal
/// expressions under the identities of the normal form; the result is
/// rebuilt with common left/right factors pulled out and same-size traces
/// merged, e.g. tr(Z'*A*X) + tr(X'*A*Z) becomes tr(Z'*(A + A')*X).
MatExpr simplify(const MatExpr& e);
ScalarExpr simplify(const ScalarExpr& e);

/// Rebuild an AST from a normal form.
MatExpr to_expr(const nf::MatPoly& p);
ScalarExpr to_expr(const nf::ScalarPoly& p);

/// True if both expressions have the same normal form.
bool equivalent(const MatExpr& a, const MatExpr& b);
bool equivalent(const ScalarExpr& a, const ScalarExpr& b);

}  // namespace mcalc::expr
