#pragma once

// Rule-based directional derivatives of concrete expressions, and gradient /
// Hessian-operator extraction through the trace inner product <A, B> = tr(B'A).

#include <optional>
#include <string>

#include "mcalc/expr/ast.hpp"

namespace mcalc::frechet {

using expr::Expr;
using expr::MatExpr;
using expr::ScalarExpr;
using expr::Shape;

/// d(e, x, k) together with what it was taken against. `expr` is linear in
/// Dir(k) and holds no Dir(j) with j > k.
struct DirectionalDerivative {
    Expr expr;
    std::string wrt;
    int direction_index = 1;
};

/// T |-> H(T) with (D^2 f(X) T) Z = tr(Z' H(T)); `expr` is linear in Dir(2).
struct HessianOperator {
    MatExpr expr;
    std::string wrt;
};

/// Directional derivative of `e` with respect to the variable `x` along Dir(k).
/// The shape of x is read from `e`; pass `x_shape` when x may be absent (the
/// derivative is then zero). Throws mcalc::Error if Dir(k) already occurs in e
/// or if x names a non-variable symbol; UnsupportedNode outside the rule set.
MatExpr d(const MatExpr& e, const std::string& x, int k, std::optional<Shape> x_shape = {});
ScalarExpr d(const ScalarExpr& e, const std::string& x, int k, std::optional<Shape> x_shape = {});
DirectionalDerivative derivative(const Expr& e, const std::string& x, int k,
                                 std::optional<Shape> x_shape = {});

/// Second directional derivative d(d(f, x, 1), x, 2): a bilinear form in Z, T.
ScalarExpr second_derivative(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape = {});

/// G with d(f, x, 1) = tr(Z' G), simplified. Throws NotReducible when a term is
/// not a trace holding Dir(1) exactly once.
MatExpr gradient(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape = {});

HessianOperator hessian(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape = {});

/// Extracts G from a scalar linear in Dir(1) (other directions may remain).
MatExpr read_off(const ScalarExpr& linear_in_z, Shape z_shape);

}  // namespace mcalc::frechet
