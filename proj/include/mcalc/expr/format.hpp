#pragma once

#include <string>

#include <json.hpp>

#include "mcalc/expr/ast.hpp"

namespace mcalc::expr {

/// Plain-text form in the input grammar, e.g. "tr(Z'*(A + A')*X)".
/// Canonical (simplified) expressions print to text that parses back to
/// the same tree.
std::string format(const MatExpr& e);
std::string format(const ScalarExpr& e);
std::string format(const Expr& e);

std::string format_latex(const MatExpr& e);
std::string format_latex(const ScalarExpr& e);

/// JSON AST: {"op": tag, "shape": [r, c], ...leaf fields..., "children": [...]}.
/// Scalar nodes report shape [1, 1]; their op tags are disjoint from the
/// matrix tags. Leaf fields: "name" (symbols), "index" (Dir), "value" (Lit,
/// as "p" or "p/q"), "role" is implied by the op.
nlohmann::ordered_json to_json(const MatExpr& e);
nlohmann::ordered_json to_json(const ScalarExpr& e);
nlohmann::ordered_json to_json(const Expr& e);

/// Rebuilds an AST from to_json output; throws mcalc::Error on malformed input.
Expr from_json(const nlohmann::ordered_json& j);

}  // namespace mcalc::expr
