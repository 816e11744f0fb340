#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mcalc/expr/ast.hpp"

namespace mcalc::expr {

struct SymbolDecl {
    std::string name;
    Role role = Role::Const;
    Shape shape;
};

/// Declared symbols of a session. Redeclaring a name with the same role and
/// shape is a no-op; any other redeclaration throws mcalc::Error.
class SymbolTable {
public:
    void declare(const SymbolDecl& d);
    const SymbolDecl* find(std::string_view name) const;
    const std::vector<SymbolDecl>& decls() const noexcept { return decls_; }

private:
    std::vector<SymbolDecl> decls_;
};

/// Parses "NAME:RxC:{const|var|dir}". Dir symbols must use a reserved
/// direction name (Z, T, Z3, ...).
SymbolDecl parse_decl(std::string_view text);

/// Expression text to AST. Products are right-nested; a leading '-' of a
/// term negates the whole term; a - b is Add(a, Neg(b)).
Expr parse(std::string_view text, const SymbolTable& decls);
MatExpr parse_matrix(std::string_view text, const SymbolTable& decls);
ScalarExpr parse_scalar(std::string_view text, const SymbolTable& decls);

}  // namespace mcalc::expr
