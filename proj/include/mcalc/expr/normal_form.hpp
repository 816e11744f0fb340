#pragma once

// Expanded polynomial normal form of matrix and scalar expressions.
//
// A matrix expression becomes a sum of terms  c * s1*...*sm * a1*...*an  with a
// rational c, commuting scalar atoms s (traces, log-determinants) and a
// non-commuting product of matrix atoms a (symbols or inverses, each possibly
// transposed). Transposes sit on atoms only, identities are dropped, like
// terms are merged and every trace argument is rotated/reflected to its least
// representative. Two expressions are equal under the supported identities
// iff their normal forms compare equal.
//
// Atom order: Inverse < Dir < Const < Var, then by name. Products compare on
// atoms first with transposes ignored, then on the transpose flags
// (plain before transposed).

#include <memory>
#include <string>
#include <vector>

#include "mcalc/expr/ast.hpp"

namespace mcalc::expr::nf {

struct MatPoly;

struct MatAtom {
    enum class Kind { Inverse = 0, Dir = 1, Const = 2, Var = 3 };

    Kind kind = Kind::Var;
    std::string name;
    int dir_index = 0;
    Shape shape;                           ///< of the untransposed atom
    std::shared_ptr<const MatPoly> inner;  ///< argument of an Inverse
    bool transposed = false;
    bool symmetric = false;                ///< Inverse of a symmetric argument: never transposed

    Shape effective_shape() const noexcept { return transposed ? shape.transposed() : shape; }
};

using Product = std::vector<MatAtom>;

struct ScalarAtom {
    enum class Kind { Trace = 0, LogDet = 1 };

    Kind kind = Kind::Trace;
    Product product;                       ///< Trace: canonical cyclic representative
    std::shared_ptr<const MatPoly> inner;  ///< LogDet argument
};

using ScalarMonomial = std::vector<ScalarAtom>;  ///< sorted

struct ScalarTerm {
    Rational coeff;
    ScalarMonomial atoms;
};

struct ScalarPoly {
    std::vector<ScalarTerm> terms;  ///< sorted by atoms, coefficients non-zero
};

struct MatTerm {
    Rational coeff;
    ScalarMonomial scalars;
    Product product;  ///< empty product = identity
};

struct MatPoly {
    Shape shape;
    std::vector<MatTerm> terms;  ///< sorted by (product, scalars), coefficients non-zero
};

// ----------------------------------------------------------------- ordering

int compare(const MatAtom& a, const MatAtom& b);
int compare_products(const Product& a, const Product& b);
int compare(const ScalarAtom& a, const ScalarAtom& b);
int compare(const ScalarMonomial& a, const ScalarMonomial& b);
int compare(const MatPoly& a, const MatPoly& b);
int compare(const ScalarPoly& a, const ScalarPoly& b);

bool operator==(const MatPoly& a, const MatPoly& b);
bool operator==(const ScalarPoly& a, const ScalarPoly& b);

// ------------------------------------------------------------ normalisation

MatPoly normalize(const MatExpr& e);
ScalarPoly normalize(const ScalarExpr& e);

MatPoly transpose(const MatPoly& p);
/// Least rotation of the product or of its reflection; the product is non-empty.
Product canonical_trace(const Product& p);

/// Occurrences of Dir(index) directly in an atom list (not inside inverses).
int count_dir_top(const Product& p, int index);
/// Occurrences of Dir(index) anywhere, including nested arguments.
int count_dir(const MatAtom& a, int index);
int count_dir(const ScalarAtom& a, int index);
int count_dir(const MatPoly& p, int index);

/// Shape of an atom product; `fallback` for the empty product.
Shape product_shape(const Product& p, Shape fallback);

}  // namespace mcalc::expr::nf
