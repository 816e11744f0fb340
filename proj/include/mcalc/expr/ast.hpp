#pragma once

// Immutable AST for concrete matrix- and scalar-valued expressions.
//
// Matrices and scalars are separate sorts: a scalar is never a 1x1 matrix.
// Every node carries its shape, checked when the node is built, so an
// ill-shaped tree cannot exist. Nodes are shared and never mutated.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

namespace mcalc::expr {

// Compare only against Rational values: with C++20 rewritten operators,
// boost 1.74 recurses forever on rational == integer.
using Rational = boost::rational<std::int64_t>;

struct Shape {
    int rows = 1;
    int cols = 1;

    bool square() const noexcept { return rows == cols; }
    Shape transposed() const noexcept { return {cols, rows}; }
    std::string to_string() const;

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Throws std::invalid_argument unless rows, cols >= 1.
Shape make_shape(int rows, int cols);

enum class MatOp { Const, Var, Dir, Identity, Zero, Add, Neg, ScalarMul, MatMul, Transpose, Inverse };
enum class ScalarOp { Lit, Trace, LogDet, Add, Mul, Neg };

std::string_view to_string(MatOp op);
std::string_view to_string(ScalarOp op);

struct MatNode;
struct ScalarNode;
class ScalarExpr;

class MatExpr {
public:
    explicit MatExpr(std::shared_ptr<const MatNode> node) : node_(std::move(node)) {}

    MatOp op() const noexcept;
    Shape shape() const noexcept;

    /// Symbol name (Const, Var, Dir); empty otherwise.
    const std::string& name() const noexcept;
    /// Direction index of a Dir node (Z -> 1, T -> 2, Z3 -> 3, ...); 0 otherwise.
    int dir_index() const noexcept;
    bool is_symbol() const noexcept;

    std::span<const MatExpr> children() const noexcept;
    const MatExpr& child(std::size_t i = 0) const;
    /// Coefficient of a ScalarMul node.
    const ScalarExpr& scalar() const;

    friend bool operator==(const MatExpr& a, const MatExpr& b);

private:
    std::shared_ptr<const MatNode> node_;
};

class ScalarExpr {
public:
    explicit ScalarExpr(std::shared_ptr<const ScalarNode> node) : node_(std::move(node)) {}

    ScalarOp op() const noexcept;
    const Rational& value() const;  // Lit only

    std::span<const ScalarExpr> children() const noexcept;
    const ScalarExpr& child(std::size_t i = 0) const;
    /// Argument of Trace / LogDet.
    const MatExpr& matrix() const;

    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

private:
    std::shared_ptr<const ScalarNode> node_;
};

struct MatNode {
    MatOp op;
    Shape shape;
    std::string name;
    int dir_index = 0;
    std::vector<MatExpr> children;
    std::optional<ScalarExpr> scalar;
};

struct ScalarNode {
    ScalarOp op;
    Rational value;
    std::vector<ScalarExpr> children;
    std::optional<MatExpr> matrix;
};

/// Either sort; what the parser and the JSON reader return.
using Expr = std::variant<MatExpr, ScalarExpr>;

/// Marker returned by infer_shape for scalar-valued expressions.
struct ScalarSort {
    friend bool operator==(ScalarSort, ScalarSort) = default;
};

Shape infer_shape(const MatExpr& e) noexcept;
ScalarSort infer_shape(const ScalarExpr& e) noexcept;

// ------------------------------------------------------------------ builders
//
// All builders check shapes and throw ShapeMismatch / NonSquare on misuse.

MatExpr mat_const(std::string name, Shape shape);
MatExpr var(std::string name, Shape shape);
/// Direction symbol with its reserved name (see direction_name).
MatExpr dir(int index, Shape shape);
MatExpr identity(int n);
MatExpr zero(Shape shape);
/// n-ary sum; zero summands are kept. A single summand is returned as is.
MatExpr add(std::vector<MatExpr> terms);
MatExpr neg(MatExpr e);
MatExpr scale(ScalarExpr s, MatExpr e);
MatExpr matmul(MatExpr lhs, MatExpr rhs);
/// Right-nested product of a factor list; MatMul factors are flattened first.
MatExpr product(const std::vector<MatExpr>& factors);
MatExpr transpose(MatExpr e);
MatExpr inverse(MatExpr e);

ScalarExpr lit(Rational value);
ScalarExpr lit(std::int64_t num, std::int64_t den = 1);
ScalarExpr trace(MatExpr e);
ScalarExpr logdet(MatExpr e);
ScalarExpr sadd(std::vector<ScalarExpr> terms);
ScalarExpr smul(std::vector<ScalarExpr> factors);
ScalarExpr sneg(ScalarExpr e);

/// Factor list of a (possibly nested) MatMul; a non-product is a list of one.
std::vector<MatExpr> product_factors(const MatExpr& e);

// --------------------------------------------------------------- directions

/// Reserved direction names: 1 -> "Z", 2 -> "T", k >= 3 -> "Zk".
std::string direction_name(int index);
/// Inverse of direction_name; nullopt for non-reserved names.
std::optional<int> direction_index(std::string_view name);

bool is_zero(const MatExpr& e) noexcept;
bool is_zero(const ScalarExpr& e) noexcept;

/// Number of occurrences of Dir(index) in the tree.
int count_dir(const MatExpr& e, int index);
int count_dir(const ScalarExpr& e, int index);
/// Largest direction index present (0 when none).
int max_dir(const MatExpr& e);
int max_dir(const ScalarExpr& e);

enum class Role { Const, Var, Dir };

struct SymbolInfo {
    std::string name;
    Role role;
    Shape shape;
    int dir_index = 0;
};

/// Symbols appearing in the expression, each reported once, in first-seen order.
std::vector<SymbolInfo> symbols(const MatExpr& e);
std::vector<SymbolInfo> symbols(const ScalarExpr& e);

/// Names of symbols that occur inside an Inverse or LogDet argument.
std::vector<std::string> symbols_under_inverse(const MatExpr& e);
std::vector<std::string> symbols_under_inverse(const ScalarExpr& e);

}  // namespace mcalc::expr
