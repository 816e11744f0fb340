#include "mcalc/expr/ast.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "mcalc/error.hpp"

namespace mcalc::expr {

std::string Shape::to_string() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

Shape make_shape(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("shape dimensions must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    return {rows, cols};
}

std::string_view to_string(MatOp op) {
    switch (op) {
        case MatOp::Const: return "Const";
        case MatOp::Var: return "Var";
        case MatOp::Dir: return "Dir";
        case MatOp::Identity: return "Identity";
        case MatOp::Zero: return "Zero";
        case MatOp::Add: return "Add";
        case MatOp::Neg: return "Neg";
        case MatOp::ScalarMul: return "ScalarMul";
        case MatOp::MatMul: return "MatMul";
        case MatOp::Transpose: return "Transpose";
        case MatOp::Inverse: return "Inverse";
    }
    return "?";
}

std::string_view to_string(ScalarOp op) {
    switch (op) {
        case ScalarOp::Lit: return "Lit";
        case ScalarOp::Trace: return "Trace";
        case ScalarOp::LogDet: return "LogDet";
        case ScalarOp::Add: return "SAdd";
        case ScalarOp::Mul: return "SMul";
        case ScalarOp::Neg: return "SNeg";
    }
    return "?";
}

// ------------------------------------------------------------------ accessors

MatOp MatExpr::op() const noexcept { return node_->op; }
Shape MatExpr::shape() const noexcept { return node_->shape; }
const std::string& MatExpr::name() const noexcept { return node_->name; }
int MatExpr::dir_index() const noexcept { return node_->dir_index; }

bool MatExpr::is_symbol() const noexcept {
    return node_->op == MatOp::Const || node_->op == MatOp::Var || node_->op == MatOp::Dir;
}

std::span<const MatExpr> MatExpr::children() const noexcept { return node_->children; }

const MatExpr& MatExpr::child(std::size_t i) const { return node_->children.at(i); }

const ScalarExpr& MatExpr::scalar() const {
    if (!node_->scalar) throw std::logic_error("MatExpr::scalar on a non-ScalarMul node");
    return *node_->scalar;
}

bool operator==(const MatExpr& a, const MatExpr& b) {
    if (a.node_ == b.node_) return true;
    const MatNode& x = *a.node_;
    const MatNode& y = *b.node_;
    if (x.op != y.op || x.shape != y.shape || x.name != y.name || x.dir_index != y.dir_index)
        return false;
    if (x.children != y.children) return false;
    if (x.scalar.has_value() != y.scalar.has_value()) return false;
    return !x.scalar || *x.scalar == *y.scalar;
}

ScalarOp ScalarExpr::op() const noexcept { return node_->op; }

const Rational& ScalarExpr::value() const {
    if (node_->op != ScalarOp::Lit) throw std::logic_error("ScalarExpr::value on a non-literal");
    return node_->value;
}

std::span<const ScalarExpr> ScalarExpr::children() const noexcept { return node_->children; }

const ScalarExpr& ScalarExpr::child(std::size_t i) const { return node_->children.at(i); }

const MatExpr& ScalarExpr::matrix() const {
    if (!node_->matrix) throw std::logic_error("ScalarExpr::matrix on a node without matrix argument");
    return *node_->matrix;
}

bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.node_ == b.node_) return true;
    const ScalarNode& x = *a.node_;
    const ScalarNode& y = *b.node_;
    if (x.op != y.op || x.value != y.value || x.children != y.children) return false;
    if (x.matrix.has_value() != y.matrix.has_value()) return false;
    return !x.matrix || *x.matrix == *y.matrix;
}

Shape infer_shape(const MatExpr& e) noexcept { return e.shape(); }
ScalarSort infer_shape(const ScalarExpr&) noexcept { return {}; }

// ------------------------------------------------------------------- builders

namespace {

MatExpr make(MatNode node) { return MatExpr(std::make_shared<const MatNode>(std::move(node))); }
ScalarExpr make(ScalarNode node) { return ScalarExpr(std::make_shared<const ScalarNode>(std::move(node))); }

MatExpr symbol(MatOp op, std::string name, Shape shape, int index = 0) {
    if (shape.rows < 1 || shape.cols < 1) throw std::invalid_argument("symbol '" + name + "' has an empty shape");
    MatNode n{op, shape, std::move(name), index, {}, {}};
    return make(std::move(n));
}

void require_square(const MatExpr& e, const char* path) {
    if (!e.shape().square()) throw NonSquare(std::string(path) + " of " + e.shape().to_string());
}

}  // namespace

MatExpr mat_const(std::string name, Shape shape) { return symbol(MatOp::Const, std::move(name), shape); }
MatExpr var(std::string name, Shape shape) { return symbol(MatOp::Var, std::move(name), shape); }

MatExpr dir(int index, Shape shape) {
    if (index < 1) throw std::invalid_argument("direction index must be >= 1");
    return symbol(MatOp::Dir, direction_name(index), shape, index);
}

MatExpr identity(int n) {
    if (n < 1) throw std::invalid_argument("identity size must be positive");
    return make(MatNode{MatOp::Identity, {n, n}, {}, 0, {}, {}});
}

MatExpr zero(Shape shape) { return make(MatNode{MatOp::Zero, make_shape(shape.rows, shape.cols), {}, 0, {}, {}}); }

MatExpr add(std::vector<MatExpr> terms) {
    if (terms.empty()) throw std::invalid_argument("add of an empty term list");
    if (terms.size() == 1) return terms.front();
    const Shape s = terms.front().shape();
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].shape() != s)
            throw ShapeMismatch("Add[" + std::to_string(i) + "]", s.to_string(), terms[i].shape().to_string());
    return make(MatNode{MatOp::Add, s, {}, 0, std::move(terms), {}});
}

MatExpr neg(MatExpr e) {
    const Shape s = e.shape();
    return make(MatNode{MatOp::Neg, s, {}, 0, {std::move(e)}, {}});
}

MatExpr scale(ScalarExpr s, MatExpr e) {
    const Shape shape = e.shape();
    return make(MatNode{MatOp::ScalarMul, shape, {}, 0, {std::move(e)}, std::move(s)});
}

MatExpr matmul(MatExpr lhs, MatExpr rhs) {
    if (lhs.shape().cols != rhs.shape().rows)
        throw ShapeMismatch("MatMul", std::to_string(lhs.shape().cols) + " rows on the right operand",
                            rhs.shape().to_string());
    const Shape s{lhs.shape().rows, rhs.shape().cols};
    return make(MatNode{MatOp::MatMul, s, {}, 0, {std::move(lhs), std::move(rhs)}, {}});
}

std::vector<MatExpr> product_factors(const MatExpr& e) {
    if (e.op() != MatOp::MatMul) return {e};
    auto left = product_factors(e.child(0));
    auto right = product_factors(e.child(1));
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

MatExpr product(const std::vector<MatExpr>& factors) {
    if (factors.empty()) throw std::invalid_argument("product of an empty factor list");
    std::vector<MatExpr> flat;
    for (const auto& f : factors) {
        auto fs = product_factors(f);
        flat.insert(flat.end(), fs.begin(), fs.end());
    }
    MatExpr acc = flat.back();
    for (auto it = flat.rbegin() + 1; it != flat.rend(); ++it) acc = matmul(*it, acc);
    return acc;
}

MatExpr transpose(MatExpr e) {
    const Shape s = e.shape().transposed();
    return make(MatNode{MatOp::Transpose, s, {}, 0, {std::move(e)}, {}});
}

MatExpr inverse(MatExpr e) {
    require_square(e, "Inverse");
    const Shape s = e.shape();
    return make(MatNode{MatOp::Inverse, s, {}, 0, {std::move(e)}, {}});
}

ScalarExpr lit(Rational value) { return make(ScalarNode{ScalarOp::Lit, value, {}, {}}); }
ScalarExpr lit(std::int64_t num, std::int64_t den) { return lit(Rational(num, den)); }

ScalarExpr trace(MatExpr e) {
    require_square(e, "Trace");
    return make(ScalarNode{ScalarOp::Trace, 0, {}, std::move(e)});
}

ScalarExpr logdet(MatExpr e) {
    require_square(e, "LogDet");
    return make(ScalarNode{ScalarOp::LogDet, 0, {}, std::move(e)});
}

ScalarExpr sadd(std::vector<ScalarExpr> terms) {
    if (terms.empty()) throw std::invalid_argument("sadd of an empty term list");
    if (terms.size() == 1) return terms.front();
    return make(ScalarNode{ScalarOp::Add, 0, std::move(terms), {}});
}

ScalarExpr smul(std::vector<ScalarExpr> factors) {
    if (factors.empty()) throw std::invalid_argument("smul of an empty factor list");
    if (factors.size() == 1) return factors.front();
    return make(ScalarNode{ScalarOp::Mul, 0, std::move(factors), {}});
}

ScalarExpr sneg(ScalarExpr e) { return make(ScalarNode{ScalarOp::Neg, 0, {std::move(e)}, {}}); }

// ----------------------------------------------------------------- directions

std::string direction_name(int index) {
    if (index == 1) return "Z";
    if (index == 2) return "T";
    return "Z" + std::to_string(index);
}

std::optional<int> direction_index(std::string_view name) {
    if (name == "Z") return 1;
    if (name == "T") return 2;
    if (name.size() < 2 || name[0] != 'Z') return std::nullopt;
    int k = 0;
    const char* first = name.data() + 1;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc{} || ptr != last || k < 3 || name[1] == '0') return std::nullopt;
    return k;
}

bool is_zero(const MatExpr& e) noexcept { return e.op() == MatOp::Zero; }
bool is_zero(const ScalarExpr& e) noexcept { return e.op() == ScalarOp::Lit && e.value() == Rational(0); }

int count_dir(const MatExpr& e, int index) {
    if (e.op() == MatOp::Dir) return e.dir_index() == index ? 1 : 0;
    int n = 0;
    for (const auto& c : e.children()) n += count_dir(c, index);
    if (e.op() == MatOp::ScalarMul) n += count_dir(e.scalar(), index);
    return n;
}

int count_dir(const ScalarExpr& e, int index) {
    int n = 0;
    for (const auto& c : e.children()) n += count_dir(c, index);
    if (e.op() == ScalarOp::Trace || e.op() == ScalarOp::LogDet) n += count_dir(e.matrix(), index);
    return n;
}

int max_dir(const MatExpr& e) {
    int m = e.op() == MatOp::Dir ? e.dir_index() : 0;
    for (const auto& c : e.children()) m = std::max(m, max_dir(c));
    if (e.op() == MatOp::ScalarMul) m = std::max(m, max_dir(e.scalar()));
    return m;
}

int max_dir(const ScalarExpr& e) {
    int m = 0;
    for (const auto& c : e.children()) m = std::max(m, max_dir(c));
    if (e.op() == ScalarOp::Trace || e.op() == ScalarOp::LogDet) m = std::max(m, max_dir(e.matrix()));
    return m;
}

namespace {

struct SymbolCollector {
    std::vector<SymbolInfo> found;
    std::vector<std::string> under_inverse;

    void note(const MatExpr& e, bool inside) {
        const Role role = e.op() == MatOp::Const ? Role::Const : e.op() == MatOp::Var ? Role::Var : Role::Dir;
        if (std::none_of(found.begin(), found.end(), [&](const SymbolInfo& s) { return s.name == e.name(); }))
            found.push_back({e.name(), role, e.shape(), e.dir_index()});
        if (inside && std::find(under_inverse.begin(), under_inverse.end(), e.name()) == under_inverse.end())
            under_inverse.push_back(e.name());
    }

    void visit(const MatExpr& e, bool inside) {
        if (e.is_symbol()) {
            note(e, inside);
            return;
        }
        const bool in = inside || e.op() == MatOp::Inverse;
        if (e.op() == MatOp::ScalarMul) visit(e.scalar(), inside);
        for (const auto& c : e.children()) visit(c, in);
    }

    void visit(const ScalarExpr& e, bool inside) {
        if (e.op() == ScalarOp::Trace) visit(e.matrix(), inside);
        if (e.op() == ScalarOp::LogDet) visit(e.matrix(), true);
        for (const auto& c : e.children()) visit(c, inside);
    }
};

}  // namespace

std::vector<SymbolInfo> symbols(const MatExpr& e) {
    SymbolCollector c;
    c.visit(e, false);
    return c.found;
}

std::vector<SymbolInfo> symbols(const ScalarExpr& e) {
    SymbolCollector c;
    c.visit(e, false);
    return c.found;
}

std::vector<std::string> symbols_under_inverse(const MatExpr& e) {
    SymbolCollector c;
    c.visit(e, false);
    return c.under_inverse;
}

std::vector<std::string> symbols_under_inverse(const ScalarExpr& e) {
    SymbolCollector c;
    c.visit(e, false);
    return c.under_inverse;
}

}  // namespace mcalc::expr
