#include "mcalc/frechet/frechet.hpp"

#include <algorithm>

#include "mcalc/error.hpp"
#include "mcalc/expr/normal_form.hpp"
#include "mcalc/expr/simplify.hpp"

namespace mcalc::frechet {

using namespace expr;

namespace {

struct Target {
    std::string name;
    Shape shape;
    int k;
};

MatExpr dm(const MatExpr& e, const Target& x);
ScalarExpr ds(const ScalarExpr& e, const Target& x);

MatExpr sum_or_zero(std::vector<MatExpr> terms, Shape shape) {
    if (terms.empty()) return zero(shape);
    return add(std::move(terms));
}

ScalarExpr sum_or_zero(std::vector<ScalarExpr> terms) {
    if (terms.empty()) return lit(0);
    return sadd(std::move(terms));
}

MatExpr dm(const MatExpr& e, const Target& x) {
    switch (e.op()) {
        case MatOp::Var:
            if (e.name() == x.name) return dir(x.k, e.shape());
            return zero(e.shape());
        case MatOp::Const:
        case MatOp::Dir:
        case MatOp::Identity:
        case MatOp::Zero:
            return zero(e.shape());
        case MatOp::Add: {
            std::vector<MatExpr> terms;
            for (const auto& c : e.children())
                if (MatExpr dc = dm(c, x); !is_zero(dc)) terms.push_back(dc);
            return sum_or_zero(std::move(terms), e.shape());
        }
        case MatOp::Neg: {
            MatExpr dc = dm(e.child(), x);
            return is_zero(dc) ? dc : neg(dc);
        }
        case MatOp::ScalarMul: {
            std::vector<MatExpr> terms;
            if (ScalarExpr dsc = ds(e.scalar(), x); !is_zero(dsc)) terms.push_back(scale(dsc, e.child()));
            if (MatExpr dc = dm(e.child(), x); !is_zero(dc)) terms.push_back(scale(e.scalar(), dc));
            return sum_or_zero(std::move(terms), e.shape());
        }
        case MatOp::MatMul: {
            const MatExpr& p = e.child(0);
            const MatExpr& q = e.child(1);
            std::vector<MatExpr> terms;
            if (MatExpr dp = dm(p, x); !is_zero(dp)) terms.push_back(matmul(dp, q));
            if (MatExpr dq = dm(q, x); !is_zero(dq)) terms.push_back(matmul(p, dq));
            return sum_or_zero(std::move(terms), e.shape());
        }
        case MatOp::Transpose: {
            MatExpr dc = dm(e.child(), x);
            return is_zero(dc) ? zero(e.shape()) : transpose(dc);
        }
        case MatOp::Inverse: {
            MatExpr dc = dm(e.child(), x);
            if (is_zero(dc)) return zero(e.shape());
            return neg(matmul(e, matmul(dc, e)));
        }
    }
    throw UnsupportedNode("no differentiation rule for " + std::string(to_string(e.op())));
}

ScalarExpr ds(const ScalarExpr& e, const Target& x) {
    switch (e.op()) {
        case ScalarOp::Lit:
            return lit(0);
        case ScalarOp::Trace: {
            MatExpr dc = dm(e.matrix(), x);
            if (is_zero(dc)) return lit(0);
            if (dc.op() != MatOp::Add) return trace(dc);
            std::vector<ScalarExpr> terms;
            for (const auto& c : dc.children())
                terms.push_back(c.op() == MatOp::Neg ? sneg(trace(c.child())) : trace(c));
            return sadd(std::move(terms));
        }
        case ScalarOp::LogDet: {
            MatExpr dc = dm(e.matrix(), x);
            if (is_zero(dc)) return lit(0);
            return trace(matmul(inverse(e.matrix()), dc));
        }
        case ScalarOp::Add: {
            std::vector<ScalarExpr> terms;
            for (const auto& c : e.children())
                if (ScalarExpr dc = ds(c, x); !is_zero(dc)) terms.push_back(dc);
            return sum_or_zero(std::move(terms));
        }
        case ScalarOp::Mul: {
            std::vector<ScalarExpr> terms;
            const auto kids = e.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                ScalarExpr dc = ds(kids[i], x);
                if (is_zero(dc)) continue;
                std::vector<ScalarExpr> factors(kids.begin(), kids.end());
                factors[i] = dc;
                terms.push_back(smul(std::move(factors)));
            }
            return sum_or_zero(std::move(terms));
        }
        case ScalarOp::Neg: {
            ScalarExpr dc = ds(e.child(), x);
            return is_zero(dc) ? dc : sneg(dc);
        }
    }
    throw UnsupportedNode("no differentiation rule for " + std::string(to_string(e.op())));
}

template <class E>
Target resolve(const E& e, const std::string& x, int k, std::optional<Shape> x_shape) {
    if (k < 1) throw Error("direction index must be at least 1");
    if (count_dir(e, k) > 0)
        throw Error("direction " + direction_name(k) + " already occurs in the expression");
    for (const auto& s : symbols(e)) {
        if (s.name != x) continue;
        if (s.role != Role::Var) throw Error("'" + x + "' is not a variable of the expression");
        if (x_shape && *x_shape != s.shape)
            throw ShapeMismatch("variable " + x, x_shape->to_string(), s.shape.to_string());
        return {x, s.shape, k};
    }
    if (!x_shape) throw Error("variable '" + x + "' does not occur and has no declared shape");
    return {x, *x_shape, k};
}

Shape var_shape(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape) {
    return resolve(f, x, max_dir(f) + 1, x_shape).shape;
}

// Reversed product with every atom transposed: the transpose of a product.
nf::Product reflect(const nf::Product& p) {
    nf::Product r(p.rbegin(), p.rend());
    for (auto& a : r) a.transposed = !a.transposed;
    return r;
}

}  // namespace

MatExpr d(const MatExpr& e, const std::string& x, int k, std::optional<Shape> x_shape) {
    return dm(e, resolve(e, x, k, x_shape));
}

ScalarExpr d(const ScalarExpr& e, const std::string& x, int k, std::optional<Shape> x_shape) {
    return ds(e, resolve(e, x, k, x_shape));
}

DirectionalDerivative derivative(const Expr& e, const std::string& x, int k, std::optional<Shape> x_shape) {
    Expr out = std::visit([&](const auto& v) -> Expr { return d(v, x, k, x_shape); }, e);
    return {std::move(out), x, k};
}

ScalarExpr second_derivative(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape) {
    const Shape s = var_shape(f, x, x_shape);
    return d(d(f, x, 1, s), x, 2, s);
}

MatExpr read_off(const ScalarExpr& linear_in_z, Shape z_shape) {
    const nf::ScalarPoly poly = nf::normalize(linear_in_z);
    nf::MatPoly g{z_shape, {}};
    for (const auto& term : poly.terms) {
        int total = 0;
        for (const auto& a : term.atoms) total += nf::count_dir(a, 1);
        if (total != 1) throw NotReducible("a term holds the direction Z " + std::to_string(total) + " times");

        nf::MatTerm out{term.coeff, {}, {}};
        bool found = false;
        for (const auto& a : term.atoms) {
            if (nf::count_dir(a, 1) == 0) {
                out.scalars.push_back(a);
                continue;
            }
            if (a.kind != nf::ScalarAtom::Kind::Trace || nf::count_dir_top(a.product, 1) != 1)
                throw NotReducible("the direction Z is not a top-level trace factor");
            const auto& p = a.product;
            const auto it = std::find_if(p.begin(), p.end(), [](const nf::MatAtom& m) {
                return m.kind == nf::MatAtom::Kind::Dir && m.dir_index == 1;
            });
            // tr(Z' R) reads off R; tr(Z R) = tr(Z' R') reads off R'.
            nf::Product rest(it + 1, p.end());
            rest.insert(rest.end(), p.begin(), it);
            out.product = it->transposed ? rest : reflect(rest);
            found = true;
        }
        if (!found) throw NotReducible("no trace holds the direction Z");
        g.terms.push_back(std::move(out));
    }
    if (g.terms.empty()) return zero(z_shape);
    return simplify(to_expr(g));
}

MatExpr gradient(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape) {
    const Shape s = var_shape(f, x, x_shape);
    return read_off(d(f, x, 1, s), s);
}

HessianOperator hessian(const ScalarExpr& f, const std::string& x, std::optional<Shape> x_shape) {
    const Shape s = var_shape(f, x, x_shape);
    return {read_off(second_derivative(f, x, s), s), x};
}

}  // namespace mcalc::frechet
