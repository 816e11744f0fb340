#include "mcalc/expr/simplify.hpp"

#include <optional>

namespace mcalc::expr {

namespace {

using nf::MatAtom;
using nf::Product;
using nf::ScalarAtom;
using nf::ScalarPoly;
using nf::ScalarTerm;

// A distinct atom product together with its (possibly multi-term) scalar coefficient.
struct Item {
    ScalarPoly coeff;
    Product product;
};

MatExpr atom_expr(const MatAtom& a) {
    MatExpr base = [&] {
        switch (a.kind) {
            case MatAtom::Kind::Inverse: return inverse(to_expr(*a.inner));
            case MatAtom::Kind::Dir: return dir(a.dir_index, a.shape);
            case MatAtom::Kind::Const: return mat_const(a.name, a.shape);
            case MatAtom::Kind::Var: break;
        }
        return var(a.name, a.shape);
    }();
    return a.transposed ? transpose(base) : base;
}

MatExpr product_expr(const Product& p, Shape shape) {
    if (p.empty()) return identity(shape.rows);
    std::vector<MatExpr> factors;
    factors.reserve(p.size());
    for (const auto& a : p) factors.push_back(atom_expr(a));
    return product(factors);
}

ScalarExpr scalar_atom_expr(const ScalarAtom& a) {
    if (a.kind == ScalarAtom::Kind::LogDet) return logdet(to_expr(*a.inner));
    return trace(product_expr(a.product, nf::product_shape(a.product, {1, 1})));
}

// |c| * atoms, literal omitted when it is 1
ScalarExpr monomial_expr(const Rational& abs_c, const nf::ScalarMonomial& atoms) {
    std::vector<ScalarExpr> factors;
    if (abs_c != Rational(1) || atoms.empty()) factors.push_back(lit(abs_c));
    for (const auto& a : atoms) factors.push_back(scalar_atom_expr(a));
    return smul(std::move(factors));
}

ScalarExpr term_expr(const ScalarTerm& t) {
    ScalarExpr e = monomial_expr(boost::abs(t.coeff), t.atoms);
    return t.coeff < Rational(0) ? sneg(e) : e;
}

MatExpr item_expr(const Item& it, Shape shape) {
    MatExpr m = product_expr(it.product, shape);
    if (it.coeff.terms.size() == 1) {
        const ScalarTerm& t = it.coeff.terms.front();
        const Rational c = boost::abs(t.coeff);
        MatExpr body = (c == Rational(1) && t.atoms.empty()) ? m : scale(monomial_expr(c, t.atoms), m);
        return t.coeff < Rational(0) ? neg(body) : body;
    }
    return scale(to_expr(it.coeff), m);
}

MatExpr factor_items(const std::vector<Item>& items, Shape shape);

// Pulls a shared trailing (right) or leading (left) atom out of every group
// of two or more items; nullopt when no such group exists.
std::optional<MatExpr> factor_side(const std::vector<Item>& items, Shape shape, bool right) {
    std::vector<int> group_of(items.size(), -1);
    std::vector<std::vector<std::size_t>> groups;
    auto end_atom = [&](std::size_t i) -> const MatAtom& {
        return right ? items[i].product.back() : items[i].product.front();
    };
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].product.empty()) continue;
        for (std::size_t g = 0; g < groups.size(); ++g)
            if (nf::compare(end_atom(groups[g].front()), end_atom(i)) == 0) {
                group_of[i] = static_cast<int>(g);
                groups[g].push_back(i);
                break;
            }
        if (group_of[i] < 0) {
            group_of[i] = static_cast<int>(groups.size());
            groups.push_back({i});
        }
    }
    if (std::none_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; }))
        return std::nullopt;

    std::vector<MatExpr> pieces;
    std::vector<bool> done(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (done[i]) continue;
        const int g = group_of[i];
        if (g < 0 || groups[g].size() < 2) {
            pieces.push_back(item_expr(items[i], shape));
            done[i] = true;
            continue;
        }
        const MatAtom atom = end_atom(i);
        std::vector<Item> rest;
        for (std::size_t j : groups[g]) {
            Item sub = items[j];
            if (right)
                sub.product.pop_back();
            else
                sub.product.erase(sub.product.begin());
            rest.push_back(std::move(sub));
            done[j] = true;
        }
        const Shape as = atom.effective_shape();
        if (right)
            pieces.push_back(product({factor_items(rest, {shape.rows, as.rows}), atom_expr(atom)}));
        else
            pieces.push_back(product({atom_expr(atom), factor_items(rest, {as.cols, shape.cols})}));
    }
    return pieces.size() == 1 ? pieces.front() : add(std::move(pieces));
}

MatExpr factor_items(const std::vector<Item>& items, Shape shape) {
    if (items.empty()) return zero(shape);
    if (items.size() == 1) return item_expr(items.front(), shape);
    if (auto e = factor_side(items, shape, true)) return *e;
    if (auto e = factor_side(items, shape, false)) return *e;
    std::vector<MatExpr> pieces;
    for (const auto& it : items) pieces.push_back(item_expr(it, shape));
    return add(std::move(pieces));
}

}  // namespace

MatExpr to_expr(const nf::MatPoly& p) {
    std::vector<Item> items;
    for (const auto& t : p.terms) {
        if (!items.empty() && nf::compare_products(items.back().product, t.product) == 0)
            items.back().coeff.terms.push_back({t.coeff, t.scalars});
        else
            items.push_back({ScalarPoly{{{t.coeff, t.scalars}}}, t.product});
    }
    return factor_items(items, p.shape);
}

ScalarExpr to_expr(const nf::ScalarPoly& p) {
    if (p.terms.empty()) return lit(0);

    // Lone traces of equal size are merged into one trace of a sum.
    auto trace_size = [&](const ScalarTerm& t) -> int {
        if (t.atoms.size() != 1 || t.atoms.front().kind != ScalarAtom::Kind::Trace) return 0;
        return nf::product_shape(t.atoms.front().product, {1, 1}).rows;
    };
    std::vector<int> size_count(1, 0);
    for (const auto& t : p.terms) {
        const int n = trace_size(t);
        if (n >= static_cast<int>(size_count.size())) size_count.resize(n + 1, 0);
        ++size_count[n];
    }

    std::vector<ScalarExpr> pieces;
    std::vector<bool> merged(size_count.size(), false);
    for (const auto& t : p.terms) {
        const int n = trace_size(t);
        if (n == 0 || size_count[n] < 2) {
            pieces.push_back(term_expr(t));
            continue;
        }
        if (merged[n]) continue;
        merged[n] = true;
        std::vector<Item> items;
        for (const auto& u : p.terms)
            if (trace_size(u) == n) items.push_back({ScalarPoly{{{u.coeff, {}}}}, u.atoms.front().product});
        pieces.push_back(trace(factor_items(items, {n, n})));
    }
    return pieces.size() == 1 ? pieces.front() : sadd(std::move(pieces));
}

MatExpr simplify(const MatExpr& e) { return to_expr(nf::normalize(e)); }
ScalarExpr simplify(const ScalarExpr& e) { return to_expr(nf::normalize(e)); }

bool equivalent(const MatExpr& a, const MatExpr& b) { return nf::normalize(a) == nf::normalize(b); }
bool equivalent(const ScalarExpr& a, const ScalarExpr& b) { return nf::normalize(a) == nf::normalize(b); }

}  // namespace mcalc::expr
