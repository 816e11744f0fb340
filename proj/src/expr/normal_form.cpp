#include "mcalc/expr/normal_form.hpp"

#include <algorithm>
#include <stdexcept>

#include "mcalc/error.hpp"

namespace mcalc::expr::nf {

namespace {

int sign_of(long long a, long long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int compare_rational(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

int compare_base(const MatAtom& a, const MatAtom& b) {
    if (a.kind != b.kind) return sign_of(static_cast<int>(a.kind), static_cast<int>(b.kind));
    if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
    if (int c = sign_of(a.dir_index, b.dir_index)) return c;
    if (int c = sign_of(a.shape.rows, b.shape.rows)) return c;
    if (int c = sign_of(a.shape.cols, b.shape.cols)) return c;
    if (a.kind == MatAtom::Kind::Inverse) return compare(*a.inner, *b.inner);
    return 0;
}

}  // namespace

int compare(const MatAtom& a, const MatAtom& b) {
    if (int c = compare_base(a, b)) return c;
    return sign_of(a.transposed, b.transposed);
}

int compare_products(const Product& a, const Product& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare_base(a[i], b[i])) return c;
    if (a.size() != b.size()) return sign_of(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i].transposed != b[i].transposed) return sign_of(a[i].transposed, b[i].transposed);
    return 0;
}

int compare(const ScalarAtom& a, const ScalarAtom& b) {
    if (a.kind != b.kind) return sign_of(static_cast<int>(a.kind), static_cast<int>(b.kind));
    if (a.kind == ScalarAtom::Kind::Trace) return compare_products(a.product, b.product);
    return compare(*a.inner, *b.inner);
}

int compare(const ScalarMonomial& a, const ScalarMonomial& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a[i], b[i])) return c;
    return sign_of(a.size(), b.size());
}

int compare(const MatPoly& a, const MatPoly& b) {
    if (int c = sign_of(a.shape.rows, b.shape.rows)) return c;
    if (int c = sign_of(a.shape.cols, b.shape.cols)) return c;
    if (int c = sign_of(a.terms.size(), b.terms.size())) return c;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto& x = a.terms[i];
        const auto& y = b.terms[i];
        if (int c = compare_products(x.product, y.product)) return c;
        if (int c = compare(x.scalars, y.scalars)) return c;
        if (int c = compare_rational(x.coeff, y.coeff)) return c;
    }
    return 0;
}

int compare(const ScalarPoly& a, const ScalarPoly& b) {
    if (int c = sign_of(a.terms.size(), b.terms.size())) return c;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (int c = compare(a.terms[i].atoms, b.terms[i].atoms)) return c;
        if (int c = compare_rational(a.terms[i].coeff, b.terms[i].coeff)) return c;
    }
    return 0;
}

bool operator==(const MatPoly& a, const MatPoly& b) { return compare(a, b) == 0; }
bool operator==(const ScalarPoly& a, const ScalarPoly& b) { return compare(a, b) == 0; }

Shape product_shape(const Product& p, Shape fallback) {
    if (p.empty()) return fallback;
    return {p.front().effective_shape().rows, p.back().effective_shape().cols};
}

// ------------------------------------------------------------------- helpers

namespace {

void collect(MatPoly& p) {
    auto key = [](const MatTerm& x, const MatTerm& y) {
        if (int c = compare_products(x.product, y.product)) return c;
        return compare(x.scalars, y.scalars);
    };
    std::stable_sort(p.terms.begin(), p.terms.end(),
                     [&](const MatTerm& x, const MatTerm& y) { return key(x, y) < 0; });
    std::vector<MatTerm> out;
    for (auto& t : p.terms) {
        if (!out.empty() && key(out.back(), t) == 0)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const MatTerm& t) { return t.coeff == Rational(0); });
    p.terms = std::move(out);
}

void collect(ScalarPoly& p) {
    std::stable_sort(p.terms.begin(), p.terms.end(),
                     [](const ScalarTerm& x, const ScalarTerm& y) { return compare(x.atoms, y.atoms) < 0; });
    std::vector<ScalarTerm> out;
    for (auto& t : p.terms) {
        if (!out.empty() && compare(out.back().atoms, t.atoms) == 0)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const ScalarTerm& t) { return t.coeff == Rational(0); });
    p.terms = std::move(out);
}

ScalarMonomial merge(const ScalarMonomial& a, const ScalarMonomial& b) {
    ScalarMonomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
               [](const ScalarAtom& x, const ScalarAtom& y) { return compare(x, y) < 0; });
    return out;
}

MatAtom flipped(MatAtom a) {
    if (!a.symmetric) a.transposed = !a.transposed;
    return a;
}

Product reflect(const Product& p) {
    Product out;
    out.reserve(p.size());
    for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(flipped(*it));
    return out;
}

// `inv` is the inverse atom of the plain symbol atom `a`, with matching transposes.
bool inverts(const MatAtom& inv, const MatAtom& a) {
    if (inv.kind != MatAtom::Kind::Inverse || a.kind == MatAtom::Kind::Inverse) return false;
    if (inv.transposed != a.transposed) return false;
    const MatPoly& in = *inv.inner;
    if (in.terms.size() != 1) return false;
    const MatTerm& t = in.terms.front();
    if (t.coeff != Rational(1) || !t.scalars.empty() || t.product.size() != 1) return false;
    const MatAtom& s = t.product.front();
    return !s.transposed && compare_base(s, a) == 0;
}

bool cancels(const MatAtom& x, const MatAtom& y) { return inverts(x, y) || inverts(y, x); }

void cancel_linear(Product& p) {
    std::size_t i = 0;
    while (i + 1 < p.size()) {
        if (cancels(p[i], p[i + 1])) {
            p.erase(p.begin() + static_cast<long>(i), p.begin() + static_cast<long>(i) + 2);
            i = i > 0 ? i - 1 : 0;
        } else {
            ++i;
        }
    }
}

void cancel_cyclic(Product& p) {
    for (;;) {
        cancel_linear(p);
        if (p.size() >= 2 && cancels(p.back(), p.front())) {
            p.pop_back();
            p.erase(p.begin());
            continue;
        }
        return;
    }
}

MatPoly single(Shape shape, Rational c, Product product) {
    MatPoly p{shape, {}};
    if (c != Rational(0)) p.terms.push_back({c, {}, std::move(product)});
    return p;
}

MatPoly scaled(MatPoly p, const Rational& c) {
    for (auto& t : p.terms) t.coeff *= c;
    std::erase_if(p.terms, [](const MatTerm& t) { return t.coeff == Rational(0); });
    return p;
}

MatPoly sum(MatPoly a, const MatPoly& b) {
    if (a.shape != b.shape) throw ShapeMismatch("normal form Add", a.shape.to_string(), b.shape.to_string());
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    collect(a);
    return a;
}

MatPoly mul(const MatPoly& a, const MatPoly& b) {
    if (a.shape.cols != b.shape.rows)
        throw ShapeMismatch("normal form MatMul", std::to_string(a.shape.cols), std::to_string(b.shape.rows));
    MatPoly out{{a.shape.rows, b.shape.cols}, {}};
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            Product prod = x.product;
            prod.insert(prod.end(), y.product.begin(), y.product.end());
            cancel_linear(prod);
            out.terms.push_back({x.coeff * y.coeff, merge(x.scalars, y.scalars), std::move(prod)});
        }
    collect(out);
    return out;
}

MatPoly scale(const ScalarPoly& s, const MatPoly& m) {
    MatPoly out{m.shape, {}};
    for (const auto& a : s.terms)
        for (const auto& t : m.terms) out.terms.push_back({a.coeff * t.coeff, merge(a.atoms, t.scalars), t.product});
    collect(out);
    return out;
}

MatAtom inverse_atom(const MatPoly& core) {
    MatAtom a;
    a.kind = MatAtom::Kind::Inverse;
    a.shape = core.shape;
    MatPoly t = transpose(core);
    const int c = compare(t, core);
    a.symmetric = c == 0;
    if (c < 0) {
        a.inner = std::make_shared<const MatPoly>(std::move(t));
        a.transposed = true;
    } else {
        a.inner = std::make_shared<const MatPoly>(core);
    }
    return a;
}

MatPoly inverse(const MatPoly& p) {
    const Shape s = p.shape;
    if (p.terms.size() == 1 && p.terms.front().scalars.empty()) {
        const MatTerm& t = p.terms.front();
        const Rational inv_c = Rational(1) / t.coeff;
        if (t.product.empty()) return single(s, inv_c, {});
        if (t.product.size() == 1 && t.product.front().kind == MatAtom::Kind::Inverse) {
            const MatAtom& a = t.product.front();
            return scaled(a.transposed ? transpose(*a.inner) : *a.inner, inv_c);
        }
        const bool all_square = std::all_of(t.product.begin(), t.product.end(),
                                            [](const MatAtom& a) { return a.shape.square(); });
        if (t.product.size() >= 2 && all_square) {
            // (a1 ... an)^-1 = an^-1 ... a1^-1 when every factor is square
            MatPoly out = single(s, inv_c, {});
            for (auto it = t.product.rbegin(); it != t.product.rend(); ++it)
                out = mul(out, inverse(single(it->effective_shape(), 1, {*it})));
            return out;
        }
        return single(s, inv_c, {inverse_atom(single(s, 1, t.product))});
    }
    return single(s, 1, {inverse_atom(p)});
}

ScalarPoly trace(const MatPoly& p) {
    if (!p.shape.square()) throw NonSquare("normal form Trace");
    ScalarPoly out;
    for (const auto& t : p.terms) {
        Product prod = t.product;
        cancel_cyclic(prod);
        if (prod.empty()) {
            out.terms.push_back({t.coeff * p.shape.rows, t.scalars});
            continue;
        }
        ScalarAtom a;
        a.kind = ScalarAtom::Kind::Trace;
        a.product = canonical_trace(prod);
        out.terms.push_back({t.coeff, merge(t.scalars, {a})});
    }
    collect(out);
    return out;
}

ScalarPoly logdet(const MatPoly& p) {
    if (!p.shape.square()) throw NonSquare("normal form LogDet");
    if (p.terms.size() == 1) {
        const MatTerm& t = p.terms.front();
        if (t.coeff == Rational(1) && t.scalars.empty()) {
            if (t.product.empty()) return {};
            if (t.product.size() == 1 && t.product.front().kind == MatAtom::Kind::Inverse) {
                // log det(M^-1) = -log det M on the domain det M > 0
                ScalarPoly inner = logdet(*t.product.front().inner);
                for (auto& x : inner.terms) x.coeff = -x.coeff;
                return inner;
            }
        }
    }
    ScalarAtom a;
    a.kind = ScalarAtom::Kind::LogDet;
    MatPoly t = transpose(p);
    a.inner = std::make_shared<const MatPoly>(compare(t, p) < 0 ? std::move(t) : p);
    return {{{Rational(1), {a}}}};
}

ScalarPoly sum(ScalarPoly a, const ScalarPoly& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    collect(a);
    return a;
}

ScalarPoly mul(const ScalarPoly& a, const ScalarPoly& b) {
    ScalarPoly out;
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) out.terms.push_back({x.coeff * y.coeff, merge(x.atoms, y.atoms)});
    collect(out);
    return out;
}

MatAtom symbol_atom(const MatExpr& e) {
    MatAtom a;
    a.kind = e.op() == MatOp::Dir ? MatAtom::Kind::Dir
             : e.op() == MatOp::Const ? MatAtom::Kind::Const
                                      : MatAtom::Kind::Var;
    a.name = e.name();
    a.dir_index = e.dir_index();
    a.shape = e.shape();
    return a;
}

}  // namespace

MatPoly transpose(const MatPoly& p) {
    MatPoly out{p.shape.transposed(), {}};
    out.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) out.terms.push_back({t.coeff, t.scalars, reflect(t.product)});
    collect(out);
    return out;
}

Product canonical_trace(const Product& p) {
    if (p.empty()) throw std::invalid_argument("canonical_trace of an empty product");
    Product best = p;
    for (const Product& orient : {p, reflect(p)}) {
        Product r = orient;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (compare_products(r, best) < 0) best = r;
            std::rotate(r.begin(), r.begin() + 1, r.end());
        }
    }
    return best;
}

int count_dir_top(const Product& p, int index) {
    return static_cast<int>(std::count_if(p.begin(), p.end(), [&](const MatAtom& a) {
        return a.kind == MatAtom::Kind::Dir && a.dir_index == index;
    }));
}

int count_dir(const MatAtom& a, int index) {
    if (a.kind == MatAtom::Kind::Dir) return a.dir_index == index ? 1 : 0;
    if (a.kind == MatAtom::Kind::Inverse) return count_dir(*a.inner, index);
    return 0;
}

int count_dir(const ScalarAtom& a, int index) {
    if (a.kind == ScalarAtom::Kind::LogDet) return count_dir(*a.inner, index);
    int n = 0;
    for (const auto& m : a.product) n += count_dir(m, index);
    return n;
}

int count_dir(const MatPoly& p, int index) {
    int n = 0;
    for (const auto& t : p.terms) {
        for (const auto& s : t.scalars) n += count_dir(s, index);
        for (const auto& m : t.product) n += count_dir(m, index);
    }
    return n;
}

MatPoly normalize(const MatExpr& e) {
    const Shape s = e.shape();
    switch (e.op()) {
        case MatOp::Const:
        case MatOp::Var:
        case MatOp::Dir:
            return single(s, 1, {symbol_atom(e)});
        case MatOp::Identity:
            return single(s, 1, {});
        case MatOp::Zero:
            return {s, {}};
        case MatOp::Add: {
            MatPoly acc{s, {}};
            for (const auto& c : e.children()) acc = sum(std::move(acc), normalize(c));
            return acc;
        }
        case MatOp::Neg:
            return scaled(normalize(e.child()), -1);
        case MatOp::ScalarMul:
            return scale(normalize(e.scalar()), normalize(e.child()));
        case MatOp::MatMul:
            return mul(normalize(e.child(0)), normalize(e.child(1)));
        case MatOp::Transpose:
            return transpose(normalize(e.child()));
        case MatOp::Inverse:
            return inverse(normalize(e.child()));
    }
    throw UnsupportedNode("unknown matrix node");
}

ScalarPoly normalize(const ScalarExpr& e) {
    switch (e.op()) {
        case ScalarOp::Lit:
            if (e.value() == Rational(0)) return {};
            return {{{e.value(), {}}}};
        case ScalarOp::Trace:
            return trace(normalize(e.matrix()));
        case ScalarOp::LogDet:
            return logdet(normalize(e.matrix()));
        case ScalarOp::Add: {
            ScalarPoly acc;
            for (const auto& c : e.children()) acc = sum(std::move(acc), normalize(c));
            return acc;
        }
        case ScalarOp::Mul: {
            ScalarPoly acc{{{Rational(1), {}}}};
            for (const auto& c : e.children()) acc = mul(acc, normalize(c));
            return acc;
        }
        case ScalarOp::Neg: {
            ScalarPoly p = normalize(e.child());
            for (auto& t : p.terms) t.coeff = -t.coeff;
            return p;
        }
    }
    throw UnsupportedNode("unknown scalar node");
}

}  // namespace mcalc::expr::nf
