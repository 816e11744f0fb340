#include "mcalc/opcalc/opcalc.hpp"

#include <stdexcept>

#include "mcalc/error.hpp"

namespace mcalc::opcalc {

namespace {

int sign_of(auto a, auto b) { return a < b ? -1 : (b < a ? 1 : 0); }

void append(Signature& to, const Signature& from) { to.insert(to.end(), from.begin(), from.end()); }

std::string describe(const Signature& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "⊗" : "") + s[i].name;
    return out.empty() ? "()" : out;
}

}  // namespace

// ---------------------------------------------------------------------- atoms

Atom Atom::deriv(const FuncSymbol& f, int order, std::optional<FuncSymbol> inner) {
    if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
    if (inner && inner->codomain != f.domain)
        throw SignatureMismatch("cannot compose " + f.name + ": " + f.domain.name + " with " + inner->name +
                                " valued in " + inner->codomain.name);
    Atom a;
    a.kind = Kind::Deriv;
    a.func = f;
    a.order = order;
    a.inner = std::move(inner);
    return a;
}

Atom Atom::func_of(const FuncSymbol& f, std::optional<FuncSymbol> inner) { return deriv(f, 0, std::move(inner)); }

Atom Atom::id(Signature spaces) {
    if (spaces.empty()) throw std::invalid_argument("identity on no spaces");
    Atom a;
    a.kind = Kind::Id;
    a.spaces = std::move(spaces);
    return a;
}

Signature Atom::inputs() const {
    if (is_id()) return spaces;
    return Signature(static_cast<std::size_t>(order), func.domain);
}

Signature Atom::outputs() const {
    if (is_id()) return spaces;
    return {func.codomain};
}

// ---------------------------------------------------------------------- trees

Tree Tree::leaf(Atom a) { return Tree{std::move(a), {}}; }

Tree Tree::tensor(std::vector<Tree> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    if (parts.empty()) throw std::invalid_argument("empty tensor product");
    return Tree{Atom{}, std::move(parts)};
}

std::vector<Atom> Tree::chain() const {
    if (is_leaf()) return {atom};
    std::vector<Atom> out;
    for (const auto& p : parts) {
        auto c = p.chain();
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

Signature Tree::inputs() const {
    if (is_leaf()) return atom.inputs();
    Signature s;
    for (const auto& p : parts) append(s, p.inputs());
    return s;
}

Signature Tree::outputs() const {
    if (is_leaf()) return atom.outputs();
    Signature s;
    for (const auto& p : parts) append(s, p.outputs());
    return s;
}

Signature OpTerm::inputs() const { return factors.back().inputs(); }
Signature OpTerm::outputs() const { return factors.front().outputs(); }

void check_signature(const OpTerm& t) {
    if (t.factors.empty()) throw SignatureMismatch("term without factors");
    for (std::size_t i = 0; i + 1 < t.factors.size(); ++i) {
        const Signature in = t.factors[i].inputs();
        const Signature out = t.factors[i + 1].outputs();
        if (in != out)
            throw SignatureMismatch("factor " + std::to_string(i + 1) + " produces " + describe(out) +
                                    " but factor " + std::to_string(i) + " expects " + describe(in));
    }
}

// ------------------------------------------------------------------- ordering

int compare(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return a.kind == Atom::Kind::Deriv ? -1 : 1;
    if (a.is_id()) {
        if (a.spaces == b.spaces) return 0;
        return a.spaces < b.spaces ? -1 : 1;
    }
    if (int c = sign_of(b.order, a.order)) return c;  // higher order first
    if (int c = a.func.name.compare(b.func.name)) return c < 0 ? -1 : 1;
    if (a.inner.has_value() != b.inner.has_value()) return a.inner ? 1 : -1;
    if (a.inner)
        if (int c = a.inner->name.compare(b.inner->name)) return c < 0 ? -1 : 1;
    return 0;
}

int compare(const Tree& a, const Tree& b) {
    if (a.is_leaf() && b.is_leaf()) return compare(a.atom, b.atom);
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
    const std::size_t n = std::min(a.parts.size(), b.parts.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.parts[i], b.parts[i])) return c;
    return sign_of(a.parts.size(), b.parts.size());
}

int compare_terms(const OpTerm& a, const OpTerm& b) {
    auto outer = [](const OpTerm& t) {
        const Atom first = t.factors.front().chain().front();
        return first.is_id() ? -1 : first.order;
    };
    if (int c = sign_of(outer(b), outer(a))) return c;
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.factors[i], b.factors[i])) return c;
    return sign_of(a.factors.size(), b.factors.size());
}

}  // namespace mcalc::opcalc
