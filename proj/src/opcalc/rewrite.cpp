#include <algorithm>
#include <stdexcept>

#include "mcalc/error.hpp"
#include "mcalc/opcalc/opcalc.hpp"

namespace mcalc::opcalc {

namespace {

// A product of factors, outermost first.
using Factors = std::vector<Tree>;

// D of a single factor as a sum of products.
std::vector<Factors> d_tree(const Tree& t, const SpaceLabel& base);

std::vector<Factors> d_atom(const Atom& a, const SpaceLabel& base) {
    if (a.is_id()) return {};
    const FuncSymbol& f = a.func;
    if (!a.inner) {
        if (f.domain != base)
            throw SignatureMismatch("D" + f.name + " acts on " + f.domain.name + ", not on " + base.name);
        return {{Tree::leaf(Atom::deriv(f, a.order + 1))}};
    }
    const FuncSymbol& g = *a.inner;
    if (g.domain != base)
        throw SignatureMismatch("inner function " + g.name + " is not defined on " + base.name);
    Tree dg = Tree::leaf(Atom::deriv(g, 1));
    Tree outer = Tree::leaf(Atom::deriv(f, a.order + 1, g));
    if (a.order == 0) return {{outer, dg}};
    // D(D^k f o g) = (D^(k+1) f o g)(Dg (x) I), I on the k existing slots
    Tree id = Tree::leaf(Atom::id(Signature(static_cast<std::size_t>(a.order), f.domain)));
    return {{outer, Tree::tensor({dg, id})}};
}

std::vector<Factors> d_tree(const Tree& t, const SpaceLabel& base) {
    if (t.is_leaf()) return d_atom(t.atom, base);
    std::vector<Factors> out;
    for (std::size_t i = 0; i < t.parts.size(); ++i) {
        for (const Factors& alt : d_tree(t.parts[i], base)) {
            Factors result;
            // Outer factors of the derivative act on slot i only.
            for (std::size_t l = 0; l + 1 < alt.size(); ++l) {
                std::vector<Tree> parts;
                for (std::size_t j = 0; j < t.parts.size(); ++j)
                    parts.push_back(j == i ? alt[l] : Tree::leaf(Atom::id(t.parts[j].outputs())));
                result.push_back(Tree::tensor(std::move(parts)));
            }
            std::vector<Tree> parts = t.parts;
            parts[i] = alt.back();
            result.push_back(Tree::tensor(std::move(parts)));
            out.push_back(std::move(result));
        }
    }
    return out;
}

// ------------------------------------------------------------ normalization

using Chain = std::vector<Atom>;

Chain flat_chain(const Tree& t) {
    Chain out;
    for (const Atom& a : t.chain()) {
        if (a.is_id() && a.spaces.size() > 1) {
            for (const auto& s : a.spaces) out.push_back(Atom::id({s}));
        } else {
            out.push_back(a);
        }
    }
    return out;
}

bool pure_id(const Chain& c) {
    return std::all_of(c.begin(), c.end(), [](const Atom& a) { return a.is_id(); });
}

// (A (x) B)(C (x) D) = AC (x) BD where every slot pairing reduces to one atom.
std::optional<Chain> fuse(const Chain& left, const Chain& right) {
    Chain out;
    std::size_t pos = 0;
    for (const Atom& a : left) {
        const std::size_t n = a.inputs().size();
        if (pos + n > right.size()) return std::nullopt;
        if (a.is_id()) {
            out.push_back(right[pos]);
        } else {
            for (std::size_t j = pos; j < pos + n; ++j)
                if (!right[j].is_id()) return std::nullopt;
            out.push_back(a);
        }
        pos += n;
    }
    if (pos != right.size()) return std::nullopt;
    return out;
}

Tree to_tree(const Chain& c) {
    if (c.size() == 1) return Tree::leaf(c.front());
    std::vector<Tree> parts;
    for (const auto& a : c) parts.push_back(Tree::leaf(a));
    return Tree::tensor(std::move(parts));
}

OpTerm normalize_term(const OpTerm& t) {
    std::vector<Chain> chains;
    for (const auto& f : t.factors) chains.push_back(flat_chain(f));

    bool changed = true;
    while (changed && chains.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i + 1 < chains.size(); ++i) {
            if (auto fused = fuse(chains[i], chains[i + 1])) {
                chains[i] = std::move(*fused);
                chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                changed = true;
                break;
            }
        }
    }
    if (chains.size() > 1) {
        std::erase_if(chains, pure_id);
        if (chains.empty()) chains.push_back(flat_chain(t.factors.back()));
    }

    OpTerm out{t.coeff, {}};
    for (const auto& c : chains) out.factors.push_back(to_tree(c));
    return out;
}

bool same_key(const OpTerm& a, const OpTerm& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (std::size_t i = 0; i < a.factors.size(); ++i)
        if (compare(a.factors[i], b.factors[i]) != 0) return false;
    return true;
}

}  // namespace

OpSum differentiate_raw(const OpSum& s) {
    OpSum out{s.base, {}};
    for (const OpTerm& t : s.terms) {
        check_signature(t);
        for (std::size_t j = 0; j < t.factors.size(); ++j) {
            for (const Factors& alt : d_tree(t.factors[j], s.base)) {
                OpTerm nt{t.coeff, {}};
                nt.factors.insert(nt.factors.end(), t.factors.begin(), t.factors.begin() + static_cast<std::ptrdiff_t>(j));
                nt.factors.insert(nt.factors.end(), alt.begin(), alt.end());
                // factors right of the differentiated one let the new slot through
                for (std::size_t l = j + 1; l < t.factors.size(); ++l)
                    nt.factors.push_back(Tree::tensor({Tree::leaf(Atom::id({s.base})), t.factors[l]}));
                check_signature(nt);
                out.terms.push_back(std::move(nt));
            }
        }
    }
    return out;
}

OpSum normalize(const OpSum& s) {
    std::vector<OpTerm> terms;
    for (const auto& t : s.terms)
        if (t.coeff != 0) terms.push_back(normalize_term(t));
    std::stable_sort(terms.begin(), terms.end(),
                     [](const OpTerm& a, const OpTerm& b) { return compare_terms(a, b) < 0; });
    OpSum out{s.base, {}};
    for (auto& t : terms) {
        if (!out.terms.empty() && same_key(out.terms.back(), t))
            out.terms.back().coeff += t.coeff;
        else
            out.terms.push_back(std::move(t));
    }
    std::erase_if(out.terms, [](const OpTerm& t) { return t.coeff == 0; });
    return out;
}

OpSum differentiate(const OpSum& s) { return normalize(differentiate_raw(s)); }

OpSum composition_base(const FuncSymbol& f, const FuncSymbol& g) {
    if (g.codomain != f.domain)
        throw SignatureMismatch(g.name + " is valued in " + g.codomain.name + " but " + f.name + " is defined on " +
                                f.domain.name);
    OpTerm t{1, {Tree::leaf(Atom::deriv(f, 1, g)), Tree::leaf(Atom::deriv(g, 1))}};
    check_signature(t);
    return OpSum{g.domain, {std::move(t)}};
}

OpSum expand_composition(const FuncSymbol& f, const FuncSymbol& g, int k) {
    if (k < 1) throw std::invalid_argument("expansion order must be at least 1");
    OpSum s = normalize(composition_base(f, g));
    for (int i = 1; i < k; ++i) s = differentiate(s);
    return s;
}

std::vector<ExpansionStep> expand_trace(const FuncSymbol& f, const FuncSymbol& g, int k) {
    if (k < 1) throw std::invalid_argument("expansion order must be at least 1");
    std::vector<ExpansionStep> steps;
    OpSum base = composition_base(f, g);
    steps.push_back({1, base, normalize(base)});
    for (int i = 2; i <= k; ++i) {
        OpSum raw = differentiate_raw(steps.back().normalized);
        steps.push_back({i, raw, normalize(raw)});
    }
    return steps;
}

}  // namespace mcalc::opcalc
