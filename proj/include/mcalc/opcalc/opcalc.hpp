#pragma once

// Operator calculus over uninterpreted function symbols. A term is a product
// of factors read right to left (the rightmost factor acts first); each factor
// is a tensor product of atoms. Atoms are derivatives D^k f, possibly composed
// with an inner function (D^k f o g), or identities.
//
// Derivative slots: D^k g at X acts on U (x) ... (x) U with U the domain of g.
// Differentiating a term prepends one U slot to its input signature.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcalc::opcalc {

struct SpaceLabel {
    std::string name;

    friend bool operator==(const SpaceLabel&, const SpaceLabel&) = default;
    friend auto operator<=>(const SpaceLabel&, const SpaceLabel&) = default;
};

using Signature = std::vector<SpaceLabel>;

struct FuncSymbol {
    std::string name;
    SpaceLabel domain;
    SpaceLabel codomain;

    friend bool operator==(const FuncSymbol&, const FuncSymbol&) = default;
};

struct Atom {
    enum class Kind { Deriv, Id };

    Kind kind = Kind::Deriv;
    FuncSymbol func;                  ///< Deriv only
    int order = 0;                    ///< 0 is the function itself
    std::optional<FuncSymbol> inner;  ///< composedWith
    Signature spaces;                 ///< Id only: the spaces it acts on

    static Atom deriv(const FuncSymbol& f, int order, std::optional<FuncSymbol> inner = {});
    static Atom func_of(const FuncSymbol& f, std::optional<FuncSymbol> inner = {});
    static Atom id(Signature spaces);

    bool is_id() const noexcept { return kind == Kind::Id; }
    Signature inputs() const;
    Signature outputs() const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// A factor: one atom, or a tensor product of sub-factors. Tensor products
/// made by differentiation may nest; normalized terms hold flat chains.
struct Tree {
    Atom atom;                ///< meaningful when parts is empty
    std::vector<Tree> parts;  ///< tensor factors, at least two when non-empty

    static Tree leaf(Atom a);
    static Tree tensor(std::vector<Tree> parts);

    bool is_leaf() const noexcept { return parts.empty(); }
    /// Flattened atom list, left to right.
    std::vector<Atom> chain() const;
    Signature inputs() const;
    Signature outputs() const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

struct OpTerm {
    std::int64_t coeff = 1;
    std::vector<Tree> factors;  ///< non-empty; factors[0] is the outermost

    Signature inputs() const;
    Signature outputs() const;

    friend bool operator==(const OpTerm&, const OpTerm&) = default;
};

struct OpSum {
    SpaceLabel base;  ///< the space differentiation acts on
    std::vector<OpTerm> terms;

    friend bool operator==(const OpSum&, const OpSum&) = default;
};

/// Throws SignatureMismatch unless each factor's outputs equal the inputs of
/// the factor to its left.
void check_signature(const OpTerm& t);

// ------------------------------------------------------------------ rewriting

/// One application of D with product, tensor and chain rules, unnormalized.
OpSum differentiate_raw(const OpSum& s);
/// normalize(differentiate_raw(s)).
OpSum differentiate(const OpSum& s);

/// Flattens tensor products, splits identities into single slots, fuses
/// adjacent factors where slots align, drops identity factors, collects like
/// terms and sorts them by the canonical key. Idempotent.
OpSum normalize(const OpSum& s);

/// (Df o g) Dg, the first derivative of f o g.
OpSum composition_base(const FuncSymbol& f, const FuncSymbol& g);

/// D^k (f o g) in normal form. Throws SignatureMismatch when g's codomain is
/// not f's domain.
OpSum expand_composition(const FuncSymbol& f, const FuncSymbol& g, int k);

/// Every intermediate step of expand_composition: raw and normalized sums for
/// orders 1..k (the order-1 raw sum is the base case).
struct ExpansionStep {
    int order;
    OpSum raw;
    OpSum normalized;
};
std::vector<ExpansionStep> expand_trace(const FuncSymbol& f, const FuncSymbol& g, int k);

/// Canonical ordering (negative, zero, positive).
int compare(const Atom& a, const Atom& b);
int compare(const Tree& a, const Tree& b);
int compare_terms(const OpTerm& a, const OpTerm& b);

// ------------------------------------------------------------------ printing

enum class Style { Unicode, Ascii, Latex };

/// Normalized sums print with a shared outer factor pulled out in brackets,
/// e.g. "(D^2f∘g)[(D^2g⊗Dg) + 2(Dg⊗D^2g)]". Raw sums print nested tensors
/// as they stand, e.g. "(D^3f∘g)(Dg⊗I)(I⊗(Dg⊗Dg))".
std::string format_term(const OpTerm& t, Style style = Style::Unicode);
std::string format_sum(const OpSum& s, Style style = Style::Unicode, bool group = true);
std::string format_factor(const Tree& f, Style style = Style::Unicode);

}  // namespace mcalc::opcalc
