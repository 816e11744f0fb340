#include <cstdlib>

#include "mcalc/opcalc/opcalc.hpp"

namespace mcalc::opcalc {

namespace {

struct Glyphs {
    const char* compose;
    const char* tensor;
    const char* juxtapose;
    const char* open_group;
    const char* close_group;
};

Glyphs glyphs(Style style) {
    switch (style) {
        case Style::Ascii: return {" . ", " (x) ", "", "[", "]"};
        case Style::Latex: return {" \\circ ", " \\otimes ", "\\,", "\\big[", "\\big]"};
        case Style::Unicode: break;
    }
    return {"∘", "⊗", "", "[", "]"};
}

std::string deriv_text(int order, const std::string& name, Style style) {
    if (order == 0) return name;
    if (order == 1) return "D" + name;
    const std::string k = std::to_string(order);
    switch (style) {
        case Style::Ascii: return "D^" + k + " " + name;
        case Style::Latex: return (order > 9 ? "D^{" + k + "}" : "D^" + k) + name;
        case Style::Unicode: break;
    }
    return "D^" + k + name;
}

std::string atom_text(const Atom& a, Style style) {
    if (a.is_id()) return "I";
    std::string s = deriv_text(a.order, a.func.name, style);
    if (a.inner) s = "(" + s + glyphs(style).compose + a.inner->name + ")";
    return s;
}

std::string coeff_prefix(std::int64_t c) {
    if (c == 1) return "";
    if (c == -1) return "-";
    return std::to_string(c);
}

std::string factors_text(const std::vector<Tree>& fs, std::size_t from, Style style) {
    std::string s;
    for (std::size_t i = from; i < fs.size(); ++i) s += (i > from ? glyphs(style).juxtapose : "") + format_factor(fs[i], style);
    return s;
}

// Joins signed pieces as "a + b - c".
std::string join_signed(const std::vector<std::pair<std::int64_t, std::string>>& pieces) {
    std::string s;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& [c, body] = pieces[i];
        const std::int64_t mag = std::llabs(c);
        const std::string text = (mag == 1 ? "" : std::to_string(mag)) + body;
        if (i == 0)
            s += (c < 0 ? "-" : "") + text;
        else
            s += (c < 0 ? " - " : " + ") + text;
    }
    return s;
}

}  // namespace

std::string format_factor(const Tree& f, Style style) {
    if (f.is_leaf()) return atom_text(f.atom, style);
    std::string s = "(";
    for (std::size_t i = 0; i < f.parts.size(); ++i) s += (i ? glyphs(style).tensor : "") + format_factor(f.parts[i], style);
    return s + ")";
}

std::string format_term(const OpTerm& t, Style style) { return coeff_prefix(t.coeff) + factors_text(t.factors, 0, style); }

std::string format_sum(const OpSum& s, Style style, bool group) {
    if (s.terms.empty()) return "0";
    const Glyphs g = glyphs(style);
    std::vector<std::pair<std::int64_t, std::string>> pieces;
    std::size_t i = 0;
    while (i < s.terms.size()) {
        const OpTerm& t = s.terms[i];
        std::size_t j = i + 1;
        if (group && t.factors.size() >= 2)
            while (j < s.terms.size() && s.terms[j].factors.size() >= 2 &&
                   compare(s.terms[j].factors.front(), t.factors.front()) == 0)
                ++j;
        if (j - i >= 2) {
            std::vector<std::pair<std::int64_t, std::string>> inner;
            for (std::size_t l = i; l < j; ++l) inner.push_back({s.terms[l].coeff, factors_text(s.terms[l].factors, 1, style)});
            pieces.push_back({1, format_factor(t.factors.front(), style) + g.juxtapose + g.open_group + join_signed(inner) + g.close_group});
        } else {
            pieces.push_back({t.coeff, factors_text(t.factors, 0, style)});
        }
        i = j;
    }
    return join_signed(pieces);
}

}  // namespace mcalc::opcalc
