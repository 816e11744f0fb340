#include "mcalc/expr/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "mcalc/error.hpp"

namespace mcalc::expr {

// ------------------------------------------------------------- declarations

void SymbolTable::declare(const SymbolDecl& d) {
    if (const SymbolDecl* old = find(d.name)) {
        if (old->role != d.role || old->shape != d.shape)
            throw Error("symbol '" + d.name + "' redeclared with a different shape or role");
        return;
    }
    decls_.push_back(d);
}

const SymbolDecl* SymbolTable::find(std::string_view name) const {
    for (const auto& d : decls_)
        if (d.name == name) return &d;
    return nullptr;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

SymbolDecl parse_decl(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw SyntaxError(1, 1, "NAME:RxC:{const|var|dir}");

    SymbolDecl d;
    d.name = std::string(text.substr(0, c1));
    if (d.name.empty() || !is_ident_start(d.name[0]) ||
        !std::all_of(d.name.begin(), d.name.end(), is_ident_char))
        throw SyntaxError(1, 1, "identifier");

    const std::string_view dims = text.substr(c1 + 1, c2 - c1 - 1);
    const auto x = dims.find('x');
    auto read_int = [&](std::string_view s, int col) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 1)
            throw SyntaxError(1, col, "positive integer dimension");
        return v;
    };
    if (x == std::string_view::npos) throw SyntaxError(1, static_cast<int>(c1) + 2, "RxC");
    const int rows = read_int(dims.substr(0, x), static_cast<int>(c1) + 2);
    const int cols = read_int(dims.substr(x + 1), static_cast<int>(c1 + x) + 3);
    d.shape = make_shape(rows, cols);

    const std::string_view role = text.substr(c2 + 1);
    if (role == "const")
        d.role = Role::Const;
    else if (role == "var")
        d.role = Role::Var;
    else if (role == "dir")
        d.role = Role::Dir;
    else
        throw SyntaxError(1, static_cast<int>(c2) + 2, "const, var or dir");

    if (d.role == Role::Dir && !direction_index(d.name))
        throw Error("direction symbol '" + d.name + "' must be one of Z, T, Z3, Z4, ...");
    if (d.role != Role::Dir && direction_index(d.name))
        throw Error("'" + d.name + "' is reserved for directions");
    if (d.name == "tr" || d.name == "logdet" || d.name == "inv")
        throw Error("'" + d.name + "' is a reserved word");
    return d;
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const SymbolTable& decls) : text_(text), decls_(decls) {}

    Expr parse_all() {
        Expr e = expr();
        skip_ws();
        if (pos_ < text_.size()) fail("operator or end of input");
        return e;
    }

private:
    std::string_view text_;
    const SymbolTable& decls_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected, std::size_t at) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SyntaxError(line, col, expected);
    }
    [[noreturn]] void fail(const std::string& expected) const { fail(expected, pos_); }

    std::string where(std::size_t at) const { return "col " + std::to_string(at + 1) + ": "; }

    // Runs a builder, prefixing shape errors with the source column.
    template <class F>
    auto build(std::size_t at, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ShapeMismatch& e) {
            throw ShapeMismatch(where(at) + e.path(), e.expected(), e.found());
        } catch (const NonSquare& e) {
            throw NonSquare(where(at) + e.path());
        }
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    static bool is_mat(const Expr& e) { return std::holds_alternative<MatExpr>(e); }

    Expr negate(Expr e) {
        if (is_mat(e)) return neg(std::get<MatExpr>(std::move(e)));
        return sneg(std::get<ScalarExpr>(std::move(e)));
    }

    Expr expr() {
        const std::size_t start = pos_;
        std::vector<Expr> terms;
        terms.push_back(term());
        for (;;) {
            const char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            Expr t = term();
            terms.push_back(c == '-' ? negate(std::move(t)) : std::move(t));
        }
        if (terms.size() == 1) return std::move(terms.front());

        const bool mat = is_mat(terms.front());
        for (std::size_t i = 1; i < terms.size(); ++i)
            if (is_mat(terms[i]) != mat)
                throw ShapeMismatch(where(start) + "Add[" + std::to_string(i) + "]",
                                    mat ? "matrix" : "scalar", mat ? "scalar" : "matrix");
        if (mat) {
            std::vector<MatExpr> ms;
            for (auto& t : terms) ms.push_back(std::get<MatExpr>(std::move(t)));
            return build(start, [&] { return add(std::move(ms)); });
        }
        std::vector<ScalarExpr> ss;
        for (auto& t : terms) ss.push_back(std::get<ScalarExpr>(std::move(t)));
        return sadd(std::move(ss));
    }

    Expr term() {
        const std::size_t start = pos_;
        if (accept('-')) return negate(term());

        std::vector<ScalarExpr> scalars;
        std::vector<MatExpr> mats;
        auto push = [&](Expr f) {
            if (is_mat(f))
                mats.push_back(std::get<MatExpr>(std::move(f)));
            else
                scalars.push_back(std::get<ScalarExpr>(std::move(f)));
        };
        push(factor());
        while (accept('*')) push(factor());

        if (mats.empty()) return smul(std::move(scalars));
        MatExpr m = build(start, [&] { return product(mats); });
        if (scalars.empty()) return m;
        return scale(smul(std::move(scalars)), std::move(m));
    }

    Expr factor() {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return negate(factor());
        }
        if (is_digit(c)) return rational();
        return matom();
    }

    std::int64_t integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (start == pos_) fail("integer");
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc{}) fail("integer in range", start);
        return v;
    }

    Expr rational() {
        const std::int64_t num = integer();
        if (peek() != '/') return lit(num);
        ++pos_;
        const std::size_t at = pos_;
        const std::int64_t den = integer();
        if (den == 0) fail("non-zero denominator", at);
        return lit(num, den);
    }

    Expr postfix(Expr e) {
        while (peek() == '\'') {
            const std::size_t at = pos_;
            ++pos_;
            if (!is_mat(e)) fail("matrix operand before transpose", at);
            e = transpose(std::get<MatExpr>(std::move(e)));
        }
        return e;
    }

    MatExpr matrix_arg(const char* what) {
        expect('(');
        skip_ws();
        const std::size_t inner = pos_;
        Expr e = expr();
        expect(')');
        if (!is_mat(e)) fail(std::string("matrix argument to ") + what, inner);
        return std::get<MatExpr>(std::move(e));
    }

    Expr matom() {
        skip_ws();
        const std::size_t start = pos_;
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return postfix(std::move(e));
        }
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("operand");
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        if (peek() == '(') {
            if (name == "tr") {
                MatExpr m = matrix_arg("tr");
                return build(start, [&] { return trace(m); });
            }
            if (name == "logdet") {
                MatExpr m = matrix_arg("logdet");
                return build(start, [&] { return logdet(m); });
            }
            if (name == "inv") {
                MatExpr m = matrix_arg("inv");
                return postfix(build(start, [&] { return inverse(m); }));
            }
            if (name == "I") {
                ++pos_;
                const std::size_t at = pos_;
                const std::int64_t n = integer();
                if (n < 1 || n > std::numeric_limits<int>::max()) fail("positive identity size", at);
                expect(')');
                return postfix(identity(static_cast<int>(n)));
            }
        }
        if (name == "tr" || name == "logdet" || name == "inv") fail("'(' after " + name);

        const SymbolDecl* d = decls_.find(name);
        if (!d) throw UnknownSymbol(name);
        MatExpr sym = [&] {
            switch (d->role) {
                case Role::Const: return mat_const(d->name, d->shape);
                case Role::Var: return var(d->name, d->shape);
                case Role::Dir: break;
            }
            return dir(*direction_index(d->name), d->shape);
        }();
        return postfix(std::move(sym));
    }
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& decls) { return Parser(text, decls).parse_all(); }

MatExpr parse_matrix(std::string_view text, const SymbolTable& decls) {
    Expr e = parse(text, decls);
    if (auto* m = std::get_if<MatExpr>(&e)) return *m;
    throw Error("expected a matrix-valued expression, got a scalar");
}

ScalarExpr parse_scalar(std::string_view text, const SymbolTable& decls) {
    Expr e = parse(text, decls);
    if (auto* s = std::get_if<ScalarExpr>(&e)) return *s;
    throw Error("expected a scalar-valued expression, got a matrix");
}

}  // namespace mcalc::expr
