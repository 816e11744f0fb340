#include "mcalc/expr/format.hpp"

namespace mcalc::expr {

namespace {

// Printing contexts, from loosest to tightest binding.
enum class Ctx { Top, Sum, Sub, Factor, Postfix };

std::string paren_if(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

std::string rational_text(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

std::string fs(const ScalarExpr& e, Ctx ctx);

std::string fm(const MatExpr& e, Ctx ctx) {
    switch (e.op()) {
        case MatOp::Const:
        case MatOp::Var:
        case MatOp::Dir:
            return e.name();
        case MatOp::Identity:
            return "I(" + std::to_string(e.shape().rows) + ")";
        case MatOp::Zero:
            return "0";
        case MatOp::Add: {
            std::string s = fm(e.child(0), Ctx::Sum);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                const MatExpr& c = e.child(i);
                if (c.op() == MatOp::Neg)
                    s += " - " + fm(c.child(), Ctx::Sub);
                else
                    s += " + " + fm(c, Ctx::Sub);
            }
            return paren_if(ctx >= Ctx::Sub, s);
        }
        case MatOp::Neg:
            return paren_if(ctx >= Ctx::Factor, "-" + fm(e.child(), Ctx::Sub));
        case MatOp::ScalarMul:
            return paren_if(ctx >= Ctx::Factor, fs(e.scalar(), Ctx::Factor) + "*" + fm(e.child(), Ctx::Factor));
        case MatOp::MatMul:
            return paren_if(ctx >= Ctx::Postfix, fm(e.child(0), Ctx::Factor) + "*" + fm(e.child(1), Ctx::Factor));
        case MatOp::Transpose:
            return fm(e.child(), Ctx::Postfix) + "'";
        case MatOp::Inverse:
            return "inv(" + fm(e.child(), Ctx::Top) + ")";
    }
    return "?";
}

std::string fs(const ScalarExpr& e, Ctx ctx) {
    switch (e.op()) {
        case ScalarOp::Lit:
            return paren_if(e.value() < Rational(0) && ctx >= Ctx::Factor, rational_text(e.value()));
        case ScalarOp::Trace:
            return "tr(" + fm(e.matrix(), Ctx::Top) + ")";
        case ScalarOp::LogDet:
            return "logdet(" + fm(e.matrix(), Ctx::Top) + ")";
        case ScalarOp::Add: {
            std::string s = fs(e.child(0), Ctx::Sum);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                const ScalarExpr& c = e.child(i);
                if (c.op() == ScalarOp::Neg)
                    s += " - " + fs(c.child(), Ctx::Sub);
                else
                    s += " + " + fs(c, Ctx::Sub);
            }
            return paren_if(ctx >= Ctx::Sub, s);
        }
        case ScalarOp::Mul: {
            std::string s;
            for (std::size_t i = 0; i < e.children().size(); ++i)
                s += (i ? "*" : "") + fs(e.child(i), Ctx::Factor);
            return paren_if(ctx >= Ctx::Postfix, s);
        }
        case ScalarOp::Neg:
            return paren_if(ctx >= Ctx::Factor, "-" + fs(e.child(), Ctx::Sub));
    }
    return "?";
}

// ---------------------------------------------------------------------- LaTeX

std::string lm(const MatExpr& e, Ctx ctx);

std::string ls(const ScalarExpr& e, Ctx ctx) {
    switch (e.op()) {
        case ScalarOp::Lit: {
            const Rational& r = e.value();
            std::string s = r.denominator() == 1
                                ? std::to_string(boost::abs(r).numerator())
                                : "\\frac{" + std::to_string(boost::abs(r).numerator()) + "}{" +
                                      std::to_string(r.denominator()) + "}";
            return r < Rational(0) ? paren_if(ctx >= Ctx::Factor, "-" + s) : s;
        }
        case ScalarOp::Trace:
            return "\\operatorname{tr}\\{" + lm(e.matrix(), Ctx::Top) + "\\}";
        case ScalarOp::LogDet:
            return "\\log\\det\\left(" + lm(e.matrix(), Ctx::Top) + "\\right)";
        case ScalarOp::Add: {
            std::string s = ls(e.child(0), Ctx::Sum);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                const ScalarExpr& c = e.child(i);
                s += c.op() == ScalarOp::Neg ? " - " + ls(c.child(), Ctx::Sub) : " + " + ls(c, Ctx::Sub);
            }
            return paren_if(ctx >= Ctx::Sub, s);
        }
        case ScalarOp::Mul: {
            std::string s;
            for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? "\\," : "") + ls(e.child(i), Ctx::Factor);
            return paren_if(ctx >= Ctx::Postfix, s);
        }
        case ScalarOp::Neg:
            return paren_if(ctx >= Ctx::Factor, "-" + ls(e.child(), Ctx::Sub));
    }
    return "?";
}

std::string lm(const MatExpr& e, Ctx ctx) {
    switch (e.op()) {
        case MatOp::Const:
        case MatOp::Var:
        case MatOp::Dir:
            return e.name();
        case MatOp::Identity:
            return "I_{" + std::to_string(e.shape().rows) + "}";
        case MatOp::Zero:
            return "0";
        case MatOp::Add: {
            std::string s = lm(e.child(0), Ctx::Sum);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                const MatExpr& c = e.child(i);
                s += c.op() == MatOp::Neg ? " - " + lm(c.child(), Ctx::Sub) : " + " + lm(c, Ctx::Sub);
            }
            return paren_if(ctx >= Ctx::Sub, s);
        }
        case MatOp::Neg:
            return paren_if(ctx >= Ctx::Factor, "-" + lm(e.child(), Ctx::Sub));
        case MatOp::ScalarMul:
            return paren_if(ctx >= Ctx::Factor, ls(e.scalar(), Ctx::Factor) + "\\," + lm(e.child(), Ctx::Factor));
        case MatOp::MatMul:
            return paren_if(ctx >= Ctx::Postfix, lm(e.child(0), Ctx::Factor) + " " + lm(e.child(1), Ctx::Factor));
        case MatOp::Transpose:
            if (e.child().op() == MatOp::Inverse && e.child().child().is_symbol())
                return e.child().child().name() + "^{-T}";
            return lm(e.child(), Ctx::Postfix) + "^{T}";
        case MatOp::Inverse:
            if (e.child().is_symbol()) return e.child().name() + "^{-1}";
            return "\\left(" + lm(e.child(), Ctx::Top) + "\\right)^{-1}";
    }
    return "?";
}

}  // namespace

std::string format(const MatExpr& e) { return fm(e, Ctx::Top); }
std::string format(const ScalarExpr& e) { return fs(e, Ctx::Top); }

std::string format(const Expr& e) {
    return std::visit([](const auto& x) { return format(x); }, e);
}

std::string format_latex(const MatExpr& e) { return lm(e, Ctx::Top); }
std::string format_latex(const ScalarExpr& e) { return ls(e, Ctx::Top); }

}  // namespace mcalc::expr
