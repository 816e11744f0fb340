#include "mcalc/cli/cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "mcalc/error.hpp"
#include "mcalc/expr/format.hpp"
#include "mcalc/expr/parse.hpp"
#include "mcalc/expr/simplify.hpp"
#include "mcalc/frechet/frechet.hpp"
#include "mcalc/numcheck/counterexample.hpp"
#include "mcalc/opcalc/opcalc.hpp"

namespace mcalc::cli {

using namespace expr;

namespace {

struct Options {
    std::string text;
    std::string wrt = "X";
    int order = 1;
    std::vector<std::string> syms;
    int samples = 50;
    std::uint64_t seed = 0;
    std::string format = "text";
    int n_max = 1000;
    double perturb = 0;
    bool trace = false;
};

const std::vector<std::string> kDefaultSymbols = {"A:3x3:const", "B:3x3:const", "X:3x3:var"};

// User declarations first; defaults fill names the user left free, then the
// direction symbols take the shape of the differentiation variable.
SymbolTable make_session(const Options& o) {
    SymbolTable t;
    for (const auto& s : o.syms) t.declare(parse_decl(s));
    for (const auto& s : kDefaultSymbols) {
        SymbolDecl d = parse_decl(s);
        if (!t.find(d.name)) t.declare(d);
    }
    const SymbolDecl* x = t.find(o.wrt);
    if (!x) throw UnknownSymbol(o.wrt);
    if (x->role != Role::Var) throw Error("'" + o.wrt + "' is not declared as a variable");
    for (int k = 1; k <= 3; ++k) {
        const std::string name = direction_name(k);
        if (!t.find(name)) t.declare({name, Role::Dir, x->shape});
    }
    return t;
}

Shape wrt_shape(const SymbolTable& t, const std::string& x) { return t.find(x)->shape; }

void print_expr(std::ostream& out, const Expr& e, const std::string& fmt, const std::string& latex_prefix = {},
                const std::string& text_prefix = {}) {
    if (fmt == "json") {
        out << to_json(e).dump() << '\n';
    } else if (fmt == "latex") {
        out << latex_prefix
            << std::visit([](const auto& v) { return format_latex(v); }, e) << '\n';
    } else {
        out << text_prefix << expr::format(e) << '\n';
    }
}

int cmd_diff(const Options& o, std::ostream& out) {
    if (o.order < 1 || o.order > 3) throw CLI::ValidationError("--order", "must be 1, 2 or 3");
    const SymbolTable t = make_session(o);
    const Shape s = wrt_shape(t, o.wrt);
    Expr e = parse(o.text, t);
    for (int k = 1; k <= o.order; ++k) e = frechet::derivative(e, o.wrt, k, s).expr;
    print_expr(out, std::visit([](const auto& v) -> Expr { return simplify(v); }, e), o.format);
    return Ok;
}

int cmd_grad(const Options& o, std::ostream& out) {
    const SymbolTable t = make_session(o);
    const ScalarExpr f = parse_scalar(o.text, t);
    print_expr(out, frechet::gradient(f, o.wrt, wrt_shape(t, o.wrt)), o.format);
    return Ok;
}

int cmd_hess(const Options& o, std::ostream& out) {
    const SymbolTable t = make_session(o);
    const ScalarExpr f = parse_scalar(o.text, t);
    const auto h = frechet::hessian(f, o.wrt, wrt_shape(t, o.wrt));
    print_expr(out, h.expr, o.format, "T \\mapsto ", "T ↦ ");
    return Ok;
}

opcalc::Style style_of(const std::string& format) {
    if (format == "latex") return opcalc::Style::Latex;
    if (format == "ascii") return opcalc::Style::Ascii;
    return opcalc::Style::Unicode;
}

nlohmann::ordered_json sum_json(const opcalc::OpSum& s) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : s.terms) {
        nlohmann::ordered_json factors = nlohmann::ordered_json::array();
        for (const auto& f : t.factors) factors.push_back(opcalc::format_factor(f));
        terms.push_back({{"coeff", t.coeff}, {"factors", factors}});
    }
    return terms;
}

int cmd_expand(const Options& o, std::ostream& out) {
    int k = o.order;
    if (!o.text.empty()) {
        try {
            std::size_t used = 0;
            k = std::stoi(o.text, &used);
            if (used != o.text.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw CLI::ValidationError("ORDER", "expected a positive integer, got '" + o.text + "'");
        }
    }
    if (k < 1) throw CLI::ValidationError("ORDER", "must be at least 1");
    const opcalc::FuncSymbol g{"g", {"U"}, {"V"}};
    const opcalc::FuncSymbol f{"f", {"V"}, {"W"}};
    const auto style = style_of(o.format);

    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["order"] = k;
        const auto s = opcalc::expand_composition(f, g, k);
        j["text"] = opcalc::format_sum(s);
        j["terms"] = sum_json(s);
        if (o.trace) {
            nlohmann::ordered_json steps = nlohmann::ordered_json::array();
            for (const auto& st : opcalc::expand_trace(f, g, k))
                steps.push_back({{"order", st.order},
                                 {"raw", opcalc::format_sum(st.raw, opcalc::Style::Unicode, false)},
                                 {"normalized", opcalc::format_sum(st.normalized)}});
            j["trace"] = steps;
        }
        out << j.dump() << '\n';
        return Ok;
    }
    if (o.trace) {
        for (const auto& st : opcalc::expand_trace(f, g, k)) {
            out << "order " << st.order << " raw:        " << opcalc::format_sum(st.raw, style, false) << '\n';
            out << "order " << st.order << " normalized: " << opcalc::format_sum(st.normalized, style) << '\n';
        }
        return Ok;
    }
    out << opcalc::format_sum(opcalc::expand_composition(f, g, k), style) << '\n';
    return Ok;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.samples < 1) throw CLI::ValidationError("--samples", "must be at least 1");
    const SymbolTable t = make_session(o);
    const ScalarExpr f = parse_scalar(o.text, t);
    VerifyOptions vo;
    vo.samples = o.samples;
    vo.seed = o.seed;
    vo.perturb = o.perturb;
    const auto reports = verify_expression(f, o.wrt, wrt_shape(t, o.wrt), vo);
    for (const auto& r : reports) out << numcheck::to_json_line(r) << '\n';
    const bool ok = numcheck::all_pass(reports);
    err << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? Ok : VerificationFailed;
}

int cmd_counterexample(const Options& o, std::ostream& out) {
    if (o.n_max < 10) throw CLI::ValidationError("--n-max", "must be at least 10");
    const auto rep = numcheck::counterexample_demo(o.n_max, o.seed);
    for (const auto& r : rep.checks) out << numcheck::to_json_line(r) << '\n';
    nlohmann::ordered_json summary;
    summary["name"] = "counterexample_summary";
    summary["gateaux_zero"] = rep.gateaux_zero;
    summary["frechet_fails"] = rep.frechet_fails;
    summary["verdict"] = rep.verdict;
    out << summary.dump() << '\n';
    return rep.pass() ? Ok : VerificationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coordinate-free matrix calculus: derivatives, gradients, Hessians and their numerical checks", "mcalc"};
    app.require_subcommand(1);
    Options o;

    auto add_format = [&](CLI::App* c, std::vector<std::string> allowed) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(allowed)));
    };
    auto add_session = [&](CLI::App* c) {
        c->add_option("--wrt", o.wrt, "Variable to differentiate against");
        c->add_option("--sym", o.syms, "Symbol declaration NAME:RxC:{const|var|dir} (repeatable)");
    };

    auto* diff = app.add_subcommand("diff", "Directional derivative of order 1..3 (directions Z, T, Z3)");
    diff->add_option("expr", o.text, "Expression")->required();
    add_session(diff);
    diff->add_option("--order", o.order, "Derivative order (1..3)");
    add_format(diff, {"text", "json", "latex"});

    auto* grad = app.add_subcommand("grad", "Gradient G with Df(X)Z = tr(Z'G)");
    grad->add_option("expr", o.text, "Scalar expression")->required();
    add_session(grad);
    add_format(grad, {"text", "json", "latex"});

    auto* hess = app.add_subcommand("hess", "Hessian operator T -> H(T)");
    hess->add_option("expr", o.text, "Scalar expression")->required();
    add_session(hess);
    add_format(hess, {"text", "json", "latex"});

    auto* expand = app.add_subcommand("expand", "Operator expansion of D^k(f o g)");
    expand->add_option("k", o.text, "Order k");
    expand->add_option("--order", o.order, "Order k (when not given positionally)");
    expand->add_flag("--trace", o.trace, "Print every raw and normalized step");
    add_format(expand, {"text", "ascii", "json", "latex"});

    auto* verify = app.add_subcommand("verify", "Finite-difference verification of a scalar expression");
    verify->add_option("expr", o.text, "Scalar expression")->required();
    add_session(verify);
    verify->add_option("--samples", o.samples, "Random instances");
    verify->add_option("--seed", o.seed, "Random seed");
    verify->add_option("--perturb", o.perturb, "Test hook: corrupt symbolic values by this relative amount");
    add_format(verify, {"text", "json"});

    auto* counter = app.add_subcommand("counterexample", "Gateaux-but-not-Frechet demonstration");
    counter->add_option("--n-max", o.n_max, "Largest sequence index");
    counter->add_option("--seed", o.seed, "Random seed for the rays");
    add_format(counter, {"text", "json"});

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : UsageError;
    }

    try {
        if (*diff) return cmd_diff(o, out);
        if (*grad) return cmd_grad(o, out);
        if (*hess) return cmd_hess(o, out);
        if (*expand) return cmd_expand(o, out);
        if (*verify) return cmd_verify(o, out, err);
        if (*counter) return cmd_counterexample(o, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return UsageError;
    } catch (const mcalc::Error& e) {
        err << "error: " << e.what() << '\n';
        return UsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return UsageError;
    }
    return UsageError;
}

}  // namespace mcalc::cli
