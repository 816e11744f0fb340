// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "corpus.hpp"
#include "mcalc/cli/cli.hpp"
#include "mcalc/error.hpp"
#include "mcalc/expr/env.hpp"
#include "mcalc/expr/format.hpp"
#include "mcalc/expr/simplify.hpp"
#include "mcalc/frechet/frechet.hpp"
#include "mcalc/numcheck/bound.hpp"
#include "mcalc/numcheck/counterexample.hpp"
#include "mcalc/numcheck/fd.hpp"
#include "mcalc/opcalc/evaluate.hpp"
#include "mcalc/opcalc/opcalc.hpp"
#include "oracles.hpp"

using namespace mcalc;
using namespace mcalc::expr;
using opcalc::PolyMap;
using opcalc::Vector;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string run_cli(std::vector<std::string> args, int* code = nullptr) {
    std::ostringstream out, err;
    const int c = cli::run_cli(args, out, err);
    if (code) *code = c;
    return out.str();
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

const opcalc::SpaceLabel U{"U"}, V{"V"}, W{"W"};
const opcalc::FuncSymbol g_sym{"g", U, V};
const opcalc::FuncSymbol f_sym{"f", V, W};

// ------------------------------------------------------------------ criteria

Outcome golden_expansions() {
    using namespace opcalc;
    Outcome o;
    auto dg = [](int k) { return Tree::leaf(Atom::deriv(g_sym, k)); };
    auto df = [](int k) { return Tree::leaf(Atom::deriv(f_sym, k, g_sym)); };
    const std::vector<OpTerm> e1 = {{1, {df(1), dg(1)}}};
    const std::vector<OpTerm> e2 = {{1, {df(2), Tree::tensor({dg(1), dg(1)})}}, {1, {df(1), dg(2)}}};
    const std::vector<OpTerm> e3 = {{1, {df(3), Tree::tensor({dg(1), dg(1), dg(1)})}},
                                    {1, {df(2), Tree::tensor({dg(2), dg(1)})}},
                                    {2, {df(2), Tree::tensor({dg(1), dg(2)})}},
                                    {1, {df(1), dg(3)}}};
    o.require(expand_composition(f_sym, g_sym, 1).terms == e1, "k=1 differs");
    o.require(expand_composition(f_sym, g_sym, 2).terms == e2, "k=2 differs");
    o.require(expand_composition(f_sym, g_sym, 3).terms == e3, "k=3 differs");
    o.require(run_cli({"expand", "1"}) == "(Df∘g)Dg\n", "expand 1 text");
    o.require(run_cli({"expand", "2"}) == "(D^2f∘g)(Dg⊗Dg) + (Df∘g)D^2g\n", "expand 2 text");
    o.require(run_cli({"expand", "3"}) ==
                  "(D^3f∘g)(Dg⊗Dg⊗Dg) + (D^2f∘g)[(D^2g⊗Dg) + 2(Dg⊗D^2g)] + (Df∘g)D^3g\n",
              "expand 3 text");
    o.detail = o.pass ? "k=1,2,3 exact, coefficient 2 on Dg⊗D^2g" : o.detail;
    return o;
}

Outcome intermediate_fidelity() {
    using namespace opcalc;
    Outcome o;
    auto dg = [](int k) { return Tree::leaf(Atom::deriv(g_sym, k)); };
    auto df = [](int k) { return Tree::leaf(Atom::deriv(f_sym, k, g_sym)); };
    const Tree iu = Tree::leaf(Atom::id({U}));
    const Tree iv = Tree::leaf(Atom::id({V}));
    const Tree ivv = Tree::leaf(Atom::id({V, V}));
    const OpSum raw = expand_trace(f_sym, g_sym, 3)[2].raw;
    const std::vector<OpTerm> wanted = {
        {1, {df(3), Tree::tensor({dg(1), ivv}), Tree::tensor({iu, Tree::tensor({dg(1), dg(1)})})}},
        {1, {df(2), Tree::tensor({dg(2), dg(1)})}},
        {1, {df(2), Tree::tensor({dg(1), dg(2)})}},
        {1, {df(2), Tree::tensor({dg(1), iv}), Tree::tensor({iu, dg(2)})}},
        {1, {df(1), dg(3)}}};
    for (const auto& t : wanted)
        o.require(std::find(raw.terms.begin(), raw.terms.end(), t) != raw.terms.end(), "missing " + format_term(t));
    o.require(raw.terms.size() == wanted.size(), "unexpected extra raw terms");
    const std::string text = run_cli({"expand", "3", "--trace"});
    o.require(text.find("(D^3f∘g)(Dg⊗I)(I⊗(Dg⊗Dg))") != std::string::npos, "trace text lacks the nested factor pair");
    if (o.pass) o.detail = "four additive terms present, (Dg⊗I)(I⊗(Dg⊗Dg)) kept unfused";
    return o;
}

Outcome rayleigh_suite() {
    Outcome o;
    o.require(run_cli({"diff", "tr(X'*A*X)", "--wrt", "X"}) == "tr(Z'*(A + A')*X)\n", "diff text");
    o.require(run_cli({"grad", "tr(X'*A*X)", "--wrt", "X"}) == "(A + A')*X\n", "grad text");
    o.require(run_cli({"hess", "tr(X'*A*X)", "--wrt", "X"}) == "T ↦ (A + A')*T\n", "hess text");
    double worst = 0;
    for (const Shape xs : {Shape{3, 3}, Shape{3, 2}}) {
        SymbolTable t;
        t.declare({"A", Role::Const, {3, 3}});
        t.declare({"X", Role::Var, xs});
        t.declare({"Z", Role::Dir, xs});
        t.declare({"T", Role::Dir, xs});
        const ScalarExpr f = parse_scalar("tr(X'*A*X)", t);
        const ScalarExpr df = frechet::d(f, "X", 1);
        const MatExpr g = frechet::gradient(f, "X");
        const MatExpr h = frechet::hessian(f, "X").expr;
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto rng = sample_rng(2024, i);
            Env env;
            env.bind("A", random_matrix({3, 3}, Draw::Gaussian, rng));
            env.bind("X", random_matrix(xs, Draw::Gaussian, rng));
            const Matrix z = random_matrix(xs, Draw::Gaussian, rng);
            const Matrix tt = random_matrix(xs, Draw::Gaussian, rng);
            env.bind("Z", z);
            env.bind("T", tt);
            const Matrix x = env.at("X");
            const Matrix a = env.at("A");
            auto fn = [&](const Matrix& p) { return oracle::rayleigh_triple_sum(p, a); };
            const double fd1 = numcheck::fd_directional(fn, x, z, numcheck::fd_step_first(x));
            const double sym1 = evaluate(df, env);
            const double grad1 = (z.transpose() * evaluate(g, env)).trace();
            const double fd2 = numcheck::fd_second(fn, x, z, tt, numcheck::fd_step_second(x));
            const double hess2 = (z.transpose() * evaluate(h, env)).trace();
            worst = std::max({worst, std::abs(fd1 - sym1) / std::abs(sym1), std::abs(fd1 - grad1) / std::abs(grad1),
                              std::abs(fd2 - hess2) / std::abs(hess2)});
        }
    }
    o.require(worst <= 1e-6, "FD relative error " + sci(worst));
    if (o.pass) o.detail = "symbolic forms exact; worst FD relative error " + sci(worst) + " over 200 instances";
    return o;
}

Outcome logdet_suite() {
    Outcome o;
    SymbolTable t;
    t.declare({"X", Role::Var, {4, 4}});
    t.declare({"Z", Role::Dir, {4, 4}});
    const ScalarExpr f = parse_scalar("logdet(X)", t);
    const ScalarExpr df = frechet::d(f, "X", 1);
    const MatExpr g = frechet::gradient(f, "X");
    o.require(equivalent(df, parse_scalar("tr(inv(X)*Z)", t)), "Df(X)Z is not tr(inv(X)*Z)");
    o.require(equivalent(g, parse_matrix("inv(X)'", t)), "gradient is not inv(X)'");
    double worst = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto rng = sample_rng(77, i);
        Env env;
        env.bind("X", random_spd(4, rng));
        const Matrix z = random_matrix({4, 4}, Draw::Gaussian, rng);
        env.bind("Z", z);
        const Matrix x = env.at("X");
        auto fn = [](const Matrix& p) { return std::log(p.determinant()); };
        const double fd = numcheck::fd_directional(fn, x, z, numcheck::fd_step_first(x));
        const double sym = evaluate(df, env);
        const double viag = (z.transpose() * evaluate(g, env)).trace();
        worst = std::max({worst, std::abs(fd - sym) / std::abs(sym), std::abs(fd - viag) / std::abs(viag)});
    }
    o.require(worst <= 1e-7, "FD relative error " + sci(worst));
    if (o.pass) o.detail = "tr(inv(X)*Z) and inv(X)' exact; worst FD relative error " + sci(worst);
    return o;
}

Outcome hessian_symmetry() {
    Outcome o;
    double worst = 0;
    for (const auto& fn : corpus::scalar_functions()) {
        const ScalarExpr f = corpus::parse(fn);
        const Shape xs = corpus::wrt_shape(fn);
        const ScalarExpr b = frechet::second_derivative(f, fn.wrt, xs);
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto rng = sample_rng(555, i);
            Env env;
            bind_random(env, symbols(f), symbols_under_inverse(f), rng);
            const Matrix z = random_matrix(xs, Draw::Gaussian, rng);
            const Matrix t = random_matrix(xs, Draw::Gaussian, rng);
            env.bind("Z", z);
            env.bind("T", t);
            const double bzt = evaluate(b, env);
            env.bind("Z", t);
            env.bind("T", z);
            const double btz = evaluate(b, env);
            const double e = std::abs(bzt - btz) / (1 + std::abs(bzt));
            worst = std::max(worst, e);
            if (e > 1e-8) o.require(false, fn.text + ": " + sci(e));
        }
    }
    if (o.pass)
        o.detail = std::to_string(corpus::scalar_functions().size()) + " functions x 100 triples; worst " + sci(worst);
    return o;
}

Outcome order_k_oracle() {
    Outcome o;
    double worst_exact = 0, worst_diag = 0, worst_fd = 0;
    std::normal_distribution<double> n01;
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto rng = sample_rng(31337, i);
        const int nu = 1 + static_cast<int>(rng() % 4), nv = 1 + static_cast<int>(rng() % 4),
                  nw = 1 + static_cast<int>(rng() % 4);
        const opcalc::Bindings b{{"g", PolyMap::random(nu, nv, 3, rng)}, {"f", PolyMap::random(nv, nw, 3, rng)}};
        const PolyMap& g = b.at("g");
        const PolyMap& f = b.at("f");
        auto rv = [&](int n) { return Vector(Vector::NullaryExpr(n, [&] { return n01(rng); })); };
        const Vector x = rv(nu);
        std::vector<Vector> z;
        for (int k = 0; k < 4; ++k) z.push_back(rv(nu));

        for (int k = 1; k <= 3; ++k) {
            const opcalc::OpSum s = opcalc::expand_composition(f_sym, g_sym, k);
            const std::vector<Vector> zk(z.begin(), z.begin() + k);
            const Vector ref = oracle::composition_derivative(f, g, x, zk);
            worst_exact = std::max(worst_exact, oracle::rel_diff(opcalc::evaluate_symmetrized(s, b, x, zk), ref));
            const std::vector<Vector> same(static_cast<std::size_t>(k), z[0]);
            const Vector ref_same = oracle::composition_derivative(f, g, x, same);
            worst_diag = std::max(worst_diag, oracle::rel_diff(opcalc::evaluate_term(s, b, x, same), ref_same));
        }
        // k = 4: exact third derivative differenced once along z4.
        const opcalc::OpSum s4 = opcalc::expand_composition(f_sym, g_sym, 4);
        const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1 + x.norm());
        const std::vector<Vector> z3(z.begin(), z.begin() + 3);
        const Vector ref4 = (oracle::composition_derivative(f, g, Vector(x + h * z[3]), z3) -
                             oracle::composition_derivative(f, g, Vector(x - h * z[3]), z3)) /
                            (2 * h);
        worst_fd = std::max(worst_fd, oracle::rel_diff(opcalc::evaluate_symmetrized(s4, b, x, z), ref4));
    }
    o.require(worst_exact <= 1e-6, "k<=3 relative error " + sci(worst_exact));
    o.require(worst_diag <= 1e-6, "k<=3 repeated-direction relative error " + sci(worst_diag));
    o.require(worst_fd <= 1e-4, "k=4 relative error " + sci(worst_fd));
    if (o.pass)
        o.detail = "20 cubic bindings, dims<=4; k<=3 worst " + sci(std::max(worst_exact, worst_diag)) + ", k=4 worst " +
                   sci(worst_fd);
    return o;
}

Outcome counterexample() {
    Outcome o;
    const auto rep = numcheck::counterexample_demo(1000, 4242, 32);
    int rays = 0;
    for (const auto& r : rep.checks) {
        if (r.name.rfind("gateaux_ray_", 0) == 0) {
            ++rays;
            o.require(std::abs(r.estimate) < 1e-12, r.name + " estimate " + sci(r.estimate));
        }
        if (r.name == "remainder_vs_analytic") o.require(r.estimate < 1e-12, "ratio vs analytic " + sci(r.estimate));
        if (r.name == "remainder_n1000") o.require(std::abs(r.estimate - 1) < 2e-3, "ratio at n=1000");
        if (r.name.rfind("continuity_", 0) == 0) o.require(r.pass, r.name);
    }
    o.require(rays >= 32, "fewer than 32 rays");
    // Independent spot checks of the defining formula.
    o.require(numcheck::counterexample_f(0.1, 0.02) == 0.1 * numcheck::bump(2.0), "f(t, 2t^2) != t");
    o.require(std::abs(1 / std::sqrt(1 + 4e-6) - 1) < 2e-3, "analytic ratio");
    o.require(rep.pass(), "demo verdict: " + rep.verdict);
    if (o.pass) o.detail = std::to_string(rays) + " rays zero; ratio -> 1; continuity holds";
    return o;
}

Outcome norm_bound() {
    Outcome o;
    int failures = 0;
    double max_tight = 0;
    std::normal_distribution<double> n01;
    for (int i = 0; i < 100; ++i) {
        const int nu = 2 + i % 3, nv = 2 + (i / 3) % 3, nw = 2 + (i / 9) % 3;
        auto rng = sample_rng(8080, static_cast<std::uint64_t>(i));
        const PolyMap g = PolyMap::random(nu, nv, 3, rng);
        const PolyMap f = PolyMap::random(nv, nw, 3, rng);
        const Vector x = Vector::NullaryExpr(nu, [&] { return n01(rng); });
        const auto r = numcheck::bound_check(f, g, x, 200, 8080 + static_cast<std::uint64_t>(i));
        if (!r.pass) ++failures;
        // Second route: jet-oracle samples of D^2 (f o g) against the same bound.
        double lhs = 0;
        for (int s = 0; s < 50; ++s) {
            Vector z = Vector::NullaryExpr(nu, [&] { return n01(rng); });
            Vector t = Vector::NullaryExpr(nu, [&] { return n01(rng); });
            lhs = std::max(lhs, oracle::composition_derivative(f, g, x, {z.normalized(), t.normalized()}).norm());
        }
        if (lhs > r.reference * (1 + 1e-9)) ++failures;
        max_tight = std::max(max_tight, r.estimate / r.reference);
    }
    o.require(failures == 0, std::to_string(failures) + " failures");
    if (o.pass) o.detail = "100 instances over {2,3,4}^3, zero failures; max LHS/RHS " + sci(max_tight);
    return o;
}

Outcome negative_control() {
    Outcome o;
    int controls = 0;
    for (const auto& fn : corpus::scalar_functions()) {
        std::vector<std::string> base = {"verify", fn.text, "--seed", "9"};
        for (const auto& a : corpus::sym_args(fn)) base.push_back(a);
        int clean = -1, bad = -1;
        run_cli(base, &clean);
        auto perturbed = base;
        perturbed.insert(perturbed.end(), {"--perturb", "1e-3"});
        run_cli(perturbed, &bad);
        o.require(clean == cli::Ok, fn.text + ": unperturbed exit " + std::to_string(clean));
        o.require(bad == cli::VerificationFailed, fn.text + ": perturbed exit " + std::to_string(bad));
        ++controls;
    }
    if (o.pass) o.detail = std::to_string(controls) + " functions: exit 0 clean, exit 1 with --perturb 1e-3";
    return o;
}

Outcome parser_properties() {
    Outcome o;
    int checked = 0, skipped = 0;
    double worst = 0;

    auto soundness = [&](const auto& e, const auto& s, std::uint64_t seed, const std::string& label) {
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto rng = sample_rng(seed, i);
            Env env;
            bind_random(env, symbols(e), symbols_under_inverse(e), rng);
            double a, b;
            if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ScalarExpr>) {
                a = evaluate(e, env);
                b = std::abs(a - evaluate(s, env));
                a = std::abs(a);
            } else {
                const Matrix m = evaluate(e, env);
                a = m.norm();
                b = (m - evaluate(s, env)).norm();
            }
            const double err = b / (1 + a);
            worst = std::max(worst, err);
            if (err > 1e-10) o.require(false, "unsound simplification of " + label + ": " + sci(err));
        }
    };

    for (const auto& fn : corpus::scalar_functions()) {
        const ScalarExpr e = corpus::parse(fn);
        const ScalarExpr c = simplify(e);
        o.require(parse_scalar(format(c), corpus::table(fn)) == c, "round trip of " + fn.text);
        soundness(e, c, 1, fn.text);
        ++checked;
    }
    const SymbolTable t = corpus::random_table();
    corpus::ExprGenerator gen(2718);
    for (int i = 0; i < 500; ++i) {
        if (i % 2 == 0) {
            const ScalarExpr e = gen.scalar(3);
            const ScalarExpr c = simplify(e);
            o.require(parse_scalar(format(c), t) == c, "round trip of " + format(c));
            soundness(e, c, 100 + static_cast<std::uint64_t>(i), format(e));
        } else {
            const Shape shapes[] = {{3, 3}, {3, 2}, {2, 3}, {2, 2}};
            const MatExpr e = gen.matrix(shapes[i % 4], 3);
            const MatExpr c = simplify(e);
            if (c.op() == MatOp::Zero) {
                ++skipped;
            } else {
                o.require(parse_matrix(format(c), t) == c, "round trip of " + format(c));
            }
            soundness(e, c, 100 + static_cast<std::uint64_t>(i), format(e));
        }
        ++checked;
    }
    if (o.pass)
        o.detail = std::to_string(checked) + " expressions (" + std::to_string(skipped) +
                   " zero matrices excluded from the round trip); worst soundness error " + sci(worst);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "golden expansions", 1, golden_expansions},
        {2, "intermediate fidelity", 1, intermediate_fidelity},
        {3, "Rayleigh-quotient suite", 5, rayleigh_suite},
        {4, "log-det", 5, logdet_suite},
        {5, "Hessian symmetry", 10, hessian_symmetry},
        {6, "order-k oracle", 30, order_k_oracle},
        {7, "Gateaux-not-Frechet counterexample", 5, counterexample},
        {8, "norm bound", 30, norm_bound},
        {9, "negative control", 1e9, negative_control},
        {10, "parser round-trip and simplification soundness", 10, parser_properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << o.detail
                  << " [" << std::fixed << std::setprecision(3) << secs << " s]" << std::endl;
    }
    return failed;
}
