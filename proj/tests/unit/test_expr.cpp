#include <cmath>

#include <doctest.h>

#include "mcalc/error.hpp"
#include "mcalc/expr/env.hpp"
#include "mcalc/expr/format.hpp"
#include "mcalc/expr/parse.hpp"
#include "oracles.hpp"

using namespace mcalc;
using namespace mcalc::expr;

namespace {

SymbolTable decls(std::initializer_list<const char*> ds) {
    SymbolTable t;
    for (const char* d : ds) t.declare(parse_decl(d));
    return t;
}

}  // namespace

TEST_CASE("shape inference") {
    const MatExpr a = mat_const("A", {3, 3});
    const MatExpr x = var("X", {3, 2});
    CHECK(infer_shape(matmul(a, x)) == Shape{3, 2});
    CHECK(infer_shape(trace(matmul(transpose(x), matmul(a, x)))) == ScalarSort{});
    CHECK_THROWS_AS(matmul(a, var("Y", {2, 2})), ShapeMismatch);
    CHECK_THROWS_AS(trace(x), NonSquare);
    CHECK_THROWS_AS(logdet(x), NonSquare);
    CHECK_THROWS_AS(inverse(x), NonSquare);
    CHECK_THROWS_AS(add({a, x}), ShapeMismatch);
    CHECK_THROWS_AS(make_shape(0, 3), std::invalid_argument);
    CHECK(infer_shape(transpose(x)) == Shape{2, 3});
}

TEST_CASE("shape mismatch names the node and both shapes") {
    try {
        matmul(mat_const("A", {3, 3}), var("X", {2, 2}));
        FAIL("expected ShapeMismatch");
    } catch (const ShapeMismatch& e) {
        CHECK(!e.path().empty());
        CHECK(e.expected() != e.found());
    }
}

TEST_CASE("shape inference is deterministic") {
    const auto t = decls({"A:3x3:const", "X:3x2:var"});
    for (int i = 0; i < 3; ++i) CHECK(infer_shape(parse_matrix("A*X + X", t)) == Shape{3, 2});
}

TEST_CASE("direction names") {
    CHECK(direction_name(1) == "Z");
    CHECK(direction_name(2) == "T");
    CHECK(direction_name(3) == "Z3");
    CHECK(direction_index("Z4") == 4);
    CHECK(direction_index("T") == 2);
    CHECK_FALSE(direction_index("X").has_value());
    CHECK(dir(2, {3, 3}).name() == "T");
}

TEST_CASE("evaluate basics") {
    Env env;
    CHECK(evaluate(trace(identity(3)), env) == doctest::Approx(3.0));
    env.bind("X", 2 * Matrix::Identity(2, 2));
    CHECK(evaluate(logdet(var("X", {2, 2})), env) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
    CHECK(evaluate(logdet(var("X", {2, 2})), env) == doctest::Approx(1.3862943611).epsilon(1e-10));
}

TEST_CASE("evaluate tr(X'AX) against the element-wise triple sum") {
    const auto t = decls({"A:3x3:const", "X:3x2:var"});
    const ScalarExpr f = parse_scalar("tr(X' * A * X)", t);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto rng = sample_rng(7, s);
        Env env;
        env.bind("A", random_matrix({3, 3}, Draw::Gaussian, rng));
        env.bind("X", random_matrix({3, 2}, Draw::Gaussian, rng));
        const double ref = oracle::rayleigh_triple_sum(env.at("X"), env.at("A"));
        CHECK(std::abs(evaluate(f, env) - ref) <= 1e-12 * (1 + std::abs(ref)));
    }
}

TEST_CASE("evaluate errors") {
    Env env;
    const MatExpr x = var("X", {2, 2});
    CHECK_THROWS_AS(evaluate(x, env), UnboundSymbol);
    env.bind("X", Matrix::Zero(2, 2));
    CHECK_THROWS_AS(evaluate(inverse(x), env), SingularMatrix);
    CHECK_THROWS_AS(evaluate(logdet(x), env), NonPositiveDeterminant);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = -1;
    env.bind("X", m);
    CHECK_THROWS_AS(evaluate(logdet(x), env), NonPositiveDeterminant);
    env.bind("X", Matrix::Identity(3, 3));
    CHECK_THROWS_AS(evaluate(x, env), ShapeMismatch);
}

TEST_CASE("random draws") {
    auto rng = sample_rng(1, 0);
    const Matrix s = random_spd(4, rng);
    CHECK((s - s.transpose()).norm() == 0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().minCoeff() > 0);
    const Matrix w = random_matrix({4, 4}, Draw::WellConditioned, rng);
    CHECK(w.determinant() > 0);
    CHECK((w - 2 * Matrix::Identity(4, 4)).norm() > 0);
}

TEST_CASE("per-sample streams do not depend on drawing order") {
    auto a = sample_rng(42, 3);
    auto b = sample_rng(42, 5);
    auto c = sample_rng(42, 3);
    const auto va = a();
    b();
    CHECK(va == c());
    CHECK(sample_rng(42, 3)() != sample_rng(43, 3)());
}

TEST_CASE("parse examples") {
    const auto t = decls({"A:3x3:const", "X:3x2:var"});
    const ScalarExpr f = parse_scalar("tr(X' * A * X)", t);
    CHECK(f == trace(matmul(transpose(var("X", {3, 2})), matmul(mat_const("A", {3, 3}), var("X", {3, 2})))));

    const auto u = decls({"X:3x3:var"});
    CHECK(parse_scalar("logdet(inv(X))", u) == logdet(inverse(var("X", {3, 3}))));
    CHECK_THROWS_AS(parse("tr(X + A", decls({"A:3x3:const", "X:3x3:var"})), SyntaxError);
}

TEST_CASE("parse errors") {
    const auto t = decls({"A:3x3:const", "X:3x2:var"});
    CHECK_THROWS_AS(parse("tr(Q)", t), UnknownSymbol);
    CHECK_THROWS_AS(parse("A*A*X*X", t), ShapeMismatch);
    CHECK_THROWS_AS(parse("tr(X)", t), NonSquare);
    CHECK_THROWS_AS(parse("A +", t), SyntaxError);
    CHECK_THROWS_AS(parse("A X", t), SyntaxError);
    CHECK_THROWS_AS(parse_scalar("A", t), Error);
    CHECK_THROWS_AS(parse_matrix("tr(A)", t), Error);
    try {
        parse("tr(A\n  + )", t);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.col() > 1);
    }
}

TEST_CASE("parse grammar details") {
    const auto t = decls({"A:3x3:const", "B:3x3:const", "X:3x3:var"});
    CHECK(parse_matrix("A - B", t) == add({mat_const("A", {3, 3}), neg(mat_const("B", {3, 3}))}));
    CHECK(parse_matrix("(A*B)'", t) == transpose(matmul(mat_const("A", {3, 3}), mat_const("B", {3, 3}))));
    CHECK(parse_matrix("A''", t) == transpose(transpose(mat_const("A", {3, 3}))));
    CHECK(parse_matrix("I(3)", t) == identity(3));
    CHECK(parse_matrix("2/3*A", t) == scale(lit(2, 3), mat_const("A", {3, 3})));
    CHECK(parse_scalar("tr(A)*tr(B)", t) == smul({trace(mat_const("A", {3, 3})), trace(mat_const("B", {3, 3}))}));
    CHECK(parse_scalar("-tr(A)", t) == sneg(trace(mat_const("A", {3, 3}))));
    CHECK_THROWS_AS(parse("A + tr(A)", t), ShapeMismatch);
}

TEST_CASE("symbol declarations") {
    const SymbolDecl d = parse_decl("X:3x2:var");
    CHECK(d.name == "X");
    CHECK(d.role == Role::Var);
    CHECK(d.shape == Shape{3, 2});
    CHECK(parse_decl("T:4x4:dir").role == Role::Dir);
    CHECK_THROWS_AS(parse_decl("W:4x4:dir"), Error);
    CHECK_THROWS_AS(parse_decl("Z:4x4:var"), Error);
    CHECK_THROWS_AS(parse_decl("tr:2x2:const"), Error);
    CHECK_THROWS_AS(parse_decl("X:0x2:var"), Error);
    CHECK_THROWS_AS(parse_decl("X:3x2"), Error);
    CHECK_THROWS_AS(parse_decl("X:3x2:matrix"), Error);

    SymbolTable t;
    t.declare(d);
    t.declare(d);
    CHECK(t.decls().size() == 1);
    CHECK_THROWS_AS(t.declare(parse_decl("X:3x3:var")), Error);
    CHECK_THROWS_AS(t.declare(parse_decl("X:3x2:const")), Error);
}

TEST_CASE("text formatting") {
    const auto t = decls({"A:3x3:const", "B:3x3:const", "X:3x3:var", "Z:3x3:dir"});
    CHECK(format(parse("tr(Z'*(A + A')*X)", t)) == "tr(Z'*(A + A')*X)");
    CHECK(format(parse("-(A - B)*X", t)) == "-(A - B)*X");
    CHECK(format(parse("inv(X)'", t)) == "inv(X)'");
    CHECK(format(parse("1/2*tr(A)", t)) == "1/2*tr(A)");
    CHECK(format(zero({2, 2})) == "0");
}

TEST_CASE("latex formatting") {
    const auto t = decls({"A:3x3:const", "X:3x3:var", "Z:3x3:dir"});
    const std::string s = format_latex(parse_scalar("tr(Z'*(A + A')*X)", t));
    CHECK(s.find("\\operatorname{tr}") != std::string::npos);
    CHECK(s.find("Z^{T}") != std::string::npos);
    CHECK(format_latex(parse_scalar("logdet(X)", t)).find("\\log\\det") != std::string::npos);
    CHECK(format_latex(parse_matrix("inv(X)'", t)) == "X^{-T}");
    CHECK(format_latex(parse_matrix("inv(X)", t)) == "X^{-1}");
}

TEST_CASE("json export and import") {
    const auto t = decls({"A:3x3:const", "X:3x2:var", "Z:3x2:dir"});
    const Expr e = parse("1/2*tr(Z'*A*X) - logdet(X'*X)", t);
    const auto j = to_json(e);
    CHECK(j["op"] == "SAdd");
    CHECK(j["shape"] == nlohmann::ordered_json::array({1, 1}));
    auto it = j.begin();
    CHECK(it.key() == "op");
    ++it;
    CHECK(it.key() == "shape");
    const Expr back = from_json(j);
    CHECK(std::get<ScalarExpr>(back) == std::get<ScalarExpr>(e));
    CHECK(to_json(back).dump() == j.dump());

    const auto m = to_json(parse_matrix("A*X", t));
    CHECK(m["op"] == "MatMul");
    CHECK(m["shape"] == nlohmann::ordered_json::array({3, 2}));
    CHECK(m["children"][0]["name"] == "A");

    CHECK_THROWS_AS(from_json(nlohmann::ordered_json::parse(R"({"op":"Bogus"})")), Error);
    auto bad = m;
    bad["shape"] = {2, 2};
    CHECK_THROWS_AS(from_json(bad), Error);
}
