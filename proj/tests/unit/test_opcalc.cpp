#include <doctest.h>

#include "mcalc/error.hpp"
#include "mcalc/opcalc/evaluate.hpp"
#include "mcalc/opcalc/opcalc.hpp"
#include "mcalc/expr/env.hpp"
#include "oracles.hpp"

using namespace mcalc;
using namespace mcalc::opcalc;

namespace {

const SpaceLabel U{"U"}, V{"V"}, W{"W"};
const FuncSymbol g{"g", U, V};
const FuncSymbol f{"f", V, W};

Tree dg(int k = 1) { return Tree::leaf(Atom::deriv(g, k)); }
Tree df(int k) { return Tree::leaf(Atom::deriv(f, k, g)); }
Tree id(Signature s) { return Tree::leaf(Atom::id(std::move(s))); }

struct Instance {
    Bindings b;
    Vector x;
    std::vector<Vector> z;
};

Instance random_instance(std::uint64_t seed, int k, int nu, int nv, int nw) {
    auto rng = expr::sample_rng(seed, 0);
    Instance in;
    in.b["g"] = PolyMap::random(nu, nv, 3, rng);
    in.b["f"] = PolyMap::random(nv, nw, 3, rng);
    std::normal_distribution<double> n01;
    in.x = Vector::NullaryExpr(nu, [&] { return n01(rng); });
    for (int i = 0; i < k; ++i) in.z.push_back(Vector::NullaryExpr(nu, [&] { return n01(rng); }));
    return in;
}

}  // namespace

TEST_CASE("expansions of D^k (f o g) for k = 1, 2, 3") {
    const OpSum e1 = expand_composition(f, g, 1);
    CHECK(e1.terms == std::vector<OpTerm>{{1, {df(1), dg()}}});
    CHECK(format_sum(e1) == "(Df∘g)Dg");

    const OpSum e2 = expand_composition(f, g, 2);
    CHECK(e2.terms == std::vector<OpTerm>{{1, {df(2), Tree::tensor({dg(), dg()})}}, {1, {df(1), dg(2)}}});
    CHECK(format_sum(e2) == "(D^2f∘g)(Dg⊗Dg) + (Df∘g)D^2g");

    const OpSum e3 = expand_composition(f, g, 3);
    CHECK(e3.terms == std::vector<OpTerm>{{1, {df(3), Tree::tensor({dg(), dg(), dg()})}},
                                          {1, {df(2), Tree::tensor({dg(2), dg()})}},
                                          {2, {df(2), Tree::tensor({dg(), dg(2)})}},
                                          {1, {df(1), dg(3)}}});
    CHECK(format_sum(e3) == "(D^3f∘g)(Dg⊗Dg⊗Dg) + (D^2f∘g)[(D^2g⊗Dg) + 2(Dg⊗D^2g)] + (Df∘g)D^3g");
}

TEST_CASE("raw third-order step before normalization") {
    const auto steps = expand_trace(f, g, 3);
    REQUIRE(steps.size() == 3);
    const OpSum& raw = steps[2].raw;
    // The identity next to Dg passes the V slots produced by the factor to its right.
    const OpTerm t1{1, {df(3), Tree::tensor({dg(), id({V, V})}), Tree::tensor({id({U}), Tree::tensor({dg(), dg()})})}};
    const OpTerm t2a{1, {df(2), Tree::tensor({dg(2), dg()})}};
    const OpTerm t2b{1, {df(2), Tree::tensor({dg(), dg(2)})}};
    const OpTerm t3{1, {df(2), Tree::tensor({dg(), id({V})}), Tree::tensor({id({U}), dg(2)})}};
    const OpTerm t4{1, {df(1), dg(3)}};
    CHECK(raw.terms.size() == 5);
    for (const auto& t : {t1, t2a, t2b, t3, t4})
        CHECK_MESSAGE(std::find(raw.terms.begin(), raw.terms.end(), t) != raw.terms.end(), format_term(t));
    CHECK(format_sum(raw, Style::Unicode, false).find("(D^3f∘g)(Dg⊗I)(I⊗(Dg⊗Dg))") != std::string::npos);
    CHECK(steps[2].normalized == expand_composition(f, g, 3));
}

TEST_CASE("single-term rules") {
    OpSum s{U, {{1, {dg()}}}};
    CHECK(differentiate(s).terms == std::vector<OpTerm>{{1, {dg(2)}}});

    OpSum ig{U, {{1, {Tree::tensor({id({V}), Tree::leaf(Atom::func_of(g))})}}}};
    const OpSum d = differentiate(ig);
    REQUIRE(d.terms.size() == 1);
    CHECK(format_term(d.terms[0]) == "(I⊗Dg)");

    CHECK(format_factor(id({U})) == "I");
}

TEST_CASE("normalization examples") {
    const OpSum a{U, {{1, {Tree::tensor({dg(), id({V})}), Tree::tensor({id({U}), dg()})}}}};
    CHECK(normalize(a).terms == std::vector<OpTerm>{{1, {Tree::tensor({dg(), dg()})}}});

    const OpSum b{U, {{1, {Tree::tensor({dg(), id({V, V})}), Tree::tensor({id({U}), Tree::tensor({dg(), dg()})})}}}};
    CHECK(normalize(b).terms == std::vector<OpTerm>{{1, {Tree::tensor({dg(), dg(), dg()})}}});

    const OpSum c{U,
                  {{1, {Tree::tensor({dg(2), dg()})}}, {1, {Tree::tensor({dg(), dg(2)})}}, {1, {Tree::tensor({dg(), dg(2)})}}}};
    const OpSum nc = normalize(c);
    CHECK(nc.terms == std::vector<OpTerm>{{1, {Tree::tensor({dg(2), dg()})}}, {2, {Tree::tensor({dg(), dg(2)})}}});

    const OpSum cancel{U, {{3, {dg()}}, {-3, {dg()}}}};
    CHECK(normalize(cancel).terms.empty());
    CHECK(format_sum(normalize(cancel)) == "0");
}

TEST_CASE("normalization is idempotent") {
    for (int k = 1; k <= 5; ++k)
        for (const auto& st : expand_trace(f, g, k)) {
            CHECK(normalize(st.normalized) == st.normalized);
            CHECK(normalize(normalize(st.raw)) == normalize(st.raw));
        }
}

TEST_CASE("coefficient of the extreme terms is one") {
    for (int k = 1; k <= 6; ++k) {
        const OpSum s = expand_composition(f, g, k);
        std::vector<Tree> dgs(static_cast<std::size_t>(k), dg());
        const OpTerm first{1, {df(k), Tree::tensor(dgs)}};
        const OpTerm last{1, {df(1), dg(k)}};
        CHECK(s.terms.front() == first);
        CHECK(s.terms.back() == last);
    }
}

TEST_CASE("order-four coefficients") {
    const OpSum s = expand_composition(f, g, 4);
    std::int64_t d3 = 0, d2 = 0;
    for (const auto& t : s.terms) {
        const int o = t.factors.front().atom.order;
        if (o == 3) d3 += t.coeff;
        if (o == 2) d2 += t.coeff;
    }
    // Set partitions of 4 elements: 6 into three blocks, 7 into two.
    CHECK(d3 == 6);
    CHECK(d2 == 7);
    CHECK(s.terms.size() == 8);
}

TEST_CASE("tensor products are never reordered") {
    const OpSum s{U, {{1, {Tree::tensor({dg(2), dg()})}}, {1, {Tree::tensor({dg(), dg(2)})}}}};
    CHECK(normalize(s).terms.size() == 2);
}

TEST_CASE("signature errors") {
    const FuncSymbol h{"h", W, V};
    CHECK_THROWS_AS(expand_composition(h, g, 2), SignatureMismatch);
    CHECK_THROWS_AS(check_signature(OpTerm{1, {df(2), dg()}}), SignatureMismatch);
    CHECK_THROWS_AS(differentiate(OpSum{W, {{1, {dg()}}}}), SignatureMismatch);
    CHECK_THROWS_AS(expand_composition(f, g, 0), std::invalid_argument);
}

TEST_CASE("formatting styles") {
    const OpSum e2 = expand_composition(f, g, 2);
    CHECK(format_sum(e2, Style::Latex) == "(D^2f \\circ g)\\,(Dg \\otimes Dg) + (Df \\circ g)\\,D^2g");
    CHECK(format_sum(e2, Style::Ascii) == "(D^2 f . g)(Dg (x) Dg) + (Df . g)D^2 g");
}

TEST_CASE("evaluation matches central differences at first order") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Instance in = random_instance(s, 1, 3, 4, 2);
        const Vector v = evaluate_term(expand_composition(f, g, 1), in.b, in.x, in.z);
        const auto comp = [&](const Vector& p) { return in.b["f"].value(in.b["g"].value(p)); };
        const double h = 1e-5;
        const Vector fd = (comp(in.x + h * in.z[0]) - comp(in.x - h * in.z[0])) / (2 * h);
        CHECK(oracle::rel_diff(v, fd) < 1e-6);
    }
}

TEST_CASE("second-order evaluation is symmetric") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Instance in = random_instance(s, 2, 3, 3, 2);
        const OpSum e2 = expand_composition(f, g, 2);
        const Vector a = evaluate_term(e2, in.b, in.x, in.z);
        const Vector b = evaluate_term(e2, in.b, in.x, {in.z[1], in.z[0]});
        CHECK(oracle::rel_diff(a, b) < 1e-8);
    }
}

TEST_CASE("evaluation against the jet oracle") {
    for (int k = 1; k <= 4; ++k)
        for (std::uint64_t s = 0; s < 5; ++s) {
            Instance in = random_instance(100 + s, k, 2 + static_cast<int>(s % 3), 3, 2);
            const Vector v = evaluate_symmetrized(expand_composition(f, g, k), in.b, in.x, in.z);
            const Vector ref = oracle::composition_derivative(in.b["f"], in.b["g"], in.x, in.z);
            CHECK(oracle::rel_diff(v, ref) < 1e-10);
        }
}

TEST_CASE("normalization preserves values") {
    for (int k = 2; k <= 4; ++k)
        for (std::uint64_t s = 0; s < 5; ++s) {
            Instance in = random_instance(200 + s, k, 3, 2, 3);
            const auto steps = expand_trace(f, g, k);
            const Vector a = evaluate_term(steps.back().raw, in.b, in.x, in.z);
            const Vector b = evaluate_term(steps.back().normalized, in.b, in.x, in.z);
            CHECK(oracle::rel_diff(a, b) < 1e-10);
        }
}

TEST_CASE("evaluation errors and the zero sum") {
    Instance in = random_instance(1, 2, 3, 3, 2);
    const OpSum e2 = expand_composition(f, g, 2);
    CHECK_THROWS_AS(evaluate_term(e2, in.b, in.x, {in.z[0]}), ArityMismatch);
    Bindings partial{{"g", in.b["g"]}};
    CHECK_THROWS_AS(evaluate_term(e2, partial, in.x, in.z), UnboundFunction);
    const OpSum zero{U, {}};
    const Vector v = evaluate_term(zero, in.b, in.x, in.z, 2);
    CHECK(v.size() == 2);
    CHECK(v.norm() == 0);
}

TEST_CASE("polynomial maps") {
    auto rng = expr::sample_rng(3, 0);
    const PolyMap p = PolyMap::random(3, 2, 3, rng);
    const Vector x = Vector::Random(3);
    const Vector z1 = Vector::Random(3), z2 = Vector::Random(3);
    CHECK(oracle::rel_diff(p.derivative(x, {z1, z2}), p.derivative(x, {z2, z1})) < 1e-14);
    CHECK(oracle::rel_diff(p.jacobian(x) * z1, p.derivative(x, {z1})) < 1e-14);
    const Eigen::MatrixXd m = p.second_matricized(x);
    Vector kz(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) kz(i * 3 + j) = z1(i) * z2(j);
    CHECK(oracle::rel_diff(m * kz, p.derivative(x, {z1, z2})) < 1e-12);
    CHECK(p.derivative(x, {z1, z1, z1, z1}).norm() == 0);
    CHECK(oracle::rel_diff(PolyMap::identity(3).value(x), x) == 0);
    CHECK(oracle::rel_diff(p.derivative(x, {z1}), oracle::composition_derivative(PolyMap::identity(2), p, x, {z1})) <
          1e-12);
}
