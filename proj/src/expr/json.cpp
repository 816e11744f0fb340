#include <charconv>

#include "mcalc/error.hpp"
#include "mcalc/expr/format.hpp"

namespace mcalc::expr {

using nlohmann::ordered_json;

namespace {

ordered_json shape_json(Shape s) { return ordered_json::array({s.rows, s.cols}); }

std::string rational_text(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

Rational parse_rational(const std::string& s) {
    auto parse_int = [&](std::string_view part) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw Error("malformed rational literal '" + s + "'");
        return v;
    };
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    const std::int64_t den = parse_int(std::string_view(s).substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    return Rational(parse_int(std::string_view(s).substr(0, slash)), den);
}

Shape read_shape(const ordered_json& j) {
    const auto& s = j.at("shape");
    if (!s.is_array() || s.size() != 2) throw Error("JSON node shape must be [rows, cols]");
    return make_shape(s[0].get<int>(), s[1].get<int>());
}

MatExpr read_matrix(const ordered_json& j);
ScalarExpr read_scalar(const ordered_json& j);

bool is_scalar_tag(const std::string& op) {
    return op == "Lit" || op == "Trace" || op == "LogDet" || op == "SAdd" || op == "SMul" || op == "SNeg";
}

const ordered_json& kids(const ordered_json& j, std::size_t n) {
    const auto& c = j.at("children");
    if (!c.is_array() || (n != 0 && c.size() != n))
        throw Error("JSON node '" + j.at("op").get<std::string>() + "' has the wrong number of children");
    return c;
}

MatExpr read_matrix(const ordered_json& j) {
    const std::string op = j.at("op").get<std::string>();
    const Shape shape = read_shape(j);
    MatExpr e = [&]() -> MatExpr {
        if (op == "Const") return mat_const(j.at("name").get<std::string>(), shape);
        if (op == "Var") return var(j.at("name").get<std::string>(), shape);
        if (op == "Dir") return dir(j.at("index").get<int>(), shape);
        if (op == "Identity") return identity(shape.rows);
        if (op == "Zero") return zero(shape);
        if (op == "Add") {
            std::vector<MatExpr> terms;
            for (const auto& c : kids(j, 0)) terms.push_back(read_matrix(c));
            if (terms.size() < 2) throw Error("JSON Add node needs at least two children");
            return add(std::move(terms));
        }
        if (op == "Neg") return neg(read_matrix(kids(j, 1)[0]));
        if (op == "ScalarMul") {
            const auto& c = kids(j, 2);
            return scale(read_scalar(c[0]), read_matrix(c[1]));
        }
        if (op == "MatMul") {
            const auto& c = kids(j, 2);
            return matmul(read_matrix(c[0]), read_matrix(c[1]));
        }
        if (op == "Transpose") return transpose(read_matrix(kids(j, 1)[0]));
        if (op == "Inverse") return inverse(read_matrix(kids(j, 1)[0]));
        throw Error("unknown matrix op '" + op + "' in JSON AST");
    }();
    if (e.shape() != shape) throw ShapeMismatch("JSON " + op, shape.to_string(), e.shape().to_string());
    return e;
}

ScalarExpr read_scalar(const ordered_json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "Lit") return lit(parse_rational(j.at("value").get<std::string>()));
    if (op == "Trace") return trace(read_matrix(kids(j, 1)[0]));
    if (op == "LogDet") return logdet(read_matrix(kids(j, 1)[0]));
    if (op == "SNeg") return sneg(read_scalar(kids(j, 1)[0]));
    if (op == "SAdd" || op == "SMul") {
        std::vector<ScalarExpr> parts;
        for (const auto& c : kids(j, 0)) parts.push_back(read_scalar(c));
        if (parts.size() < 2) throw Error("JSON " + op + " node needs at least two children");
        return op == "SAdd" ? sadd(std::move(parts)) : smul(std::move(parts));
    }
    throw Error("unknown scalar op '" + op + "' in JSON AST");
}

}  // namespace

ordered_json to_json(const MatExpr& e) {
    ordered_json j;
    j["op"] = std::string(to_string(e.op()));
    j["shape"] = shape_json(e.shape());
    if (e.is_symbol()) j["name"] = e.name();
    if (e.op() == MatOp::Dir) j["index"] = e.dir_index();
    ordered_json children = ordered_json::array();
    if (e.op() == MatOp::ScalarMul) children.push_back(to_json(e.scalar()));
    for (const auto& c : e.children()) children.push_back(to_json(c));
    j["children"] = std::move(children);
    return j;
}

ordered_json to_json(const ScalarExpr& e) {
    ordered_json j;
    j["op"] = std::string(to_string(e.op()));
    j["shape"] = shape_json({1, 1});
    if (e.op() == ScalarOp::Lit) j["value"] = rational_text(e.value());
    ordered_json children = ordered_json::array();
    if (e.op() == ScalarOp::Trace || e.op() == ScalarOp::LogDet) children.push_back(to_json(e.matrix()));
    for (const auto& c : e.children()) children.push_back(to_json(c));
    j["children"] = std::move(children);
    return j;
}

ordered_json to_json(const Expr& e) {
    return std::visit([](const auto& x) { return to_json(x); }, e);
}

Expr from_json(const ordered_json& j) {
    try {
        const std::string op = j.at("op").get<std::string>();
        if (is_scalar_tag(op)) return read_scalar(j);
        return read_matrix(j);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed JSON AST: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw Error(std::string("malformed JSON AST: ") + ex.what());
    }
}

}  // namespace mcalc::expr
