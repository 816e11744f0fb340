#include "mcalc/expr/env.hpp"

#include <algorithm>

#include <cmath>
#include <limits>

#include "mcalc/error.hpp"

namespace mcalc::expr {

void Env::bind(const std::string& name, Matrix value) { values_[name] = std::move(value); }

const Matrix& Env::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UnboundSymbol(name);
    return it->second;
}

Matrix random_matrix(Shape shape, Draw draw, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(shape.rows, shape.cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
    if (draw == Draw::WellConditioned && shape.square()) {
        // ||G||_2 <= ||G||_F; scaling to Frobenius norm 0.9 keeps every
        // eigenvalue of 2I + E inside the disc |z - 2| < 1.
        const double fro = m.norm();
        if (fro > 0) m *= 0.9 / fro;
        m += 2.0 * Matrix::Identity(shape.rows, shape.cols);
    }
    return m;
}

Matrix random_spd(int n, std::mt19937_64& rng) {
    const Matrix g = random_matrix({n, n}, Draw::Gaussian, rng);
    return g * g.transpose() / n + Matrix::Identity(n, n);
}

void bind_random(Env& env, const std::vector<SymbolInfo>& syms,
                 const std::vector<std::string>& well_conditioned, std::mt19937_64& rng) {
    for (const auto& s : syms) {
        if (env.contains(s.name)) continue;
        const bool wc = std::find(well_conditioned.begin(), well_conditioned.end(), s.name) !=
                        well_conditioned.end();
        env.bind(s.name, random_matrix(s.shape, wc ? Draw::WellConditioned : Draw::Gaussian, rng));
    }
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t sample) {
    // splitmix64 finaliser over (seed, sample) gives a counter-based stream key.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (sample + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

namespace {

const Matrix& lookup(const MatExpr& e, const Env& env) {
    const Matrix& m = env.at(e.name());
    if (m.rows() != e.shape().rows || m.cols() != e.shape().cols)
        throw ShapeMismatch("binding of '" + e.name() + "'", e.shape().to_string(),
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return m;
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

Matrix evaluate(const MatExpr& e, const Env& env) {
    const Shape s = e.shape();
    switch (e.op()) {
        case MatOp::Const:
        case MatOp::Var:
        case MatOp::Dir:
            return lookup(e, env);
        case MatOp::Identity:
            return Matrix::Identity(s.rows, s.cols);
        case MatOp::Zero:
            return Matrix::Zero(s.rows, s.cols);
        case MatOp::Add: {
            Matrix acc = Matrix::Zero(s.rows, s.cols);
            for (const auto& c : e.children()) acc += evaluate(c, env);
            return acc;
        }
        case MatOp::Neg:
            return -evaluate(e.child(), env);
        case MatOp::ScalarMul:
            return evaluate(e.scalar(), env) * evaluate(e.child(), env);
        case MatOp::MatMul:
            return evaluate(e.child(0), env) * evaluate(e.child(1), env);
        case MatOp::Transpose:
            return evaluate(e.child(), env).transpose();
        case MatOp::Inverse: {
            const Matrix m = evaluate(e.child(), env);
            Eigen::PartialPivLU<Matrix> lu(m);
            const double rcond = lu.rcond();
            if (!(rcond > std::numeric_limits<double>::epsilon()))
                throw SingularMatrix("matrix is singular to working precision (rcond " +
                                     std::to_string(rcond) + ")");
            return lu.inverse();
        }
    }
    throw UnsupportedNode("unknown matrix node");
}

double evaluate(const ScalarExpr& e, const Env& env) {
    switch (e.op()) {
        case ScalarOp::Lit:
            return to_double(e.value());
        case ScalarOp::Trace:
            return evaluate(e.matrix(), env).trace();
        case ScalarOp::LogDet: {
            const Matrix m = evaluate(e.matrix(), env);
            Eigen::PartialPivLU<Matrix> lu(m);
            const Matrix& packed = lu.matrixLU();
            // sign(det) = sign of permutation times signs of the pivots
            double sign = lu.permutationP().determinant();
            double logabs = 0.0;
            for (Eigen::Index i = 0; i < packed.rows(); ++i) {
                const double u = packed(i, i);
                if (u == 0.0) throw NonPositiveDeterminant("logdet of a singular matrix");
                if (u < 0) sign = -sign;
                logabs += std::log(std::abs(u));
            }
            if (sign <= 0) throw NonPositiveDeterminant("logdet of a matrix with negative determinant");
            return logabs;
        }
        case ScalarOp::Add: {
            double acc = 0.0;
            for (const auto& c : e.children()) acc += evaluate(c, env);
            return acc;
        }
        case ScalarOp::Mul: {
            double acc = 1.0;
            for (const auto& c : e.children()) acc *= evaluate(c, env);
            return acc;
        }
        case ScalarOp::Neg:
            return -evaluate(e.child(), env);
    }
    throw UnsupportedNode("unknown scalar node");
}

}  // namespace mcalc::expr
