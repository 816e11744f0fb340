#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcalc/expr/ast.hpp"

namespace mcalc::expr {

using Matrix = Eigen::MatrixXd;

/// Numeric bindings for the free symbols of an expression.
class Env {
public:
    Env() = default;
    explicit Env(std::uint64_t seed) : seed_(seed) {}

    /// Binds or rebinds a name. Shape agreement is checked at evaluation.
    void bind(const std::string& name, Matrix value);
    bool contains(const std::string& name) const { return values_.count(name) != 0; }
    const Matrix& at(const std::string& name) const;

    std::uint64_t seed() const noexcept { return seed_; }
    const std::map<std::string, Matrix>& values() const noexcept { return values_; }

private:
    std::map<std::string, Matrix> values_;
    std::uint64_t seed_ = 0;
};

/// How random matrices are drawn for a symbol.
enum class Draw {
    Gaussian,       ///< i.i.d. standard normal entries
    WellConditioned ///< 2 I + E with ||E||_2 below 1: invertible, det > 0, not symmetric
};

Matrix random_matrix(Shape shape, Draw draw, std::mt19937_64& rng);
/// Symmetric positive definite, eigenvalues bounded away from 0.
Matrix random_spd(int n, std::mt19937_64& rng);

/// Binds every symbol of `syms` not already bound. Symbols listed in
/// `well_conditioned` (and square) get Draw::WellConditioned.
void bind_random(Env& env, const std::vector<SymbolInfo>& syms,
                 const std::vector<std::string>& well_conditioned, std::mt19937_64& rng);

Matrix evaluate(const MatExpr& e, const Env& env);
double evaluate(const ScalarExpr& e, const Env& env);

/// Engine for per-sample RNG streams: stream i of a seed is independent of
/// how many other streams are drawn or in which order.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t sample);

}  // namespace mcalc::expr
