#pragma once

// Finite-difference estimators and Frechet remainder diagnostics.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcalc/error.hpp"

namespace mcalc::numcheck {

using Matrix = Eigen::MatrixXd;

namespace detail {
inline bool finite(double v) { return std::isfinite(v); }
template <class D>
bool finite(const Eigen::MatrixBase<D>& m) {
    return m.allFinite();
}
}  // namespace detail

/// (fn(X + hZ) - fn(X - hZ)) / (2h) for scalar-, vector- or matrix-valued fn.
/// Throws NonFiniteValue when either evaluation is not finite.
template <class F, class P>
auto fd_directional(F&& fn, const P& x, const P& z, double h) {
    using R = std::decay_t<decltype(fn(x))>;
    const P xp = x + h * z;
    const P xm = x - h * z;
    const R fp = fn(xp);
    const R fm = fn(xm);
    if (!detail::finite(fp) || !detail::finite(fm)) throw NonFiniteValue("function is not finite at X +- hZ");
    return R((fp - fm) / (2 * h));
}

/// Nested central difference of the bilinear form D^2 fn(X)(Z, T).
template <class F, class P>
double fd_second(F&& fn, const P& x, const P& z, const P& t, double h) {
    const double a = fn(P(x + h * z + h * t));
    const double b = fn(P(x + h * z - h * t));
    const double c = fn(P(x - h * z + h * t));
    const double d = fn(P(x - h * z - h * t));
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
        throw NonFiniteValue("function is not finite near X");
    return (a - b - c + d) / (4 * h * h);
}

/// eps^(1/3) (1 + ||X||_F): balances truncation and round-off for one layer.
double fd_step_first(const Matrix& x);
/// eps^(1/4) (1 + ||X||_F): for nested second differences.
double fd_step_second(const Matrix& x);

/// Points z_n -> 0 with strictly decreasing norms.
struct CurveSequence {
    enum class Kind { Straight, Curved, Custom };

    Kind kind = Kind::Custom;
    std::string label;
    std::vector<Matrix> points;

    /// z_n = 10^-n Z, n = 1..count.
    static CurveSequence straight(const Matrix& z, int count = 8);
    /// z_n = t Z + t^2 W with t = 10^-n: a parabola tangent to the line.
    static CurveSequence curved(const Matrix& z, const Matrix& w, int count = 8);
    /// Throws mcalc::Error unless the norms strictly decrease.
    static CurveSequence custom(std::string label, std::vector<Matrix> points);
};

/// ||fn(X + z) - fn(X) - A(z)||_F / ||z||_F for every point of the sequence.
std::vector<double> frechet_remainder(const std::function<Matrix(const Matrix&)>& fn,
                                      const std::function<Matrix(const Matrix&)>& candidate, const Matrix& x,
                                      const CurveSequence& seq);

}  // namespace mcalc::numcheck
