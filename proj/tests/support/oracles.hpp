#pragma once

// Independent reference computations for the tests. None of them call into
// the differentiation or operator-calculus code they are used to check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcalc/opcalc/poly_map.hpp"

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Truncated multivariate jet in k nilpotent infinitesimals e_1..e_k with
/// e_i^2 = 0. Coefficient s (a bit mask) multiplies the product of e_i, i in s.
class Jet {
public:
    Jet(int k, double value);
    static Jet variable(int k, double value, const std::vector<double>& seeds);

    int order() const noexcept { return k_; }
    double operator[](std::size_t s) const { return c_[s]; }
    /// Coefficient of e_1 e_2 ... e_k: the mixed k-th derivative.
    double top() const { return c_.back(); }

    Jet& operator+=(const Jet& o);
    Jet operator+(const Jet& o) const;
    Jet operator*(const Jet& o) const;
    Jet operator*(double a) const;

private:
    int k_;
    std::vector<double> c_;
};

using JetVector = std::vector<Jet>;

/// Evaluates c + Lx + Q(x,x)/2 + C(x,x,x)/6 on jets by plain arithmetic on the
/// coefficient arrays.
JetVector apply_poly(const mcalc::opcalc::PolyMap& p, const JetVector& x);

/// D^k (f o g)(x)(z_1, ..., z_k) from the e_1...e_k coefficient of
/// f(g(x + sum e_i z_i)).
Vector composition_derivative(const mcalc::opcalc::PolyMap& f, const mcalc::opcalc::PolyMap& g, const Vector& x,
                              const std::vector<Vector>& z);

/// Number of eigenvalues of the symmetric matrix s below sigma, by the
/// inertia of the LDL' factorization of s - sigma I.
int count_below(const Matrix& s, double sigma);

/// Largest singular value of m: bisection on the spectrum of m'm.
double spectral_norm_bisection(const Matrix& m);

/// tr(X'AX) as the explicit sum over X_ji A_jk X_ki.
double rayleigh_triple_sum(const Matrix& x, const Matrix& a);

/// Relative distance ||a - b|| / max(||b||, floor).
double rel_diff(const Vector& a, const Vector& b, double floor = 1e-300);

}  // namespace oracle
