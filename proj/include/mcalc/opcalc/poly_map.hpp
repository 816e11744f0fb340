#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace mcalc::opcalc {

using Vector = Eigen::VectorXd;

/// p(x) = c + L x + Q(x, x) / 2 + C(x, x, x) / 6, component-wise, with Q and C
/// symmetric in their arguments. Every derivative is an exact contraction:
/// D^k p(x)(z1, ..., zk) = sum over j >= k of T_j(x, ..., x, z1, ..., zk) / (j - k)!
/// where T_1 = L, T_2 = Q, T_3 = C.
class PolyMap {
public:
    PolyMap() = default;
    /// The zero map.
    PolyMap(int in_dim, int out_dim);

    /// Gaussian coefficients up to `degree` (0..3), symmetrized.
    static PolyMap random(int in_dim, int out_dim, int degree, std::mt19937_64& rng);
    static PolyMap identity(int n);

    int in_dim() const noexcept { return in_; }
    int out_dim() const noexcept { return out_; }

    Vector& constant() { return c_; }
    const Vector& constant() const { return c_; }
    Eigen::MatrixXd& linear() { return L_; }
    const Eigen::MatrixXd& linear() const { return L_; }
    /// Q for output component o (in x in, symmetric).
    Eigen::MatrixXd& quadratic(int o) { return Q_[static_cast<std::size_t>(o)]; }
    const Eigen::MatrixXd& quadratic(int o) const { return Q_[static_cast<std::size_t>(o)]; }
    double& cubic(int o, int i, int j, int k);
    double cubic(int o, int i, int j, int k) const;

    /// Restores symmetry of Q and C after direct edits.
    void symmetrize();

    Vector value(const Vector& x) const;
    /// D^k p(x)(z1, ..., zk) with k = z.size(); zero for k > 3.
    Vector derivative(const Vector& x, const std::vector<Vector>& z) const;

    /// Dp(x) as an out x in matrix.
    Eigen::MatrixXd jacobian(const Vector& x) const;
    /// D^2 p(x) as an out x (in * in) matrix; column i * in + j holds D^2 p(x)(e_i, e_j).
    Eigen::MatrixXd second_matricized(const Vector& x) const;

private:
    int in_ = 0;
    int out_ = 0;
    Vector c_;
    Eigen::MatrixXd L_;
    std::vector<Eigen::MatrixXd> Q_;
    std::vector<double> C_;

    std::size_t index(int o, int i, int j, int k) const;
    Vector contract(int j, const std::vector<const Vector*>& args) const;
};

}  // namespace mcalc::opcalc
