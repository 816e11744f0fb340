#include "mcalc/opcalc/poly_map.hpp"

#include <stdexcept>

namespace mcalc::opcalc {

PolyMap::PolyMap(int in_dim, int out_dim)
    : in_(in_dim), out_(out_dim), c_(Vector::Zero(out_dim)), L_(Eigen::MatrixXd::Zero(out_dim, in_dim)),
      Q_(static_cast<std::size_t>(out_dim), Eigen::MatrixXd::Zero(in_dim, in_dim)),
      C_(static_cast<std::size_t>(out_dim) * in_dim * in_dim * in_dim, 0.0) {
    if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("polynomial map dimensions must be positive");
}

PolyMap PolyMap::random(int in_dim, int out_dim, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    PolyMap p(in_dim, out_dim);
    auto draw = [&] { return 0.5 * n01(rng); };
    for (int o = 0; o < out_dim; ++o) p.c_(o) = draw();
    if (degree >= 1)
        for (int o = 0; o < out_dim; ++o)
            for (int i = 0; i < in_dim; ++i) p.L_(o, i) = draw();
    if (degree >= 2)
        for (auto& q : p.Q_)
            for (int i = 0; i < in_dim; ++i)
                for (int j = 0; j < in_dim; ++j) q(i, j) = draw();
    if (degree >= 3)
        for (auto& v : p.C_) v = draw();
    p.symmetrize();
    return p;
}

PolyMap PolyMap::identity(int n) {
    PolyMap p(n, n);
    p.L_.setIdentity();
    return p;
}

std::size_t PolyMap::index(int o, int i, int j, int k) const {
    const auto n = static_cast<std::size_t>(in_);
    return ((static_cast<std::size_t>(o) * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j)) * n +
           static_cast<std::size_t>(k);
}

double& PolyMap::cubic(int o, int i, int j, int k) { return C_[index(o, i, j, k)]; }
double PolyMap::cubic(int o, int i, int j, int k) const { return C_[index(o, i, j, k)]; }

void PolyMap::symmetrize() {
    for (auto& q : Q_) q = (0.5 * (q + q.transpose())).eval();
    const int n = in_;
    for (int o = 0; o < out_; ++o)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
                    double mean = 0;
                    for (const auto& p : perms) mean += cubic(o, p[0], p[1], p[2]);
                    mean /= 6;
                    for (const auto& p : perms) cubic(o, p[0], p[1], p[2]) = mean;
                }
}

Vector PolyMap::contract(int j, const std::vector<const Vector*>& a) const {
    Vector r = Vector::Zero(out_);
    if (j == 1) return L_ * *a[0];
    if (j == 2) {
        for (int o = 0; o < out_; ++o) r(o) = a[0]->dot(Q_[static_cast<std::size_t>(o)] * *a[1]);
        return r;
    }
    for (int o = 0; o < out_; ++o) {
        double s = 0;
        for (int i = 0; i < in_; ++i)
            for (int jj = 0; jj < in_; ++jj) {
                const double w = (*a[0])(i) * (*a[1])(jj);
                if (w == 0) continue;
                for (int k = 0; k < in_; ++k) s += cubic(o, i, jj, k) * w * (*a[2])(k);
            }
        r(o) = s;
    }
    return r;
}

Vector PolyMap::value(const Vector& x) const { return derivative(x, {}); }

Vector PolyMap::derivative(const Vector& x, const std::vector<Vector>& z) const {
    if (x.size() != in_) throw std::invalid_argument("point dimension does not match the map");
    for (const auto& v : z)
        if (v.size() != in_) throw std::invalid_argument("direction dimension does not match the map");
    const int k = static_cast<int>(z.size());
    Vector r = Vector::Zero(out_);
    if (k > 3) return r;
    if (k == 0) r += c_;
    double factorial = 1;
    for (int j = std::max(k, 1), m = j - k; j <= 3; ++j, ++m) {
        if (m > 1) factorial *= m;
        std::vector<const Vector*> args(static_cast<std::size_t>(m), &x);
        for (const auto& v : z) args.push_back(&v);
        r += contract(j, args) / factorial;
    }
    return r;
}

Eigen::MatrixXd PolyMap::jacobian(const Vector& x) const {
    Eigen::MatrixXd J(out_, in_);
    for (int i = 0; i < in_; ++i) J.col(i) = derivative(x, {Vector::Unit(in_, i)});
    return J;
}

Eigen::MatrixXd PolyMap::second_matricized(const Vector& x) const {
    Eigen::MatrixXd M(out_, in_ * in_);
    for (int i = 0; i < in_; ++i)
        for (int j = 0; j < in_; ++j) M.col(i * in_ + j) = derivative(x, {Vector::Unit(in_, i), Vector::Unit(in_, j)});
    return M;
}

}  // namespace mcalc::opcalc
