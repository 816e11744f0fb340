#include "mcalc/numcheck/spectral.hpp"

#include <cmath>

#include "mcalc/error.hpp"

namespace mcalc::numcheck {

double spectral_norm(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NoConvergence("spectral norm of a non-finite matrix");
    if (m.size() == 0) return 0;
    const Eigen::MatrixXd g = m.transpose() * m;
    const Eigen::Index n = g.rows();
    if (g.norm() == 0) return 0;

    // Fixed start vector with no special alignment to any basis.
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.1 * std::sin(1.0 + 2.0 * static_cast<double>(i));
    v.normalize();

    constexpr int max_iter = 10000;
    constexpr double tol = 1e-10;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = g * v;
        const double lambda = v.dot(w);
        const double residual = (w - lambda * v).norm();
        if (residual <= tol * lambda) return std::sqrt(lambda);
        const double wn = w.norm();
        if (wn == 0) {
            // v lies in the null space of M; restart from a basis vector.
            v = Eigen::VectorXd::Unit(n, it % n);
            continue;
        }
        v = w / wn;
    }
    throw NoConvergence("power iteration did not converge within 10000 iterations");
}

}  // namespace mcalc::numcheck
