#pragma once

#include <Eigen/Dense>

namespace mcalc::numcheck {

/// Largest singular value by power iteration on M'M. Stops when the
/// eigen-residual of M'M falls below 1e-10 relative to the current estimate;
/// throws NoConvergence after 10000 iterations or on non-finite input.
double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace mcalc::numcheck
