#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcalc/expr/ast.hpp"
#include "mcalc/numcheck/report.hpp"

namespace mcalc::cli {

/// Exit codes of every command.
enum Exit : int { Ok = 0, VerificationFailed = 1, UsageError = 2 };

/// Runs one command, e.g. {"diff", "tr(X'*A*X)", "--wrt", "X"}. Results go to
/// `out`, diagnostics to `err`; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    int samples = 50;
    std::uint64_t seed = 0;
    double perturb = 0;      ///< added as perturb * (1 + |value|) to symbolic values
    double tol_first = 1e-6;
    double tol_second = 1e-4;
    double tol_identity = 1e-10;
    double tol_symmetry = 1e-8;
};

/// Compares the symbolic first and second derivatives, gradient and Hessian
/// operator of f against finite differences and against each other over
/// random instances. One report per check, holding its worst sample.
std::vector<numcheck::VerifyReport> verify_expression(const expr::ScalarExpr& f, const std::string& x,
                                                      expr::Shape x_shape, const VerifyOptions& opt);

}  // namespace mcalc::cli
