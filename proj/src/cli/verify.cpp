#include <algorithm>
#include <cmath>
#include <optional>

#include "mcalc/cli/cli.hpp"
#include "mcalc/expr/env.hpp"
#include "mcalc/frechet/frechet.hpp"
#include "mcalc/numcheck/fd.hpp"

namespace mcalc::cli {

using namespace expr;
using numcheck::VerifyReport;

namespace {

// Keeps the worst report (largest error relative to its tolerance) of a check.
void keep_worst(std::optional<VerifyReport>& slot, VerifyReport r) {
    auto badness = [](const VerifyReport& v) -> double {
        if (!v.pass) return INFINITY;
        return v.tolerance > 0 ? v.rel_error / v.tolerance : v.rel_error;
    };
    if (!slot || (!r.pass && slot->pass) || badness(r) > badness(*slot)) slot = std::move(r);
}

// A zero scale leaves the report on its absolute-error rule.
std::optional<double> positive(double s) {
    if (s > 0) return s;
    return std::nullopt;
}

}  // namespace

std::vector<VerifyReport> verify_expression(const ScalarExpr& f, const std::string& x, Shape x_shape,
                                            const VerifyOptions& opt) {
    const MatExpr zsym = dir(1, x_shape);
    const MatExpr tsym = dir(2, x_shape);
    const ScalarExpr d1 = frechet::d(f, x, 1, x_shape);
    const ScalarExpr d2 = frechet::second_derivative(f, x, x_shape);
    const MatExpr grad = frechet::gradient(f, x, x_shape);
    const MatExpr hess = frechet::hessian(f, x, x_shape).expr;

    const std::vector<std::string> well = symbols_under_inverse(f);
    auto symbols_of_f = symbols(f);
    symbols_of_f.push_back({x, Role::Var, x_shape, 0});

    auto bump = [&](double v) { return v + opt.perturb * (1 + std::abs(v)); };
    const std::string dims = x_shape.to_string();

    std::optional<VerifyReport> first, gradient_check, second, hessian_check, symmetry;
    for (int s = 0; s < opt.samples; ++s) {
        auto rng = sample_rng(opt.seed, static_cast<std::uint64_t>(s));
        Env env(opt.seed);
        bind_random(env, symbols_of_f, well, rng);
        env.bind(zsym.name(), random_matrix(x_shape, Draw::Gaussian, rng));
        env.bind(tsym.name(), random_matrix(x_shape, Draw::Gaussian, rng));
        const Matrix X = env.at(x), Z = env.at(zsym.name()), T = env.at(tsym.name());

        auto f_at = [&](const Matrix& p) {
            Env e = env;
            e.bind(x, p);
            return evaluate(f, e);
        };

        const double sym1 = evaluate(d1, env);
        const double h1 = numcheck::fd_step_first(X);
        const double fd1 = numcheck::fd_directional(f_at, X, Z, h1);
        const Matrix g = evaluate(grad, env);
        // |tr(G'Z)| <= ||G|| ||Z||: errors are measured against the uncancelled magnitude.
        const double scale1 = std::max(std::abs(sym1), g.norm() * Z.norm());
        keep_worst(first, numcheck::make_report("first_order_fd", fd1, bump(sym1), opt.tol_first, opt.seed, h1, dims,
                                                positive(scale1)));

        const double via_grad = (Z.transpose() * g).trace();
        keep_worst(gradient_check,
                   numcheck::make_report("gradient_consistency", bump(via_grad), sym1, opt.tol_identity, opt.seed, {},
                                         dims, 1 + std::abs(sym1)));

        const double b_zt = evaluate(d2, env);
        const double h2 = numcheck::fd_step_second(X);
        const double fd2 = numcheck::fd_second(f_at, X, Z, T, h2);
        const Matrix ht = evaluate(hess, env);
        const double scale2 = std::max(std::abs(b_zt), ht.norm() * Z.norm());
        keep_worst(second, numcheck::make_report("second_order_fd", fd2, bump(b_zt), opt.tol_second, opt.seed, h2, dims,
                                                 positive(scale2)));

        const double via_hess = (Z.transpose() * ht).trace();
        keep_worst(hessian_check,
                   numcheck::make_report("hessian_operator", bump(via_hess), b_zt, opt.tol_identity, opt.seed, {}, dims,
                                         1 + std::abs(b_zt)));

        Env swapped = env;
        swapped.bind(zsym.name(), T);
        swapped.bind(tsym.name(), Z);
        const double b_tz = evaluate(d2, swapped);
        keep_worst(symmetry, numcheck::make_report("hessian_symmetry", bump(b_zt), b_tz, opt.tol_symmetry, opt.seed,
                                                   {}, dims, 1 + std::abs(b_zt)));
    }
    std::vector<VerifyReport> out;
    for (auto* r : {&first, &gradient_check, &second, &hessian_check, &symmetry})
        if (*r) {
            (*r)->info.push_back({"samples", opt.samples});
            out.push_back(std::move(**r));
        }
    return out;
}

}  // namespace mcalc::cli
