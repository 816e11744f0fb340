#include "mcalc/numcheck/bound.hpp"

#include <algorithm>
#include <cmath>

#include "mcalc/error.hpp"
#include "mcalc/expr/env.hpp"
#include "mcalc/numcheck/spectral.hpp"
#include "mcalc/opcalc/evaluate.hpp"
#include "mcalc/opcalc/opcalc.hpp"

namespace mcalc::numcheck {

using opcalc::PolyMap;
using opcalc::Vector;

VerifyReport bound_check(const PolyMap& f, const PolyMap& g, const Vector& x, int n_samples, std::uint64_t seed) {
    const opcalc::FuncSymbol gs{"g", {"U"}, {"V"}};
    const opcalc::FuncSymbol fs{"f", {"V"}, {"W"}};
    const opcalc::OpSum d2 = opcalc::expand_composition(fs, gs, 2);
    const opcalc::Bindings b{{"f", f}, {"g", g}};

    double lhs = 0;
    for (int i = 0; i < n_samples; ++i) {
        auto rng = expr::sample_rng(seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> n01;
        Vector z(g.in_dim()), t(g.in_dim());
        for (auto& v : z) v = n01(rng);
        for (auto& v : t) v = n01(rng);
        z.normalize();
        t.normalize();
        lhs = std::max(lhs, opcalc::evaluate_term(d2, b, x, {z, t}).norm());
    }

    const Vector gx = g.value(x);
    const double rhs = spectral_norm(f.second_matricized(gx)) * std::pow(spectral_norm(g.jacobian(x)), 2) +
                       spectral_norm(f.jacobian(gx)) * spectral_norm(g.second_matricized(x));
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) throw NonFiniteValue("bound check produced a non-finite norm");

    VerifyReport r;
    r.name = "norm_bound";
    r.estimate = lhs;
    r.reference = rhs;
    r.abs_error = std::max(0.0, lhs - rhs);
    r.rel_error = rhs > 0 ? std::max(0.0, lhs / rhs - 1) : (lhs > 0 ? INFINITY : 0.0);
    r.tolerance = 1e-9;
    r.pass = r.rel_error <= r.tolerance;
    r.seed = seed;
    r.dims = std::to_string(g.in_dim()) + "," + std::to_string(g.out_dim()) + "," + std::to_string(f.out_dim());
    r.info = {{"tightness", rhs > 0 ? lhs / rhs : 1.0}, {"samples", n_samples}};
    return r;
}

std::vector<VerifyReport> bound_suite(int count, int n_samples, std::uint64_t seed) {
    std::vector<VerifyReport> out;
    for (int i = 0; i < count; ++i) {
        const int nu = 2 + i % 3, nv = 2 + (i / 3) % 3, nw = 2 + (i / 9) % 3;
        auto rng = expr::sample_rng(seed, 1'000'000 + static_cast<std::uint64_t>(i));
        const PolyMap g = PolyMap::random(nu, nv, 3, rng);
        const PolyMap f = PolyMap::random(nv, nw, 3, rng);
        std::normal_distribution<double> n01;
        Vector x(nu);
        for (auto& v : x) v = n01(rng);
        auto r = bound_check(f, g, x, n_samples, seed + static_cast<std::uint64_t>(i));
        r.name = "norm_bound_" + std::to_string(i);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mcalc::numcheck
