#include "mcalc/numcheck/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mcalc/expr/env.hpp"
#include "mcalc/numcheck/fd.hpp"

namespace mcalc::numcheck {

double bump(double s) {
    const double u = s - 2;
    if (!(std::abs(u) < 1)) return 0;
    return std::exp(1 - 1 / (1 - u * u));
}

double counterexample_f(double x, double y) {
    if (x == 0) return 0;
    return x * bump(y / (x * x));
}

namespace {

Matrix point(double x, double y) {
    Matrix p(2, 1);
    p << x, y;
    return p;
}

double f_of(const Matrix& p) { return counterexample_f(p(0), p(1)); }

// Largest |f(t d) / t| and central quotient over t = 1e-4 ... 1e-8.
double ray_quotient(double dx, double dy) {
    double worst = 0;
    for (int e = 4; e <= 8; ++e) {
        const double t = std::pow(10.0, -e);
        worst = std::max(worst, std::abs(counterexample_f(t * dx, t * dy) / t));
        const Matrix o = Matrix::Zero(2, 1);
        const double c = fd_directional(f_of, o, point(dx, dy), t);
        worst = std::max(worst, std::abs(c));
    }
    return worst;
}

}  // namespace

CounterexampleReport counterexample_demo(int n_max, std::uint64_t seed, int rays) {
    if (n_max < 10) throw std::invalid_argument("n_max must be at least 10");
    CounterexampleReport rep;

    // Directional derivatives at the origin.
    std::vector<std::pair<double, double>> dirs = {{1, 0}, {1, 1}};
    for (int i = 0; i < rays; ++i) {
        auto rng = expr::sample_rng(seed, static_cast<std::uint64_t>(i));
        const double theta = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
        dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    bool gateaux = true;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const auto [dx, dy] = dirs[i];
        auto r = make_report("gateaux_ray_" + std::to_string(i), ray_quotient(dx, dy), 0, 1e-12, seed);
        r.info = {{"dx", dx}, {"dy", dy}};
        gateaux = gateaux && r.pass;
        rep.checks.push_back(std::move(r));
    }

    // Remainder ratios along (1/n, 2/n^2) for the candidate derivative 0.
    const int n_top = std::max(n_max, 1000);
    std::vector<Matrix> pts;
    for (int n = 1; n <= n_top; ++n) pts.push_back(point(1.0 / n, 2.0 / (double(n) * n)));
    const auto seq = CurveSequence::custom("(1/n, 2/n^2)", pts);
    const auto ratios = frechet_remainder([](const Matrix& p) { return Matrix::Constant(1, 1, f_of(p)); },
                                          [](const Matrix&) { return Matrix::Zero(1, 1); }, Matrix::Zero(2, 1), seq);
    double worst = 0;
    for (int n = 1; n <= n_max; ++n) {
        const double analytic = 1 / std::sqrt(1 + 4 / (double(n) * n));
        worst = std::max(worst, std::abs(ratios[static_cast<std::size_t>(n - 1)] - analytic));
    }
    rep.checks.push_back(make_report("remainder_vs_analytic", worst, 0, 1e-12, seed));
    auto limit = make_report("remainder_limit", ratios[static_cast<std::size_t>(n_max - 1)], 1, 5 / std::sqrt(n_max), seed);
    limit.info = {{"n", n_max}};
    rep.checks.push_back(limit);
    auto at1000 = make_report("remainder_n1000", ratios[999], 1, 2e-3, seed);
    rep.checks.push_back(at1000);

    // Continuity: |f(x_n, y_n)| <= |x_n| along sequences tending to (0, y).
    for (double y0 : {-1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
        double violation = 0;
        double last = 0;
        for (int n = 1; n <= n_max; ++n) {
            const double x = (n % 2 ? 1.0 : -1.0) / n;
            const double v = std::abs(counterexample_f(x, y0 + 1.0 / n));
            violation = std::max(violation, v - std::abs(x));
            last = v;
        }
        auto r = make_report("continuity_y" + std::to_string(y0).substr(0, 4), std::max(violation, 0.0), 0, 0, seed);
        r.info = {{"final_abs_f", last}};
        rep.checks.push_back(std::move(r));
    }

    rep.gateaux_zero = gateaux;
    rep.frechet_fails = limit.pass && at1000.pass;
    rep.verdict = rep.gateaux_zero && rep.frechet_fails
                      ? "Gateaux derivative exists and is linear (zero); Frechet derivative does not exist"
                      : "demonstration inconclusive";
    return rep;
}

}  // namespace mcalc::numcheck
