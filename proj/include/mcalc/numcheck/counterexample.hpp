#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcalc/numcheck/report.hpp"

namespace mcalc::numcheck {

/// exp(1 - 1 / (1 - (s - 2)^2)) for |s - 2| < 1, else 0: smooth, supported on
/// (1, 3), equal to 1 at s = 2.
double bump(double s);

/// x * bump(y / x^2) for x != 0, and 0 on the line x = 0.
double counterexample_f(double x, double y);

/// Directional derivatives at the origin vanish along every ray, yet the
/// remainder ratio along (1/n, 2/n^2) tends to 1: the function has a linear
/// Gateaux derivative but no Frechet derivative at 0.
struct CounterexampleReport {
    std::vector<VerifyReport> checks;
    bool gateaux_zero = false;
    bool frechet_fails = false;
    std::string verdict;

    bool pass() const { return all_pass(checks) && gateaux_zero && frechet_fails; }
};

/// Requires n_max >= 10 (std::invalid_argument otherwise).
CounterexampleReport counterexample_demo(int n_max, std::uint64_t seed, int rays = 32);

}  // namespace mcalc::numcheck
