#pragma once

#include <cstdint>
#include <vector>

#include "mcalc/numcheck/report.hpp"
#include "mcalc/opcalc/poly_map.hpp"

namespace mcalc::numcheck {

/// One-sided check of ||D^2(f o g)|| <= ||D^2 f o g|| ||Dg||^2 + ||Df o g|| ||D^2 g|| at x.
/// LHS: largest ||D^2(f o g)(x)(Z, T)|| over random unit pairs, evaluated
/// from the second-order operator expansion (a lower bound on the bilinear
/// norm). RHS: spectral norms of the matricized derivatives (an upper bound).
/// Passes when LHS <= RHS (1 + 1e-9); rel_error is the relative excess
/// max(0, LHS / RHS - 1). Throws NonFiniteValue on non-finite values.
VerifyReport bound_check(const opcalc::PolyMap& f, const opcalc::PolyMap& g, const opcalc::Vector& x, int n_samples,
                         std::uint64_t seed);

/// `count` random instances (f, g cubic, x Gaussian) cycling through every
/// dimension triple in {2, 3, 4}^3.
std::vector<VerifyReport> bound_suite(int count, int n_samples, std::uint64_t seed);

}  // namespace mcalc::numcheck
