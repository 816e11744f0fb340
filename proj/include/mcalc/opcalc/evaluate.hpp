#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcalc/opcalc/opcalc.hpp"
#include "mcalc/opcalc/poly_map.hpp"

namespace mcalc::opcalc {

/// Function symbol name to its concrete polynomial map.
using Bindings = std::map<std::string, PolyMap>;

/// Applies the term to Z1 (x) ... (x) Zk slot by slot: factors act right to
/// left, each atom consuming its consecutive input slots. D^k f o g is
/// evaluated at g(X), D^k g at X. A result with several output slots is
/// returned as their Kronecker product. Throws ArityMismatch when the
/// direction count or any dimension disagrees, UnboundFunction for a symbol
/// without a binding.
Vector evaluate_term(const OpTerm& t, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs);

/// Sum over the terms. The zero sum yields the zero vector of `out_dim`,
/// which is required for it.
Vector evaluate_term(const OpSum& s, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs,
                     std::optional<int> out_dim = {});

/// Mean of evaluate_term over all orderings of the directions. The calculus
/// routes each new direction to its slot only up to a canonical isomorphism,
/// so a sum is determined as a symmetric multilinear map by this average.
Vector evaluate_symmetrized(const OpSum& s, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs,
                            std::optional<int> out_dim = {});

}  // namespace mcalc::opcalc
