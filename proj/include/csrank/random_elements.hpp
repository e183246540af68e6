#pragma once

#include <cstdint>

#include "csrank/lg.hpp"
#include "csrank/tuple.hpp"

namespace csrank {

// Deterministic Gaussian tuple.  Matrix fibers get independent complex
// Gaussian entries scaled by `scale`.  Field entries are affine in the mesh
// coordinates with Gaussian coefficient matrices, so their Lipschitz budget
// is exact rather than observed.
Tuple random_element(const Algebra& algebra, std::size_t n, std::uint64_t seed, double scale);

// Draws random_element with seed, seed+1, ... until one certifies in Lg at
// the given margin; ContractViolation after max_tries draws.  Used by suites
// that need a certified starting point.
Tuple random_lg_member(const Algebra& algebra, std::size_t n, std::uint64_t seed, double scale,
                       double margin, int max_tries = 64);

}  // namespace csrank
