#pragma once

#include "csrank/complex_matrix.hpp"

namespace csrank {

struct PolarParts {
    ComplexMatrix partial_isometry;  // v, same shape as a
    ComplexMatrix modulus;           // |a| = (a* a)^(1/2), square
};

// Polar decomposition a = v |a| via the eigendecomposition of a* a.
// Directions with singular value below tau are truncated to zero columns of v,
// so v is a partial isometry supported on the certified range of |a|.
// Requires rows >= cols and tau > 0.
PolarParts polar(const ComplexMatrix& a, double tau);

// Same with the default truncation tau = 1e-10 * ||a||.
PolarParts polar(const ComplexMatrix& a);

}  // namespace csrank
