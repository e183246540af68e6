#pragma once

#include <vector>

#include "csrank/complex_matrix.hpp"

namespace csrank {

// Total argument change of a closed loop of nonzero samples, divided by 2*pi.
// Exact integer under the step-control precondition |w_{j+1} - w_j| < |w_j|,
// which pins each step's argument increment to the principal branch.
// UncertifiableLoop if any sample is zero or a step violates the control.
long winding_number(const std::vector<Complex>& loop);

}  // namespace csrank
