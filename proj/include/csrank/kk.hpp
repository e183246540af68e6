#pragma once

#include <cstddef>

#include "csrank/complex_matrix.hpp"
#include "csrank/subalgebra.hpp"

namespace csrank {

// Two-sided bounds on the Hausdorff distance between the operator-norm unit
// balls of two subalgebras of the same matrix algebra.
//
// lower is certified: witness_x lies in one unit ball and every element of
// the other unit ball is at least lower away from it (dual functional
// argument, see kk_distance).  upper comes from structural facts only: 0 on
// identical spans, 2||u - 1|| when a recorded conjugator connects the two
// algebras, and 1 always (0 belongs to every unit ball).  witness_y is the
// best response to witness_x found in the other ball, so
// ||witness_x - witness_y|| is a reproducible primal value >= lower.
struct KkCertificate {
    double lower = 0.0;
    double upper = 2.0;
    ComplexMatrix witness_x;
    ComplexMatrix witness_y;
};

// Estimates the unit-ball Hausdorff distance between a and b.
//
// The outer sup runs over a deterministic witness pool in each algebra:
// normalized basis elements, normalized pairwise combinations, and (when the
// algebra is unital) unitary exponentials of Hermitian basis parts.  For each
// witness x the inner problem inf { ||x - y|| : y in the other unit ball } is
// a convex program solved by projected subgradient descent; each iterate
// yields a dual lower bound Re<G, x> - ||P(G)||_tr with G the top singular
// dyad of the residual and P the trace-orthogonal projection onto the other
// span, and the largest such bound is kept.  budget is the total number of
// inner iterations across the pool; lower bounds are nondecreasing in budget.
//
// Bounds for (a, b) and (b, a) are identical by construction.  Throws
// PreconditionError on ambient dimension mismatch and ContractViolation if
// the certified bounds cross by more than 1e-9 (smaller crossings clamp).
KkCertificate kk_distance(const Subalgebra& a, const Subalgebra& b, std::size_t budget = 4000);

}  // namespace csrank
