#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "csrank/tuple.hpp"

namespace csrank {

// Provenance of the lower bound in a DistanceCertificate.
//   kTrivialZero: no obstruction analysis applied; lower = 0 carries no info.
//   kWinding:     certified boundary winding obstruction (scalar fields on a
//                 2-d region only).
//   kNormBound:   the input itself was certified left invertible, so both
//                 bounds collapse to an exact 0.
enum class LowerMethod { kTrivialZero, kWinding, kNormBound };

const char* lower_method_name(LowerMethod m);

// Two-sided enclosure of the distance from a tuple to the left-invertible
// set.  The upper bound is always rigorous for the represented object: it is
// either the distance to a certified member or the norm of the tuple itself
// (the zero tuple is a limit of members).  upper_witness, when present, is a
// certified member within a small tolerance of the upper bound.
struct DistanceCertificate {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<Tuple> upper_witness;
    LowerMethod lower_method = LowerMethod::kTrivialZero;
};

// a + beta * w where w is the polar direction of the certified member b.
// Requires beta > ||a - b||; the result is again certified, with smallest
// singular value at least beta - ||a - b||.
Tuple shift_into_lg(const Tuple& a, const Tuple& b, double beta);

// Left-invertible tuple s that agrees with the polar direction of a on the
// spectral subspace where |a*| exceeds gamma.  b must be a certified member
// with ||a - b|| < gamma, and gamma must avoid the singular values of a's
// fibers (GapError otherwise; on sampled fields, fibers without a gap are
// excluded from the agreement check instead).  The agreement residual is
// verified to 1e-7 before returning.
Tuple section_at_level(const Tuple& a, double gamma, const Tuple& b);

// The tuple a with its modulus shifted down by lambda: a * q(|a|) for
// q(t) = (t - lambda)_+ / t.  Returns the candidate and the achieved
// distance ||a - c||, which never exceeds lambda up to roundoff.
std::pair<Tuple, double> dist_upper_candidate(const Tuple& a, double lambda);

// Certified lower bound for scalar fields on a 2-d region via the boundary
// winding number.  certified = false when the samples or budgets do not
// support the obstruction (wrong shape, vanishing boundary modulus, edges
// too long for the Lipschitz budget, or winding zero).
struct WindingBound {
    double lower = 0.0;
    long winding = 0;
    bool certified = false;
};
WindingBound winding_lower_bound(const Tuple& a);

// Distance enclosure by candidate search.  The budget counts candidate
// constructions and certifications; when it runs out the best enclosure found
// so far is returned (no exception).  Upper bounds come from the shifted-
// modulus grid, singular-value and constant nudges, and a line search pulling
// the best witness toward a; the lower bound uses winding_lower_bound where
// applicable.
DistanceCertificate dist_to_lg(const Tuple& a, std::uint64_t budget = 4000);

// Rescales a into a norm-one tuple whose distance to the members matches its
// norm: a * h(|a|)/|a| with h(t) = min(t/gamma, 1) and gamma the midpoint of
// the certificate.  Requires cert.lower > 0.
Tuple max_distance_witness(const Tuple& a, const DistanceCertificate& cert);

}  // namespace csrank
