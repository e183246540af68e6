#pragma once

#include "csrank/profiles.hpp"
#include "csrank/tuple.hpp"

namespace csrank {

// Functional calculus lifted to elements and tuples, with Lipschitz budgets
// propagated so that field results remain certifiable.

// a* a as an element (Hermitian, positive).
Element tuple_gram(const Tuple& a);

// |a| = (a* a)^(1/2).  Budget: sqrt(2) times the stacked budget (absolute
// value is sqrt(2)-Lipschitz in Frobenius norm).
Element tuple_abs(const Tuple& a);

struct TuplePolar {
    Tuple isometry;   // a |a|^(-1) with singular directions below tau dropped
    Element modulus;  // |a|
};
TuplePolar tuple_polar(const Tuple& a, double tau);
TuplePolar tuple_polar(const Tuple& a);

// a * f(|a|)/|a|, computed without forming |a|^(-1); stays inside the algebra
// for any profile with a bounded ratio at zero.
Tuple tuple_right_multiplier(const Tuple& a, const ScalarProfile& profile);

// f(h) for Hermitian h, fiberwise; budget scales by the Lipschitz constant of
// f on [0, sup h].
Element element_func_calc(const Element& h, const ScalarProfile& profile);

// Fiberwise inverse.  For fields the budget needs a positive spectral floor
// across the whole region; floor_hint supplies extra analytic knowledge.
Element element_inverse(const Element& e, double floor_hint = 0.0);

// Every fiber singular value raised by delta: U (S + delta) V* per fiber,
// with kernel directions completed deterministically from the standard basis
// so the result is full rank.  Field entries carry observed vertex slopes.
Tuple tuple_sigma_shift(const Tuple& a, double delta);

}  // namespace csrank
