#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "csrank/algebra.hpp"
#include "csrank/element.hpp"
#include "csrank/formula.hpp"
#include "csrank/tuple.hpp"

namespace csrank {

struct EvalOptions {
    // Number of body evaluations the search may spend.  Zero is an error.
    std::uint64_t budget = 20000;
    std::uint64_t seed = 0;
    // Random starts per quantifier, on top of the analytic candidates.
    std::size_t starts = 32;
};

// Two-sided enclosure of a sentence value.
//
// The lower bound is always sound.  Its method records where it came from:
//   "range"        analytic range of the body, no search information
//   "search"       best evaluated assignment (certified when every
//                  quantifier is a sup)
//   "obstruction"  certified distance obstruction for the built-in
//                  sup-inf-inf sentences over scalar fields
//
// The upper bound is certified when every quantifier is an inf ("search");
// otherwise it is the search estimate, possibly raised to the certified
// lower bound when sampling collapsed below it ("raised-to-lower"), or the
// analytic range cap when the budget produced no complete assignment
// ("range").
//
// witnesses maps variable names to the assignment backing the reported
// estimate.  Scalar-sorted variables are stored as one-entry tuples.  When
// the upper bound was raised to the certified lower bound, only the
// outermost variable is reported: it is the input the obstruction bound is
// computed from, and re-running that computation reproduces the lower bound.
struct EvalResult {
    double lower = 0.0;
    double upper = 0.0;
    std::string lower_method = "range";
    std::string upper_method = "range";
    std::map<std::string, Tuple> witnesses;
    std::uint64_t budget_used = 0;
};

EvalResult eval_formula(const Algebra& algebra, const FormulaPtr& sentence,
                        const EvalOptions& options = {});

// Analytic warm start for the inner part of the built-in sentences: given x
// with ||x|| <= 1, a direction tuple v = x applied to the regularized inverse
// modulus profile and the clipped modulus y = min(|x|, 1).  When the smallest
// singular value of x dominates the regularization, v is an exact isometry on
// the range and x = v y up to the clip.
struct InnerCandidate {
    Tuple v;
    Element y;
};
InnerCandidate inner_inf_candidate(const Tuple& x);

}  // namespace csrank
