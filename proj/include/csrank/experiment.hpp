#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/formula.hpp"
#include "csrank/formula_eval.hpp"
#include "csrank/sr_estimate.hpp"
#include "csrank/subalgebra.hpp"

namespace csrank {

// Estimates a built-in sup-inf-inf sentence over a represented subalgebra.
//
// Only sentences matching phi_shape are accepted (PreconditionError
// otherwise), and the subalgebra must contain the unit.  The inner pair for
// each outer sample is built by functional calculus of the sample's modulus,
// which stays inside the span; the reported value is padded by three times
// the observed projection defects, so it upper-estimates what honest span
// members achieve.  The lower bound is the analytic range floor and the
// witness map is left empty: witnesses here are ambient matrices, which the
// element-typed map cannot carry.
EvalResult eval_formula(const Subalgebra& s, const FormulaPtr& sentence,
                        const EvalOptions& options = {});

// Scan of the built-in sentences over a subalgebra, same decision cut as the
// algebra version.
SrEstimate estimate_sr(const Subalgebra& s, std::size_t n_max, const EvalOptions& options = {});

using ExperimentMember = std::variant<Algebra, Subalgebra>;

// One perturbation pair: two nearby algebras and a certified upper bound on
// their unit-ball Hausdorff distance.
struct SrExperimentPair {
    std::string label;
    ExperimentMember first;
    ExperimentMember second;
    double kk_upper = 0.0;
};

struct SrExperimentRow {
    std::string label;
    double kk_upper = 0.0;
    std::optional<std::size_t> sr_first;
    std::optional<std::size_t> sr_second;
    std::size_t n_max = 0;
    // Equal estimated ranks, or both beyond n_max.
    bool agree = false;
};

struct SrExperimentReport {
    std::vector<SrExperimentRow> rows;
    std::size_t agreements = 0;
    std::size_t disagreements = 0;
};

// Runs estimate_sr on both members of every pair and tallies agreement.
// Disagreements are recorded, never suppressed.  Per-pair seeds are forked
// from options.seed, so rows are independent of evaluation order.
SrExperimentReport sr_stability_experiment(const std::vector<SrExperimentPair>& pairs,
                                           std::size_t n_max, const EvalOptions& options = {});

// Built-in pair corpus: matrix pairs are random block-diagonal subalgebras
// of M_d, d in {2, 3, 4}, against their unitary perturbation at the given
// epsilon, with kk_upper taken from kk_distance.  Disk pairs are the scalar
// field on the triangulated disk against itself: pointwise conjugation of a
// commutative fiber is the identity map, so the partner is equal and
// kk_upper is 0.
std::vector<SrExperimentPair> standard_experiment_pairs(std::size_t matrix_pairs,
                                                        std::size_t disk_pairs, double epsilon,
                                                        std::uint64_t seed);

}  // namespace csrank
