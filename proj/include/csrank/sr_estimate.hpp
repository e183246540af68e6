#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/formula_eval.hpp"

namespace csrank {

// Upper estimates near 0 count as satisfied; the value dichotomy pushes true
// sentence values toward 0 or to 1 and beyond, so any cut between works.
inline constexpr double kSrDecisionCut = 0.1;

struct SrEstimate {
    std::size_t n_max = 0;
    // Smallest tuple length whose sentence estimate fell at or below the cut;
    // nullopt reports "greater than n_max".
    std::optional<std::size_t> rank;
    // trials[i] is the evaluation for length i+1; the scan stops at the first
    // satisfied length.
    std::vector<EvalResult> trials;
};

SrEstimate estimate_sr(const Algebra& algebra, std::size_t n_max,
                       const EvalOptions& options = {});

}  // namespace csrank
