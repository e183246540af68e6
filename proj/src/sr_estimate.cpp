#include "csrank/sr_estimate.hpp"

#include "csrank/error.hpp"
#include "csrank/formula.hpp"
#include "csrank/rng.hpp"

namespace csrank {

SrEstimate estimate_sr(const Algebra& algebra, std::size_t n_max, const EvalOptions& options) {
    if (n_max == 0) throw PreconditionError("estimate_sr: n_max must be at least 1");
    SrEstimate out;
    out.n_max = n_max;
    for (std::size_t n = 1; n <= n_max; ++n) {
        EvalOptions per_trial = options;
        // Each length gets the full budget and its own stream.
        per_trial.seed = Rng(options.seed).fork(n).seed();
        EvalResult trial = eval_formula(algebra, build_phi_n(n), per_trial);
        const double upper = trial.upper;
        out.trials.push_back(std::move(trial));
        if (upper <= kSrDecisionCut) {
            out.rank = n;
            break;
        }
    }
    return out;
}

}  // namespace csrank
