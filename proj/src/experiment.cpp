#include "csrank/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/kk.hpp"
#include "csrank/mesh.hpp"
#include "csrank/rng.hpp"

namespace csrank {

namespace {

// n-tuples over a subalgebra are handled in the ambient matrix algebra:
// entries stacked to an (n*d)-by-d matrix for norms and grams.

ComplexMatrix stack_tuple(const std::vector<ComplexMatrix>& xs) {
    const std::size_t d = xs.front().cols();
    ComplexMatrix out(xs.size() * d, d);
    for (std::size_t i = 0; i < xs.size(); ++i) out.set_block(i * d, 0, xs[i]);
    return out;
}

template <class F>
ComplexMatrix func_calc_hermitian(const ComplexMatrix& h, F f) {
    const EigenDecomposition eig = herm_eig(h);
    std::vector<double> mapped(eig.eigenvalues.size());
    for (std::size_t i = 0; i < mapped.size(); ++i) mapped[i] = f(eig.eigenvalues[i]);
    return eig.eigenvectors * ComplexMatrix::diagonal(mapped) * eig.eigenvectors.adjoint();
}

double phi_body_value(const std::vector<ComplexMatrix>& x, const std::vector<ComplexMatrix>& v,
                      const ComplexMatrix& y) {
    const ComplexMatrix sx = stack_tuple(x);
    const ComplexMatrix sv = stack_tuple(v);
    const std::size_t d = y.rows();
    const double fit = op_norm(sx - sv * y);
    const double isometry = op_norm(sv.adjoint() * sv - ComplexMatrix::identity(d));
    return std::max(fit, isometry);
}

// Replacing v, y by their span projections (and restoring positivity of y)
// moves the body value by at most twice each defect plus cross terms; three
// times the defect sum dominates that for defects below 1.
double span_pad(const Subalgebra& s, const std::vector<ComplexMatrix>& v,
                const ComplexMatrix& y) {
    double acc = s.projection_defect(y);
    for (const auto& vi : v) acc += s.projection_defect(vi);
    return 3.0 * acc;
}

struct SpanPair {
    std::vector<ComplexMatrix> v;
    ComplexMatrix y;
};

// v = x (max(|x|, eps))^{-1}, y = min(|x|, 1), both functions of the gram
// x* x and hence inside the span.  Exact factorization wherever the smallest
// singular value clears eps.
SpanPair right_multiplier_pair(const std::vector<ComplexMatrix>& xs, double relative_floor) {
    const ComplexMatrix st = stack_tuple(xs);
    const ComplexMatrix gram = st.adjoint() * st;
    const double lmin = std::max(min_eig_hermitian(gram), 0.0);
    const double eps = std::max(relative_floor, 0.5 * std::sqrt(lmin));
    const ComplexMatrix mult = func_calc_hermitian(gram, [eps](double t) {
        return 1.0 / std::max(std::sqrt(std::max(t, 0.0)), eps);
    });
    SpanPair out;
    out.v.reserve(xs.size());
    for (const auto& xi : xs) out.v.push_back(xi * mult);
    out.y = func_calc_hermitian(gram,
                                [](double t) { return std::min(std::sqrt(std::max(t, 0.0)), 1.0); });
    return out;
}

// Single entries admit a scalar shift: among a fixed fan of directions,
// x + delta e^{i theta} 1 is pushed as far from singularity as the spectrum
// allows, and factoring the shifted element costs at most 2 delta.
SpanPair shifted_pair(const Subalgebra& s, const ComplexMatrix& x, double delta) {
    const ComplexMatrix unit = s.project(ComplexMatrix::identity(s.ambient_dim()));
    ComplexMatrix best = x;
    double best_lmin = -1.0;
    for (int k = 0; k < 8; ++k) {
        const Complex z = std::polar(delta, 0.7853981633974483 * k);
        ComplexMatrix cand = unit;
        cand *= z;
        cand += x;
        const double lmin = min_eig_hermitian(cand.adjoint() * cand);
        if (lmin > best_lmin) {
            best_lmin = lmin;
            best = std::move(cand);
        }
    }
    return right_multiplier_pair({best}, 1e-12);
}

std::vector<std::vector<ComplexMatrix>> root_candidates(const Subalgebra& s, std::size_t n,
                                                        const EvalOptions& options) {
    const std::size_t d = s.ambient_dim();
    std::vector<std::vector<ComplexMatrix>> roots;

    std::vector<ComplexMatrix> unit_tuple(n, ComplexMatrix(d, d));
    unit_tuple[0] = s.project(ComplexMatrix::identity(d));
    roots.push_back(std::move(unit_tuple));

    const Rng base(options.seed);
    for (std::size_t j = 0; j < options.starts; ++j) {
        Rng rng = base.fork(j + 1);
        std::vector<ComplexMatrix> xs;
        xs.reserve(n);
        for (std::size_t slot = 0; slot < n; ++slot) {
            std::vector<Complex> coords(s.dim());
            for (auto& c : coords) c = rng.cgaussian();
            xs.push_back(s.combine(coords));
        }
        const double nrm = op_norm(stack_tuple(xs));
        if (nrm > 1e-12) {
            const Complex scale(0.9 / nrm, 0.0);
            for (auto& xi : xs) xi *= scale;
        }
        roots.push_back(std::move(xs));
    }
    return roots;
}

}  // namespace

EvalResult eval_formula(const Subalgebra& s, const FormulaPtr& sentence,
                        const EvalOptions& options) {
    if (options.budget == 0) throw PreconditionError("eval_formula: budget must be positive");
    if (options.starts == 0) throw PreconditionError("eval_formula: starts must be positive");
    const std::optional<std::size_t> width = phi_shape(sentence);
    if (!width)
        throw PreconditionError(
            "eval_formula: subalgebra evaluation supports only the built-in sup-inf-inf "
            "sentences");
    if (!s.contains_unit())
        throw PreconditionError("eval_formula: the sentence compares against the unit, which the "
                                "subalgebra does not contain");

    const std::size_t n = *width;
    const ValueRange range = formula_range(sentence);

    EvalResult out;
    out.lower = range.lo;
    out.lower_method = "range";

    double est = -std::numeric_limits<double>::infinity();
    std::uint64_t used = 0;
    for (const auto& root : root_candidates(s, n, options)) {
        if (used >= options.budget) break;
        double best = std::numeric_limits<double>::infinity();
        std::vector<SpanPair> pairs;
        if (n == 1) {
            pairs.push_back(shifted_pair(s, root[0], 1e-4));
            pairs.push_back(shifted_pair(s, root[0], 5e-3));
        }
        pairs.push_back(right_multiplier_pair(root, 1e-8));
        for (const auto& pair : pairs) {
            if (used >= options.budget) break;
            ++used;
            const double val = phi_body_value(root, pair.v, pair.y) + span_pad(s, pair.v, pair.y);
            best = std::min(best, val);
        }
        if (best < std::numeric_limits<double>::infinity()) est = std::max(est, best);
    }

    if (est > -std::numeric_limits<double>::infinity()) {
        out.upper = std::min(std::max(est, out.lower), range.hi);
        out.upper_method = "search";
    } else {
        out.upper = range.hi;
        out.upper_method = "range";
    }
    out.budget_used = used;
    return out;
}

SrEstimate estimate_sr(const Subalgebra& s, std::size_t n_max, const EvalOptions& options) {
    if (n_max == 0) throw PreconditionError("estimate_sr: n_max must be positive");
    SrEstimate out;
    out.n_max = n_max;
    const Rng base(options.seed);
    for (std::size_t n = 1; n <= n_max; ++n) {
        EvalOptions per = options;
        per.seed = base.fork(n).seed();
        EvalResult trial = eval_formula(s, build_phi_n(n), per);
        out.trials.push_back(trial);
        if (trial.upper <= kSrDecisionCut) {
            out.rank = n;
            break;
        }
    }
    return out;
}

SrExperimentReport sr_stability_experiment(const std::vector<SrExperimentPair>& pairs,
                                           std::size_t n_max, const EvalOptions& options) {
    SrExperimentReport report;
    const Rng base(options.seed);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const SrExperimentPair& pair = pairs[i];
        SrExperimentRow row;
        row.label = pair.label;
        row.kk_upper = pair.kk_upper;
        row.n_max = n_max;

        EvalOptions first_opts = options;
        first_opts.seed = base.fork(2 * i).seed();
        EvalOptions second_opts = options;
        second_opts.seed = base.fork(2 * i + 1).seed();

        const auto run = [n_max](const ExperimentMember& member, const EvalOptions& opts) {
            return std::visit(
                [&](const auto& algebra) { return estimate_sr(algebra, n_max, opts).rank; },
                member);
        };
        row.sr_first = run(pair.first, first_opts);
        row.sr_second = run(pair.second, second_opts);
        row.agree = row.sr_first == row.sr_second;
        if (row.agree)
            ++report.agreements;
        else
            ++report.disagreements;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<SrExperimentPair> standard_experiment_pairs(std::size_t matrix_pairs,
                                                        std::size_t disk_pairs, double epsilon,
                                                        std::uint64_t seed) {
    if (!(epsilon >= 0.0))
        throw PreconditionError("standard_experiment_pairs: epsilon must be nonnegative");

    static const std::vector<std::vector<std::vector<std::size_t>>> kPartitions = {
        {{2}, {1, 1}},
        {{3}, {2, 1}, {1, 1, 1}},
        {{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}},
    };

    std::vector<SrExperimentPair> pairs;
    pairs.reserve(matrix_pairs + disk_pairs);
    const Rng base(seed);
    for (std::size_t i = 0; i < matrix_pairs; ++i) {
        const std::size_t d = 2 + i % 3;
        Rng pick = base.fork(i);
        const auto& options_for_d = kPartitions[d - 2];
        const auto& part = options_for_d[pick.index(options_for_d.size())];

        Subalgebra plain = Subalgebra::block_diagonal(d, part);
        Subalgebra moved = perturb_algebra(plain, epsilon, pick.bits());
        const KkCertificate cert = kk_distance(plain, moved, 200);

        std::string label = "matrix-" + std::to_string(i) + "-" + std::to_string(d) + "=";
        for (std::size_t p = 0; p < part.size(); ++p) {
            if (p > 0) label += "+";
            label += std::to_string(part[p]);
        }
        pairs.push_back(SrExperimentPair{std::move(label), ExperimentMember(std::move(plain)),
                                         ExperimentMember(std::move(moved)), cert.upper});
    }

    if (disk_pairs > 0) {
        const auto mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::disk(32));
        const Algebra disk = Algebra::sampled_field(mesh, 1);
        for (std::size_t j = 0; j < disk_pairs; ++j) {
            pairs.push_back(SrExperimentPair{"disk-" + std::to_string(j), ExperimentMember(disk),
                                             ExperimentMember(disk), 0.0});
        }
    }
    return pairs;
}

}  // namespace csrank
