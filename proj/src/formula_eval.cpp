#include "csrank/formula_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "csrank/distance.hpp"
#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/profiles.hpp"
#include "csrank/random_elements.hpp"
#include "csrank/rng.hpp"
#include "csrank/tuple_calculus.hpp"

namespace csrank {

namespace {

struct TermValue {
    TermSort sort;
    Tuple value;  // rows (CoTuple) are stored as their adjoint column
};

using Env = std::map<std::string, TermValue>;

Tuple singleton(Element e) {
    std::vector<Element> entries;
    entries.push_back(std::move(e));
    return Tuple(std::move(entries));
}

TermValue eval_term(const FormulaNode* node, const Env& env, const Algebra& algebra) {
    switch (node->kind) {
        case NodeKind::kVar: {
            const auto it = env.find(node->name);
            if (it == env.end())
                throw ContractViolation("evaluation reached unbound variable " + node->name);
            return it->second;
        }
        case NodeKind::kOne:
            return {TermSort::kScalar, singleton(Element::one(algebra))};
        case NodeKind::kTermSum: {
            TermValue a = eval_term(node->children[0].get(), env, algebra);
            const TermValue b = eval_term(node->children[1].get(), env, algebra);
            return {node->term_sort, std::move(a.value) + b.value};
        }
        case NodeKind::kTermSub: {
            TermValue a = eval_term(node->children[0].get(), env, algebra);
            const TermValue b = eval_term(node->children[1].get(), env, algebra);
            return {node->term_sort, std::move(a.value) - b.value};
        }
        case NodeKind::kTermScale: {
            TermValue a = eval_term(node->children[0].get(), env, algebra);
            // Scalars in the grammar are real, so the stored adjoint column of
            // a row scales by the same factor.
            return {node->term_sort, Complex(node->scalar, 0.0) * std::move(a.value)};
        }
        case NodeKind::kTermProduct: {
            const TermValue a = eval_term(node->children[0].get(), env, algebra);
            const TermValue b = eval_term(node->children[1].get(), env, algebra);
            if (a.sort == TermSort::kTuple && b.sort == TermSort::kScalar)
                return {TermSort::kTuple, mul_element(a.value, b.value.entry(0))};
            if (a.sort == TermSort::kCoTuple && b.sort == TermSort::kTuple)
                return {TermSort::kScalar, singleton(inner(a.value, b.value))};
            if (a.sort == TermSort::kScalar && b.sort == TermSort::kScalar)
                return {TermSort::kScalar, singleton(mul(a.value.entry(0), b.value.entry(0)))};
            throw ContractViolation("evaluation reached a product with unsupported sorts");
        }
        case NodeKind::kAdjoint: {
            TermValue a = eval_term(node->children[0].get(), env, algebra);
            if (a.sort == TermSort::kScalar)
                return {TermSort::kScalar, singleton(adjoint(a.value.entry(0)))};
            return {node->term_sort, std::move(a.value)};
        }
        case NodeKind::kTupleOf: {
            std::vector<Element> entries;
            entries.reserve(node->children.size());
            for (const auto& child : node->children)
                entries.push_back(eval_term(child.get(), env, algebra).value.entry(0));
            return {TermSort::kTuple, Tuple(std::move(entries))};
        }
        default:
            throw ContractViolation("evaluation reached a non-term node");
    }
}

double eval_body(const FormulaNode* node, const Env& env, const Algebra& algebra) {
    switch (node->kind) {
        case NodeKind::kMax:
            return std::max(eval_body(node->children[0].get(), env, algebra),
                            eval_body(node->children[1].get(), env, algebra));
        case NodeKind::kMin:
            return std::min(eval_body(node->children[0].get(), env, algebra),
                            eval_body(node->children[1].get(), env, algebra));
        case NodeKind::kTSub:
            return std::max(eval_body(node->children[0].get(), env, algebra) -
                                eval_body(node->children[1].get(), env, algebra),
                            0.0);
        case NodeKind::kBodySum:
            return eval_body(node->children[0].get(), env, algebra) +
                   eval_body(node->children[1].get(), env, algebra);
        case NodeKind::kBodyScale:
            return node->scalar * eval_body(node->children[0].get(), env, algebra);
        case NodeKind::kConst:
            return node->scalar;
        case NodeKind::kNorm:
            // The norm of a row equals the norm of its adjoint column.
            return tuple_norm(eval_term(node->children[0].get(), env, algebra).value);
        default:
            throw ContractViolation("evaluation reached a non-body node");
    }
}

struct Quant {
    bool is_sup;
    std::string name;
    VarSort sort;
};

const FormulaNode* split_prefix(const FormulaPtr& f, std::vector<Quant>& out) {
    const FormulaNode* node = f.get();
    while (node->kind == NodeKind::kSup || node->kind == NodeKind::kInf) {
        out.push_back({node->kind == NodeKind::kSup, node->name, node->sort});
        node = node->children[0].get();
    }
    return node;
}

Tuple project_ball(Tuple t) {
    const double nrm = tuple_norm(t);
    if (nrm > 1.0) t *= Complex(1.0 / nrm, 0.0);
    return t;
}

// Nearest positive contraction, fiberwise: hermitian part, then spectral clip
// to [0, 1].  Both steps are 1-Lipschitz in Frobenius norm, so a field keeps
// its slope budget.
Element project_posball(const Element& e) {
    const Algebra& algebra = e.algebra();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        const EigenDecomposition eig = herm_eig(e.fiber(f).hermitian_part());
        std::vector<double> clipped(eig.eigenvalues.size());
        for (std::size_t i = 0; i < clipped.size(); ++i)
            clipped[i] = std::clamp(eig.eigenvalues[i], 0.0, 1.0);
        ComplexMatrix m = eig.eigenvectors * ComplexMatrix::diagonal(clipped) *
                          eig.eigenvectors.adjoint();
        fibers.push_back(m.hermitian_part());
    }
    return Element::from_fibers(algebra, std::move(fibers), e.lipschitz(), false);
}

TermValue project_var(const VarSort& sort, Tuple raw) {
    if (sort.kind == SortKind::kBallTuple)
        return {TermSort::kTuple, project_ball(std::move(raw))};
    return {TermSort::kScalar, singleton(project_posball(raw.entry(0)))};
}

TermValue random_var(const Algebra& algebra, const VarSort& sort, std::uint64_t seed) {
    const std::size_t n = sort.kind == SortKind::kBallTuple ? sort.width : 1;
    return project_var(sort, random_element(algebra, n, seed, 0.6));
}

TermValue perturb_var(const Algebra& algebra, const VarSort& sort, const TermValue& base,
                      double step, std::uint64_t seed) {
    const std::size_t n = sort.kind == SortKind::kBallTuple ? sort.width : 1;
    Tuple dir = random_element(algebra, n, seed, 1.0);
    const double nrm = tuple_norm(dir);
    // Unit directions make `step` the actual movement scale.
    if (nrm > 1e-12) dir *= Complex(1.0 / nrm, 0.0);
    Tuple moved = base.value + Complex(step, 0.0) * std::move(dir);
    return project_var(sort, std::move(moved));
}

std::vector<TermValue> analytic_vars(const Algebra& algebra, const VarSort& sort) {
    std::vector<TermValue> out;
    if (sort.kind == SortKind::kBallTuple) {
        std::vector<Element> unit;
        unit.push_back(Element::one(algebra));
        for (std::size_t i = 1; i < sort.width; ++i) unit.push_back(Element::zero(algebra));
        out.push_back({TermSort::kTuple, Tuple(std::move(unit))});
        if (algebra.is_field()) {
            std::vector<Element> coord;
            coord.push_back(Element::coordinate(algebra));
            for (std::size_t i = 1; i < sort.width; ++i) coord.push_back(Element::zero(algebra));
            out.push_back(project_var(sort, Tuple(std::move(coord))));
        }
        out.push_back({TermSort::kTuple, Tuple::zero(algebra, sort.width)});
    } else {
        out.push_back({TermSort::kScalar, singleton(Element::one(algebra))});
        out.push_back({TermSort::kScalar, singleton(Element::zero(algebra))});
    }
    return out;
}

// Deterministic budget split: slot j of `count` gets a share that only grows
// when the total grows, so a larger budget evaluates a superset of slots.
std::uint64_t share(std::uint64_t total, std::size_t count, std::size_t j) {
    return (total + static_cast<std::uint64_t>(count - 1 - j)) / count;
}

struct Outcome {
    double value;
    Env assignment;
};

class Search {
public:
    Search(const Algebra& algebra, const std::vector<Quant>& prefix, const FormulaNode* body,
           const EvalOptions& opts)
        : algebra_(algebra), prefix_(prefix), body_(body), opts_(opts) {}

    std::uint64_t used = 0;

    std::optional<Outcome> run(std::size_t level, Env& env, std::uint64_t budget, Rng rng) {
        if (level == prefix_.size()) {
            if (budget == 0) return std::nullopt;
            ++used;
            return Outcome{eval_body(body_, env, algebra_), {}};
        }
        const Quant& q = prefix_[level];
        const std::vector<TermValue> analytic = analytic_vars(algebra_, q.sort);
        const std::size_t count = analytic.size() + opts_.starts;
        // Innermost quantifier: one body evaluation per proposal, so the
        // descent length can track the budget without disturbing the slot
        // layout that keeps larger budgets a superset of smaller ones.
        const bool leaf_next = level + 1 == prefix_.size();
        std::optional<Outcome> best;
        for (std::size_t j = 0; j < count; ++j) {
            const std::uint64_t bj = share(budget, count, j);
            if (bj == 0) break;  // shares only shrink with j
            Rng stream = rng.fork(j);
            TermValue current =
                j < analytic.size() ? analytic[j] : random_var(algebra_, q.sort, stream.bits());
            std::optional<Outcome> local;
            static constexpr double kSteps[] = {0.0, 0.4, 0.2, 0.1, 0.05};
            const std::size_t slots =
                leaf_next ? static_cast<std::size_t>(std::min<std::uint64_t>(bj, 512)) : 5;
            // Innermost descent adapts its step: growth on acceptance,
            // shrinkage on rejection.  The history depends only on exact
            // body values, so it replays identically under larger budgets.
            double step_scale = 0.25;
            for (std::size_t s = 0; s < slots; ++s) {
                const std::uint64_t bs = leaf_next ? 1 : share(bj, 5, s);
                if (bs == 0) break;
                Rng slot = stream.fork(100 + s);
                const double step = leaf_next ? step_scale : kSteps[s];
                TermValue trial = s == 0 ? current
                                         : perturb_var(algebra_, q.sort, current, step,
                                                       slot.bits());
                env.insert_or_assign(q.name, trial);
                auto sub = run(level + 1, env, bs, stream.fork(200 + s));
                if (!sub) continue;
                if (!local || improves(q, sub->value, local->value)) {
                    local = std::move(sub);
                    local->assignment.insert_or_assign(q.name, trial);
                    current = std::move(trial);
                    // One-fifth-success balance: growth^p * shrink^(1-p) = 1
                    // at acceptance p ~ 0.2, so the step tracks the scale at
                    // which a fifth of proposals succeed.
                    if (leaf_next) step_scale = std::min(1.0, step_scale * 1.5);
                } else if (leaf_next && s > 0) {
                    step_scale = std::max(1e-6, step_scale * 0.9);
                }
            }
            env.erase(q.name);
            if (local && (!best || improves(q, local->value, best->value)))
                best = std::move(local);
        }
        return best;
    }

private:
    static bool improves(const Quant& q, double candidate, double incumbent) {
        return q.is_sup ? candidate > incumbent : candidate < incumbent;
    }

    const Algebra& algebra_;
    const std::vector<Quant>& prefix_;
    const FormulaNode* body_;
    const EvalOptions& opts_;
};

// Regularized polar pair: raise every singular value of x by delta, take the
// exact polar direction of the shifted tuple and its clipped modulus.  For
// ||x|| <= 1 the pairing term sits within 2*delta of x and the direction is
// an isometry to machine precision.
InnerCandidate sigma_pair(const Tuple& x, double delta) {
    const Tuple shifted = tuple_sigma_shift(x, delta);
    Tuple v = project_ball(tuple_polar(shifted).isometry);
    Element y = element_func_calc(tuple_abs(shifted), ScalarProfile::ramp_clip(1.0));
    return {std::move(v), std::move(y)};
}

std::vector<InnerCandidate> inner_pairs(const Tuple& x) {
    std::vector<InnerCandidate> out;
    out.push_back(inner_inf_candidate(x));
    out.push_back(sigma_pair(x, 1e-4));
    out.push_back(sigma_pair(x, 5e-3));
    return out;
}

// Dedicated evaluator for the built-in sup-inf-inf sentences.  The search
// side estimates the value from analytic inner pairs plus a short descent;
// the certified side comes from the boundary obstruction of the outer
// variable, which vertex sampling alone cannot see.
class PhiEval {
public:
    PhiEval(const Algebra& algebra, const std::vector<Quant>& prefix, const FormulaNode* body)
        : algebra_(algebra), prefix_(prefix), body_(body) {}

    std::uint64_t used = 0;

    double body_at(const Tuple& x, const Tuple& v, const Element& y) {
        Env env;
        env.insert_or_assign(prefix_[0].name, TermValue{TermSort::kTuple, x});
        env.insert_or_assign(prefix_[1].name, TermValue{TermSort::kTuple, v});
        env.insert_or_assign(prefix_[2].name, TermValue{TermSort::kScalar, singleton(y)});
        ++used;
        return eval_body(body_, env, algebra_);
    }

    struct InnerMin {
        double value = std::numeric_limits<double>::infinity();
        std::optional<InnerCandidate> pair;
    };

    InnerMin inner_min(const Tuple& x, std::uint64_t budget, Rng rng) {
        InnerMin out;
        std::uint64_t left = budget;
        for (auto& pr : inner_pairs(x)) {
            if (left == 0) return out;
            --left;
            const double val = body_at(x, pr.v, pr.y);
            if (val < out.value) {
                out.value = val;
                out.pair = std::move(pr);
            }
        }
        if (!out.pair) return out;
        Tuple v = out.pair->v;
        Element y = out.pair->y;
        static constexpr double kSteps[] = {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005};
        for (std::size_t s = 0; s < 8 && left > 0; ++s) {
            --left;
            Rng slot = rng.fork(s);
            Tuple vp = project_ball(
                v + Complex(kSteps[s], 0.0) *
                        random_element(algebra_, x.size(), slot.bits(), 1.0));
            Element yp = project_posball(
                y + Complex(kSteps[s], 0.0) *
                        random_element(algebra_, 1, slot.bits(), 1.0).entry(0));
            const double val = body_at(x, vp, yp);
            if (val < out.value) {
                out.value = val;
                out.pair = InnerCandidate{vp, yp};
                v = std::move(vp);
                y = std::move(yp);
            }
        }
        return out;
    }

private:
    const Algebra& algebra_;
    const std::vector<Quant>& prefix_;
    const FormulaNode* body_;
};

EvalResult eval_phi(const Algebra& algebra, std::size_t n, const std::vector<Quant>& prefix,
                    const FormulaNode* body, const ValueRange& range, const EvalOptions& opts) {
    PhiEval phi(algebra, prefix, body);
    const Rng root(opts.seed);

    std::vector<Tuple> xs;
    if (algebra.is_field()) {
        std::vector<Element> coord;
        coord.push_back(Element::coordinate(algebra));
        for (std::size_t i = 1; i < n; ++i) coord.push_back(Element::zero(algebra));
        xs.push_back(project_ball(Tuple(std::move(coord))));
    }
    {
        std::vector<Element> unit;
        unit.push_back(Element::one(algebra));
        for (std::size_t i = 1; i < n; ++i) unit.push_back(Element::zero(algebra));
        xs.push_back(Tuple(std::move(unit)));
    }
    const std::size_t count = xs.size() + opts.starts;
    while (xs.size() < count) {
        Rng stream = root.fork(xs.size());
        xs.push_back(project_ball(random_element(algebra, n, stream.bits(), 0.6)));
    }

    double hook_best = 0.0;
    std::optional<Tuple> hook_x;
    double est_best = -std::numeric_limits<double>::infinity();
    std::optional<Tuple> est_x;
    std::optional<InnerCandidate> est_pair;

    for (std::size_t j = 0; j < count; ++j) {
        const Tuple& x = xs[j];
        const WindingBound wb = winding_lower_bound(x);
        if (wb.certified) {
            const double h = std::min(1.0, wb.lower);
            if (h > hook_best) {
                hook_best = h;
                hook_x = x;
            }
        }
        const std::uint64_t bj = share(opts.budget, count, j);
        if (bj == 0) continue;
        PhiEval::InnerMin im = phi.inner_min(x, bj, root.fork(7000 + j));
        if (im.pair && im.value > est_best) {
            est_best = im.value;
            est_x = x;
            est_pair = std::move(im.pair);
        }
    }

    EvalResult res;
    res.budget_used = phi.used;
    res.lower = std::max(range.lo, hook_best);
    res.lower_method = hook_best > range.lo ? "obstruction" : "range";
    if (est_x) {
        res.upper = std::min(std::max(est_best, res.lower), range.hi);
        res.upper_method = est_best >= res.lower ? "search" : "raised-to-lower";
    } else {
        res.upper = range.hi;
        res.upper_method = "range";
    }
    if (res.upper_method == "raised-to-lower" && hook_x) {
        res.witnesses.insert_or_assign(prefix[0].name, *hook_x);
    } else if (est_x) {
        res.witnesses.insert_or_assign(prefix[0].name, *est_x);
        res.witnesses.insert_or_assign(prefix[1].name, est_pair->v);
        res.witnesses.insert_or_assign(prefix[2].name, singleton(est_pair->y));
    } else if (hook_x) {
        res.witnesses.insert_or_assign(prefix[0].name, *hook_x);
    }
    return res;
}

}  // namespace

InnerCandidate inner_inf_candidate(const Tuple& x) {
    if (tuple_norm(x) > 1.0 + 1e-9)
        throw PreconditionError("inner_inf_candidate: ||x|| must be at most 1");
    const double sigma = std::sqrt(std::max(x.sigma_min_sq(), 0.0));
    // Below the smallest singular value the direction profile is exact, so
    // eps = sigma/2 keeps v an isometry whenever x is bounded below.
    const double eps = std::max(1e-8, 0.5 * sigma);
    Tuple v = tuple_right_multiplier(x, ScalarProfile::normalized_direction(eps));
    Element y = element_func_calc(tuple_abs(x), ScalarProfile::ramp_clip(1.0));
    return {std::move(v), std::move(y)};
}

EvalResult eval_formula(const Algebra& algebra, const FormulaPtr& sentence,
                        const EvalOptions& options) {
    if (!sentence) throw PreconditionError("eval_formula: sentence is null");
    if (options.budget == 0) throw PreconditionError("eval_formula: budget must be positive");
    if (options.starts == 0) throw PreconditionError("eval_formula: needs at least one start");

    std::vector<Quant> prefix;
    const FormulaNode* body = split_prefix(sentence, prefix);
    if (prefix.empty()) throw ContractViolation("eval_formula: sentence has no quantifier");
    const ValueRange range = formula_range(sentence);

    if (const auto n = phi_shape(sentence))
        return eval_phi(algebra, *n, prefix, body, range, options);

    Search search(algebra, prefix, body, options);
    Env env;
    const auto out = search.run(0, env, options.budget, Rng(options.seed));

    EvalResult res;
    res.budget_used = search.used;
    if (!out) {
        res.lower = range.lo;
        res.upper = range.hi;
        return res;
    }

    bool all_sup = true;
    bool all_inf = true;
    for (const Quant& q : prefix) (q.is_sup ? all_inf : all_sup) = false;

    const double est = std::clamp(out->value, range.lo, range.hi);
    if (all_sup) {
        // Every evaluated assignment is feasible, so the best one certifies
        // the lower side; the upper side has only the analytic cap.
        res.lower = est;
        res.upper = range.hi;
        res.lower_method = "search";
        res.upper_method = "range";
    } else if (all_inf) {
        res.lower = range.lo;
        res.upper = est;
        res.lower_method = "range";
        res.upper_method = "search";
    } else {
        res.lower = range.lo;
        res.upper = est;
        res.lower_method = "range";
        res.upper_method = "search";
    }
    for (const auto& [name, tv] : out->assignment) res.witnesses.insert_or_assign(name, tv.value);
    return res;
}

}  // namespace csrank
