#include "csrank/tuple_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/functional_calculus.hpp"
#include "csrank/polar.hpp"

namespace csrank {

namespace {

std::vector<Element> unstack(const Algebra& algebra, const std::vector<ComplexMatrix>& stacks,
                             std::size_t n, double entry_budget) {
    std::vector<std::vector<ComplexMatrix>> per_entry(n);
    for (auto& fibers : per_entry) fibers.reserve(stacks.size());
    for (std::size_t f = 0; f < stacks.size(); ++f) {
        const std::size_t k = algebra.fiber_dim(f);
        for (std::size_t i = 0; i < n; ++i) {
            per_entry[i].push_back(stacks[f].block(i * k, 0, k, k));
        }
    }
    std::vector<Element> entries;
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        entries.push_back(Element::from_fibers(algebra, std::move(per_entry[i]),
                                               algebra.is_field() ? entry_budget : 0.0));
    }
    return entries;
}

// U (Sigma + delta) V* from the eigendecomposition of the gram matrix, with
// left directions on the kernel completed deterministically from the standard
// basis so the shift is full rank even where the input is not.
ComplexMatrix sigma_shift_stack(const ComplexMatrix& stack, double delta) {
    const std::size_t rows = stack.rows();
    const std::size_t k = stack.cols();
    const ComplexMatrix gram = (stack.adjoint() * stack).hermitian_part();
    const EigenDecomposition eig = herm_eig(gram);

    std::vector<double> sigma(k);
    double sigma_max = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sigma[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
        sigma_max = std::max(sigma_max, sigma[i]);
    }
    const double cut = 1e-12 * sigma_max;

    std::vector<std::vector<Complex>> left;
    left.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Complex> u(rows, Complex(0.0, 0.0));
        if (sigma[i] > cut && sigma[i] > 0.0) {
            for (std::size_t r = 0; r < rows; ++r) {
                Complex acc(0.0, 0.0);
                for (std::size_t c = 0; c < k; ++c) acc += stack(r, c) * eig.eigenvectors(c, i);
                u[r] = acc / sigma[i];
            }
        } else {
            // First standard basis vector with a substantial residual.
            for (std::size_t e = 0; e < rows; ++e) {
                std::vector<Complex> r(rows, Complex(0.0, 0.0));
                r[e] = Complex(1.0, 0.0);
                for (const auto& prev : left) {
                    Complex overlap(0.0, 0.0);
                    for (std::size_t j = 0; j < rows; ++j) overlap += std::conj(prev[j]) * r[j];
                    for (std::size_t j = 0; j < rows; ++j) r[j] -= overlap * prev[j];
                }
                double nrm = 0.0;
                for (const auto& z : r) nrm += std::norm(z);
                nrm = std::sqrt(nrm);
                if (nrm > 0.5) {
                    for (auto& z : r) z /= nrm;
                    u = std::move(r);
                    break;
                }
            }
        }
        left.push_back(std::move(u));
    }

    ComplexMatrix out(rows, k);
    for (std::size_t i = 0; i < k; ++i) {
        const double s = sigma[i] + delta;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < k; ++c)
                out(r, c) += s * left[i][r] * std::conj(eig.eigenvectors(c, i));
    }
    return out;
}

double observed_stack_slope(const Algebra& algebra, const std::vector<ComplexMatrix>& stacks) {
    if (!algebra.is_field()) return 0.0;
    const auto& mesh = *algebra.mesh();
    double slope = 0.0;
    for (std::size_t j = 0; j < mesh.edge_count(); ++j) {
        const auto& edge = mesh.edges()[j];
        ComplexMatrix diff = stacks[edge[0]];
        diff -= stacks[edge[1]];
        slope = std::max(slope, diff.frobenius_norm() / mesh.edge_lengths()[j]);
    }
    return slope;
}

}  // namespace

Element tuple_gram(const Tuple& a) {
    const Algebra& algebra = a.algebra();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        fibers.push_back(a.gram_fiber(f).hermitian_part());
    }
    const double budget = algebra.is_field() ? 2.0 * a.norm_upper() * a.stack_lipschitz() : 0.0;
    return Element::from_fibers(algebra, std::move(fibers), budget);
}

Element tuple_abs(const Tuple& a) {
    const Algebra& algebra = a.algebra();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        fibers.push_back(matrix_abs(a.stack_fiber(f)));
    }
    const double budget =
        algebra.is_field() ? std::sqrt(2.0) * a.stack_lipschitz() : 0.0;
    return Element::from_fibers(algebra, std::move(fibers), budget);
}

TuplePolar tuple_polar(const Tuple& a, double tau) {
    const Algebra& algebra = a.algebra();
    std::vector<ComplexMatrix> isometry_stacks;
    std::vector<ComplexMatrix> moduli;
    isometry_stacks.reserve(algebra.fiber_count());
    moduli.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        PolarParts parts = polar(a.stack_fiber(f), tau);
        isometry_stacks.push_back(std::move(parts.partial_isometry));
        moduli.push_back(std::move(parts.modulus));
    }

    double isometry_budget = 0.0;
    if (algebra.is_field()) {
        const double stack_budget = a.stack_lipschitz();
        const double floor =
            std::sqrt(std::max(0.0, a.sigma_min_sq())) - stack_budget * algebra.cover_radius();
        if (floor > 0.0) {
            isometry_budget = stack_budget / floor;
        } else {
            // No certified spectral floor: fall back to the slope of the
            // sampled direction field itself.
            isometry_budget = observed_stack_slope(algebra, isometry_stacks);
        }
    }

    TuplePolar out{Tuple(unstack(algebra, isometry_stacks, a.size(), isometry_budget)),
                   Element::from_fibers(algebra, std::move(moduli),
                                        algebra.is_field()
                                            ? std::sqrt(2.0) * a.stack_lipschitz()
                                            : 0.0)};
    return out;
}

TuplePolar tuple_polar(const Tuple& a) {
    const double scale = a.norm();
    return tuple_polar(a, std::max(1e-10 * scale, 1e-300));
}

Tuple tuple_right_multiplier(const Tuple& a, const ScalarProfile& profile) {
    if (profile.kind() == ScalarProfile::Kind::Identity) return a;
    if (!profile.ratio_bounded_at_zero()) {
        throw DomainError("profile has unbounded ratio at zero; cannot act as right multiplier");
    }
    const Algebra& algebra = a.algebra();
    std::vector<ComplexMatrix> stacks;
    stacks.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        const ComplexMatrix stacked = a.stack_fiber(f);
        const ComplexMatrix gram = stacked.adjoint() * stacked;
        EigenDecomposition eig = herm_eig(gram.hermitian_part());
        const std::size_t k = gram.rows();
        std::vector<double> q(k);
        for (std::size_t i = 0; i < k; ++i) {
            q[i] = profile.ratio(std::sqrt(std::max(0.0, eig.eigenvalues[i])));
        }
        ComplexMatrix transform = eig.eigenvectors * ComplexMatrix::diagonal(q) *
                                  eig.eigenvectors.adjoint();
        stacks.push_back(stacked * transform.hermitian_part());
    }

    double entry_budget = 0.0;
    if (algebra.is_field()) {
        const double stack_budget = a.stack_lipschitz();
        if (a.size() == 1 && algebra.fiber_dim(0) == 1) {
            entry_budget = profile.plane_map_lipschitz() * stack_budget;
        } else {
            const double hi = a.norm_upper();
            entry_budget = profile.ratio_sup_on(hi) * stack_budget +
                           hi * profile.ratio_lipschitz_on(hi) * std::sqrt(2.0) * stack_budget;
        }
    }
    return Tuple(unstack(algebra, stacks, a.size(), entry_budget));
}

Element element_func_calc(const Element& h, const ScalarProfile& profile) {
    const Algebra& algebra = h.algebra();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        fibers.push_back(func_calc(h.fiber(f), profile));
    }
    double budget = 0.0;
    if (algebra.is_field()) {
        budget = profile.lipschitz_on(h.norm_upper()) * h.lipschitz();
    }
    return Element::from_fibers(algebra, std::move(fibers), budget);
}

Tuple tuple_sigma_shift(const Tuple& a, double delta) {
    if (!(delta >= 0.0)) throw PreconditionError("tuple_sigma_shift: delta must be nonnegative");
    const Algebra& algebra = a.algebra();
    std::vector<ComplexMatrix> stacks;
    stacks.reserve(algebra.fiber_count());
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        stacks.push_back(sigma_shift_stack(a.stack_fiber(f), delta));
    }
    const double budget = observed_stack_slope(algebra, stacks);
    return Tuple(unstack(algebra, stacks, a.size(), budget));
}

Element element_inverse(const Element& e, double floor_hint) {
    const Algebra& algebra = e.algebra();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    double sigma_floor = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
        fibers.push_back(inverse(e.fiber(f)));
        sigma_floor = std::min(sigma_floor, std::sqrt(min_eig_gram(e.fiber(f))));
    }
    double budget = 0.0;
    if (algebra.is_field() && e.lipschitz() > 0.0) {
        const double certified_floor = std::max(
            sigma_floor - e.lipschitz() * algebra.cover_radius(), floor_hint);
        if (certified_floor <= 0.0) {
            throw PreconditionError(
                "field inverse needs a positive spectral floor across the region");
        }
        budget = e.lipschitz() / (certified_floor * certified_floor);
    }
    return Element::from_fibers(algebra, std::move(fibers), budget);
}

}  // namespace csrank
