#include "csrank/kk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"

namespace csrank {

namespace {

constexpr std::size_t kMaxItersPerWitness = 200;
constexpr std::size_t kPairwiseCap = 24;
constexpr std::size_t kUnitaryCap = 8;

double re_ip(const ComplexMatrix& a, const ComplexMatrix& b) {
    double acc = 0.0;
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i)
        acc += da[i].real() * db[i].real() + da[i].imag() * db[i].imag();
    return acc;
}

double trace_norm(const ComplexMatrix& m) {
    if (m.frobenius_norm() == 0.0) return 0.0;
    const EigenDecomposition eig = herm_eig(m.adjoint() * m);
    double acc = 0.0;
    for (double lam : eig.eigenvalues) acc += std::sqrt(std::max(lam, 0.0));
    return acc;
}

struct TopDyad {
    double sigma = 0.0;
    ComplexMatrix dyad;  // u v* with <dyad, R> = sigma, trace norm 1
};

TopDyad top_singular_dyad(const ComplexMatrix& r) {
    TopDyad out;
    const double scale = r.frobenius_norm();
    if (scale == 0.0) return out;
    const EigenDecomposition eig = herm_eig(r.adjoint() * r);
    const std::size_t last = eig.eigenvalues.size() - 1;
    out.sigma = std::sqrt(std::max(eig.eigenvalues[last], 0.0));
    if (out.sigma <= 1e-15 * scale) {
        out.sigma = 0.0;
        return out;
    }
    std::vector<Complex> v(r.cols());
    for (std::size_t i = 0; i < r.cols(); ++i) v[i] = eig.eigenvectors(i, last);
    std::vector<Complex> u(r.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < r.cols(); ++j) u[i] += r(i, j) * v[j];
        u[i] /= out.sigma;
    }
    out.dyad = ComplexMatrix(r.rows(), r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) out.dyad(i, j) = u[i] * std::conj(v[j]);
    return out;
}

ComplexMatrix radial_clip(ComplexMatrix y) {
    const double nrm = op_norm(y);
    if (nrm > 1.0) y *= Complex(1.0 / nrm, 0.0);
    return y;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h) {
    const EigenDecomposition eig = herm_eig(h);
    std::vector<Complex> phases(eig.eigenvalues.size());
    for (std::size_t i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, eig.eigenvalues[i]);
    return eig.eigenvectors * ComplexMatrix::diagonal(phases) * eig.eigenvectors.adjoint();
}

// Deterministic witnesses in the unit ball of s: normalized basis elements,
// normalized pairwise sums/differences (real and imaginary), and for unital
// algebras unitary exponentials of Hermitian basis parts.
std::vector<ComplexMatrix> witness_pool(const Subalgebra& s) {
    std::vector<ComplexMatrix> pool;
    const auto& basis = s.basis();
    for (const auto& b : basis) {
        const double nrm = op_norm(b);
        if (nrm > 1e-12) {
            ComplexMatrix w = b;
            w *= Complex(1.0 / nrm, 0.0);
            pool.push_back(std::move(w));
        }
    }
    std::size_t combos = 0;
    for (std::size_t i = 0; i < basis.size() && combos < kPairwiseCap; ++i) {
        for (std::size_t j = i + 1; j < basis.size() && combos < kPairwiseCap; ++j) {
            const Complex weights[4] = {Complex(1.0, 0.0), Complex(-1.0, 0.0), Complex(0.0, 1.0),
                                        Complex(0.0, -1.0)};
            for (const Complex& w : weights) {
                ComplexMatrix c = basis[j];
                c *= w;
                c += basis[i];
                const double nrm = op_norm(c);
                if (nrm > 1e-12) {
                    c *= Complex(1.0 / nrm, 0.0);
                    pool.push_back(std::move(c));
                    ++combos;
                }
                if (combos >= kPairwiseCap) break;
            }
        }
    }
    if (s.contains_unit()) {
        std::size_t unitaries = 0;
        for (const auto& b : basis) {
            if (unitaries >= kUnitaryCap) break;
            ComplexMatrix h = b.hermitian_part();
            const double nrm = op_norm(h);
            if (nrm <= 1e-10) continue;
            h *= Complex(1.0 / nrm, 0.0);
            pool.push_back(unitary_exp(h));
            ++unitaries;
        }
    }
    return pool;
}

struct InnerOut {
    double dual_lower = 0.0;  // certified lower bound on dist(x, other unit ball)
    double primal = 0.0;      // best ||x - y|| seen
    ComplexMatrix y_best;
};

// Projected subgradient descent on f(y) = ||x - y|| over the unit ball of
// s's span.  The iterate sequence depends only on the iteration index, so a
// larger budget observes a superset of dual bounds: dual_lower is
// nondecreasing in iters.
InnerOut inner_distance(const ComplexMatrix& x, const Subalgebra& s, std::size_t iters) {
    InnerOut out;
    ComplexMatrix y = radial_clip(s.project(x));
    out.y_best = y;
    out.primal = op_norm(x - y);
    for (std::size_t t = 0; t < iters; ++t) {
        const ComplexMatrix r = x - y;
        const TopDyad top = top_singular_dyad(r);
        if (top.sigma == 0.0) {
            out.primal = 0.0;
            out.y_best = y;
            break;
        }
        if (top.sigma < out.primal) {
            out.primal = top.sigma;
            out.y_best = y;
        }
        const ComplexMatrix pg = s.project(top.dyad);
        const double dual = re_ip(top.dyad, x) - trace_norm(pg);
        out.dual_lower = std::max(out.dual_lower, dual);
        const double step = 0.5 / std::sqrt(static_cast<double>(t + 1));
        ComplexMatrix moved = pg;
        moved *= Complex(step, 0.0);
        moved += y;
        y = radial_clip(std::move(moved));
    }
    return out;
}

// True when u conjugates every basis element of src into dst's span.  Only
// meaningful when the dimensions agree, in which case u src u* = dst.
bool conjugates_onto(const ComplexMatrix& u, const Subalgebra& src, const Subalgebra& dst) {
    if (src.dim() != dst.dim()) return false;
    if (u.rows() != src.ambient_dim() || u.cols() != src.ambient_dim()) return false;
    const ComplexMatrix ustar = u.adjoint();
    for (const auto& b : src.basis())
        if (dst.projection_defect(u * b * ustar) > 1e-8) return false;
    return true;
}

}  // namespace

KkCertificate kk_distance(const Subalgebra& a, const Subalgebra& b, std::size_t budget) {
    if (a.ambient_dim() != b.ambient_dim())
        throw PreconditionError("kk_distance: ambient dimensions differ");
    if (budget == 0) throw PreconditionError("kk_distance: budget must be positive");

    const std::size_t d = a.ambient_dim();
    KkCertificate cert;
    cert.witness_x = ComplexMatrix(d, d);
    cert.witness_y = ComplexMatrix(d, d);

    if (a.same_span(b, 1e-12)) {
        cert.lower = 0.0;
        cert.upper = 0.0;
        return cert;
    }

    // 0 lies in both unit balls, so neither ball is farther than 1 from the
    // other pointwise.
    double upper = 1.0;
    const ComplexMatrix id = ComplexMatrix::identity(d);
    if (b.conjugator() && conjugates_onto(*b.conjugator(), a, b))
        upper = std::min(upper, 2.0 * op_norm(*b.conjugator() - id));
    if (a.conjugator() && conjugates_onto(*a.conjugator(), b, a))
        upper = std::min(upper, 2.0 * op_norm(*a.conjugator() - id));

    const std::vector<ComplexMatrix> pool_a = witness_pool(a);
    const std::vector<ComplexMatrix> pool_b = witness_pool(b);
    const std::size_t total = pool_a.size() + pool_b.size();
    // Equal allocation keeps the bounds exactly symmetric in (a, b); every
    // witness runs at least once.
    const std::size_t iters =
        std::min(std::max<std::size_t>(budget / std::max<std::size_t>(total, 1), 1),
                 kMaxItersPerWitness);

    double lower = 0.0;
    for (const auto& x : pool_a) {
        const InnerOut out = inner_distance(x, b, iters);
        if (out.dual_lower > lower) {
            lower = out.dual_lower;
            cert.witness_x = x;
            cert.witness_y = out.y_best;
        }
    }
    for (const auto& x : pool_b) {
        const InnerOut out = inner_distance(x, a, iters);
        if (out.dual_lower > lower) {
            lower = out.dual_lower;
            cert.witness_x = x;
            cert.witness_y = out.y_best;
        }
    }

    lower = std::min(lower, 2.0);
    if (lower > upper) {
        if (lower - upper > 1e-9)
            throw ContractViolation("kk_distance: certified lower bound " + std::to_string(lower) +
                                    " exceeds upper bound " + std::to_string(upper));
        lower = upper;
    }
    cert.lower = lower;
    cert.upper = upper;
    return cert;
}

}  // namespace csrank
