#include "csrank/subalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/rng.hpp"

namespace csrank {

namespace {

constexpr double kGramTol = 1e-10;
constexpr double kClosureTol = 1e-8;

Complex trace_ip(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex acc(0.0, 0.0);
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) acc += std::conj(da[i]) * db[i];
    return acc;
}

// Two-pass modified Gram-Schmidt; directions whose remainder drops below
// drop_tol of their original size are discarded.
std::vector<ComplexMatrix> orthonormalize(std::vector<ComplexMatrix> span, double drop_tol) {
    std::vector<ComplexMatrix> basis;
    for (auto& raw : span) {
        const double original = raw.frobenius_norm();
        if (original <= 0.0) continue;
        ComplexMatrix r = std::move(raw);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const Complex overlap = trace_ip(b, r);
                ComplexMatrix shift = b;
                shift *= overlap;
                r -= shift;
            }
        }
        const double remainder = r.frobenius_norm();
        if (remainder <= drop_tol * original) continue;
        r *= Complex(1.0 / remainder, 0.0);
        basis.push_back(std::move(r));
    }
    return basis;
}

}  // namespace

Subalgebra::Subalgebra(std::size_t ambient_dim, std::vector<ComplexMatrix> basis,
                       bool contains_unit)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), contains_unit_(contains_unit) {
    if (ambient_dim_ == 0) throw PreconditionError("subalgebra: ambient dimension must be positive");
    if (basis_.empty()) throw PreconditionError("subalgebra: basis must be nonempty");
    for (const auto& b : basis_) {
        if (b.rows() != ambient_dim_ || b.cols() != ambient_dim_)
            throw PreconditionError("subalgebra: basis matrix has wrong shape");
        if (!b.all_finite()) throw PreconditionError("subalgebra: basis matrix is not finite");
    }

    for (std::size_t i = 0; i < basis_.size(); ++i) {
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            const Complex g = trace_ip(basis_[i], basis_[j]);
            const Complex want = i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            if (std::abs(g - want) > kGramTol)
                throw CertificateError("subalgebra: basis gram matrix deviates from identity by " +
                                       std::to_string(std::abs(g - want)));
        }
    }

    for (const auto& b : basis_) {
        const double adj_defect = projection_defect(b.adjoint());
        if (adj_defect > kClosureTol)
            throw CertificateError("subalgebra: adjoint leaves the span by " +
                                   std::to_string(adj_defect));
    }
    for (const auto& a : basis_) {
        for (const auto& b : basis_) {
            const double prod_defect = projection_defect(a * b);
            if (prod_defect > kClosureTol)
                throw CertificateError("subalgebra: product leaves the span by " +
                                       std::to_string(prod_defect));
        }
    }
    if (contains_unit_) {
        const double unit_defect = projection_defect(ComplexMatrix::identity(ambient_dim_));
        if (unit_defect > kClosureTol)
            throw CertificateError("subalgebra: unit leaves the span by " +
                                   std::to_string(unit_defect));
    }
}

Subalgebra Subalgebra::full_matrix(std::size_t d) {
    std::vector<std::size_t> blocks = {d};
    return block_diagonal(d, blocks);
}

Subalgebra Subalgebra::block_diagonal(std::size_t d, const std::vector<std::size_t>& blocks) {
    if (d == 0) throw PreconditionError("subalgebra: ambient dimension must be positive");
    std::size_t total = 0;
    for (std::size_t k : blocks) {
        if (k == 0) throw PreconditionError("subalgebra: zero block size");
        total += k;
    }
    if (total > d) throw PreconditionError("subalgebra: blocks exceed the ambient dimension");
    std::vector<ComplexMatrix> basis;
    std::size_t offset = 0;
    for (std::size_t k : blocks) {
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                ComplexMatrix unit(d, d);
                unit(offset + r, offset + c) = Complex(1.0, 0.0);
                basis.push_back(std::move(unit));
            }
        }
        offset += k;
    }
    return Subalgebra(d, std::move(basis), total == d);
}

Subalgebra Subalgebra::diagonal(std::size_t d) {
    return block_diagonal(d, std::vector<std::size_t>(d, 1));
}

Subalgebra Subalgebra::from_span(std::size_t d, const std::vector<ComplexMatrix>& span,
                                 bool contains_unit) {
    return Subalgebra(d, orthonormalize(span, 1e-10), contains_unit);
}

std::vector<Complex> Subalgebra::coordinates(const ComplexMatrix& x) const {
    std::vector<Complex> coords(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) coords[i] = trace_ip(basis_[i], x);
    return coords;
}

ComplexMatrix Subalgebra::project(const ComplexMatrix& x) const {
    return combine(coordinates(x));
}

ComplexMatrix Subalgebra::combine(const std::vector<Complex>& coords) const {
    if (coords.size() != basis_.size())
        throw PreconditionError("subalgebra: coordinate count does not match the basis");
    ComplexMatrix out(ambient_dim_, ambient_dim_);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        ComplexMatrix term = basis_[i];
        term *= coords[i];
        out += term;
    }
    return out;
}

double Subalgebra::projection_defect(const ComplexMatrix& x) const {
    return (x - project(x)).frobenius_norm();
}

bool Subalgebra::same_span(const Subalgebra& other, double tol) const {
    if (ambient_dim_ != other.ambient_dim_ || dim() != other.dim()) return false;
    for (const auto& b : basis_)
        if (other.projection_defect(b) > tol) return false;
    for (const auto& b : other.basis_)
        if (projection_defect(b) > tol) return false;
    return true;
}

Subalgebra conjugate_subalgebra(const Subalgebra& s, const ComplexMatrix& u) {
    const std::size_t d = s.ambient_dim();
    if (u.rows() != d || u.cols() != d)
        throw PreconditionError("conjugate_subalgebra: unitary has wrong shape");
    const double unitary_defect = (u * u.adjoint() - ComplexMatrix::identity(d)).frobenius_norm();
    if (unitary_defect > 1e-10)
        throw PreconditionError("conjugate_subalgebra: conjugator is not unitary, defect " +
                                std::to_string(unitary_defect));
    const ComplexMatrix ustar = u.adjoint();
    std::vector<ComplexMatrix> conjugated;
    conjugated.reserve(s.dim());
    for (const auto& b : s.basis()) conjugated.push_back(u * b * ustar);
    // Conjugation preserves the trace inner product, so this only polishes
    // roundoff; closure is re-validated by the constructor.
    Subalgebra out(d, orthonormalize(std::move(conjugated), 1e-10), s.contains_unit());
    out.conjugator_ = u;
    return out;
}

Subalgebra perturb_algebra(const Subalgebra& s, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0)) throw PreconditionError("perturb_algebra: eps must be nonnegative");
    const std::size_t d = s.ambient_dim();
    Rng rng(seed);
    ComplexMatrix g(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
    ComplexMatrix h = g.hermitian_part();
    const double nrm = op_norm(h);
    if (nrm > 0.0) h *= Complex(1.0 / nrm, 0.0);

    const EigenDecomposition eig = herm_eig(h);
    std::vector<Complex> phases(d);
    for (std::size_t i = 0; i < d; ++i)
        phases[i] = std::polar(1.0, eps * eig.eigenvalues[i]);
    const ComplexMatrix u =
        eig.eigenvectors * ComplexMatrix::diagonal(phases) * eig.eigenvectors.adjoint();
    return conjugate_subalgebra(s, u);
}

}  // namespace csrank
