#include "csrank/element.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"

namespace csrank {

void require_same_algebra(const Algebra& a, const Algebra& b) {
    if (a != b) throw PreconditionError("operands live in different algebras");
}

Element::Element(Algebra algebra, std::vector<ComplexMatrix> fibers, double lipschitz, bool affine)
    : algebra_(std::move(algebra)),
      fibers_(std::move(fibers)),
      lipschitz_(lipschitz),
      affine_(affine) {
    if (fibers_.size() != algebra_.fiber_count()) {
        throw PreconditionError("fiber count does not match the algebra");
    }
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
        const std::size_t k = algebra_.fiber_dim(i);
        if (fibers_[i].rows() != k || fibers_[i].cols() != k) {
            throw PreconditionError("fiber has wrong dimensions");
        }
    }
    if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
        throw PreconditionError("lipschitz budget must be finite and nonnegative");
    }
    if (!algebra_.is_field() && lipschitz_ != 0.0) {
        throw PreconditionError("matrix algebras carry no lipschitz budget");
    }
}

Element Element::zero(const Algebra& algebra) {
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t i = 0; i < algebra.fiber_count(); ++i) {
        fibers.emplace_back(algebra.fiber_dim(i), algebra.fiber_dim(i));
    }
    return Element(algebra, std::move(fibers), 0.0, true);
}

Element Element::one(const Algebra& algebra) {
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(algebra.fiber_count());
    for (std::size_t i = 0; i < algebra.fiber_count(); ++i) {
        fibers.push_back(ComplexMatrix::identity(algebra.fiber_dim(i)));
    }
    return Element(algebra, std::move(fibers), 0.0, true);
}

Element Element::constant(const Algebra& algebra, Complex value) {
    Element e = one(algebra);
    e *= value;
    return e;
}

Element Element::from_fibers(const Algebra& algebra, std::vector<ComplexMatrix> fibers,
                             double lipschitz, bool affine) {
    return Element(algebra, std::move(fibers), lipschitz, affine);
}

Element Element::from_vertex_values(const Algebra& algebra, std::vector<ComplexMatrix> values) {
    if (!algebra.is_field()) throw PreconditionError("vertex values require a sampled field");
    Element e(algebra, std::move(values), 0.0, false);
    const auto& mesh = *algebra.mesh();
    double slope = 0.0;
    for (std::size_t j = 0; j < mesh.edge_count(); ++j) {
        const auto& edge = mesh.edges()[j];
        const double len = mesh.edge_lengths()[j];
        if (len <= 0.0) throw ContractViolation("mesh edge of zero length");
        ComplexMatrix diff = e.fibers_[edge[0]];
        diff -= e.fibers_[edge[1]];
        slope = std::max(slope, diff.frobenius_norm() / len);
    }
    e.lipschitz_ = slope;
    return e;
}

Element Element::from_affine(const Algebra& algebra, const ComplexMatrix& c0,
                             const ComplexMatrix& c1, const ComplexMatrix& c2) {
    if (!algebra.is_field()) throw PreconditionError("affine data requires a sampled field");
    const auto& mesh = *algebra.mesh();
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(mesh.vertex_count());
    for (const auto& p : mesh.vertices()) {
        ComplexMatrix value = c0;
        ComplexMatrix mx = c1;
        mx *= Complex(p[0], 0.0);
        ComplexMatrix my = c2;
        my *= Complex(p[1], 0.0);
        value += mx;
        value += my;
        fibers.push_back(std::move(value));
    }
    const double budget = std::hypot(c1.frobenius_norm(), c2.frobenius_norm());
    return Element(algebra, std::move(fibers), budget, true);
}

Element Element::coordinate(const Algebra& algebra) {
    if (!algebra.is_field()) throw PreconditionError("coordinate function requires a sampled field");
    const std::size_t k = algebra.fiber_dim(0);
    ComplexMatrix zero_k(k, k);
    ComplexMatrix cx = ComplexMatrix::identity(k);
    ComplexMatrix cy = ComplexMatrix::identity(k);
    cy *= Complex(0.0, 1.0);
    Element e = from_affine(algebra, zero_k, cx, cy);
    // The generic affine budget overcounts here: the increment of (x+iy)*I
    // is (dx+i*dy)*I with Frobenius norm sqrt(k)*|dp|, not sqrt(2k)*|dp|.
    return from_fibers(algebra, std::vector<ComplexMatrix>(e.fibers()), std::sqrt(double(k)),
                       true);
}

double Element::norm() const {
    double m = 0.0;
    for (const auto& f : fibers_) m = std::max(m, op_norm(f));
    return m;
}

double Element::norm_upper() const {
    if (affine_) return norm();
    return norm() + lipschitz_ * algebra_.cover_radius();
}

double Element::hermitian_defect() const {
    double d = 0.0;
    for (const auto& f : fibers_) d = std::max(d, f.hermitian_defect());
    return d;
}

bool Element::all_finite() const {
    for (const auto& f : fibers_) {
        if (!f.all_finite()) return false;
    }
    return true;
}

Element& Element::operator+=(const Element& other) {
    require_same_algebra(algebra_, other.algebra_);
    for (std::size_t i = 0; i < fibers_.size(); ++i) fibers_[i] += other.fibers_[i];
    lipschitz_ += other.lipschitz_;
    affine_ = affine_ && other.affine_;
    return *this;
}

Element& Element::operator-=(const Element& other) {
    require_same_algebra(algebra_, other.algebra_);
    for (std::size_t i = 0; i < fibers_.size(); ++i) fibers_[i] -= other.fibers_[i];
    lipschitz_ += other.lipschitz_;
    affine_ = affine_ && other.affine_;
    return *this;
}

Element& Element::operator*=(Complex scalar) {
    for (auto& f : fibers_) f *= scalar;
    lipschitz_ *= std::abs(scalar);
    return *this;
}

Element operator+(Element a, const Element& b) {
    a += b;
    return a;
}

Element operator-(Element a, const Element& b) {
    a -= b;
    return a;
}

Element operator*(Complex scalar, Element a) {
    a *= scalar;
    return a;
}

Element mul(const Element& a, const Element& b) {
    require_same_algebra(a.algebra(), b.algebra());
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(a.fibers().size());
    for (std::size_t i = 0; i < a.fibers().size(); ++i) {
        fibers.push_back(a.fiber(i) * b.fiber(i));
    }
    // Product rule needs sup bounds of the factors over the whole region.
    const double budget = a.lipschitz() * b.norm_upper() + a.norm_upper() * b.lipschitz();
    const bool affine = (a.lipschitz() == 0.0 && a.affine()) ? b.affine()
                        : (b.lipschitz() == 0.0 && b.affine()) ? a.affine()
                                                               : false;
    return Element::from_fibers(a.algebra(), std::move(fibers), budget, affine);
}

Element adjoint(const Element& a) {
    std::vector<ComplexMatrix> fibers;
    fibers.reserve(a.fibers().size());
    for (const auto& f : a.fibers()) fibers.push_back(f.adjoint());
    return Element::from_fibers(a.algebra(), std::move(fibers), a.lipschitz(), a.affine());
}

}  // namespace csrank
