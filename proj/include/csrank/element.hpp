#pragma once

#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/complex_matrix.hpp"

namespace csrank {

// One algebra element, stored as a matrix per fiber.  For sampled fields the
// element additionally carries a Lipschitz budget: a bound on the Frobenius
// slope of the represented continuous function per unit of mesh distance.
// (Frobenius dominates the operator norm, so the budget controls both.)
// The affine flag marks fields that are exactly affine in the mesh
// coordinates; for those, vertex maxima of convex functionals are exact
// suprema over the region rather than lower samples.
class Element {
public:
    static Element zero(const Algebra& algebra);
    static Element one(const Algebra& algebra);
    static Element from_fibers(const Algebra& algebra, std::vector<ComplexMatrix> fibers,
                               double lipschitz, bool affine = false);
    // Field from raw vertex samples; the budget is the observed slope of the
    // piecewise-linear interpolant, which is the function being represented.
    static Element from_vertex_values(const Algebra& algebra, std::vector<ComplexMatrix> values);
    // Field whose value at (x, y) is c0 + x*c1 + y*c2 (1-d meshes use only x).
    static Element from_affine(const Algebra& algebra, const ComplexMatrix& c0,
                               const ComplexMatrix& c1, const ComplexMatrix& c2);
    // The coordinate function x + iy (scalar fibers scaled onto the identity).
    static Element coordinate(const Algebra& algebra);
    static Element constant(const Algebra& algebra, Complex value);

    const Algebra& algebra() const { return algebra_; }
    const std::vector<ComplexMatrix>& fibers() const { return fibers_; }
    const ComplexMatrix& fiber(std::size_t i) const { return fibers_[i]; }
    double lipschitz() const { return lipschitz_; }
    bool affine() const { return affine_; }

    // Max fiber operator norm: the exact norm for matrix algebras, the vertex
    // sample of the sup norm for fields.
    double norm() const;
    // Upper bound on the sup norm of the represented function.
    double norm_upper() const;
    double hermitian_defect() const;
    bool all_finite() const;

    Element& operator+=(const Element& other);
    Element& operator-=(const Element& other);
    Element& operator*=(Complex scalar);

private:
    Element(Algebra algebra, std::vector<ComplexMatrix> fibers, double lipschitz, bool affine);

    Algebra algebra_;
    std::vector<ComplexMatrix> fibers_;
    double lipschitz_ = 0.0;
    bool affine_ = false;
};

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(Complex scalar, Element a);
Element mul(const Element& a, const Element& b);
Element adjoint(const Element& a);

void require_same_algebra(const Algebra& a, const Algebra& b);

}  // namespace csrank
