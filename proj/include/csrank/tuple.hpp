#pragma once

#include <vector>

#include "csrank/element.hpp"

namespace csrank {

// An n-tuple over an algebra, identified with a column of n elements.  The
// tuple norm is the operator norm of the stacked (n*k)-by-k matrix, fiberwise;
// equivalently ||sum a_i* a_i||^(1/2).
class Tuple {
public:
    Tuple(std::vector<Element> entries);
    static Tuple zero(const Algebra& algebra, std::size_t n);

    std::size_t size() const { return entries_.size(); }
    const Algebra& algebra() const { return entries_.front().algebra(); }
    const Element& entry(std::size_t i) const { return entries_[i]; }
    const std::vector<Element>& entries() const { return entries_; }

    // Entries stacked vertically at one fiber: (n*k) x k.
    ComplexMatrix stack_fiber(std::size_t fiber) const;
    // Sum of a_i* a_i at one fiber: k x k positive semidefinite.
    ComplexMatrix gram_fiber(std::size_t fiber) const;

    double norm() const;
    // Smallest eigenvalue of the gram matrix across fibers (vertex samples
    // for fields).
    double sigma_min_sq() const;
    // Frobenius-slope budget of the stacked field: sqrt(sum of entry budgets^2).
    double stack_lipschitz() const;
    bool affine() const;
    // Upper bound on the sup of the stacked operator norm over the region.
    double norm_upper() const;
    bool all_finite() const;

    Tuple& operator+=(const Tuple& other);
    Tuple& operator-=(const Tuple& other);
    Tuple& operator*=(Complex scalar);

private:
    std::vector<Element> entries_;
};

Tuple operator+(Tuple a, const Tuple& b);
Tuple operator-(Tuple a, const Tuple& b);
Tuple operator*(Complex scalar, Tuple a);

double tuple_norm(const Tuple& a);
double tuple_dist(const Tuple& a, const Tuple& b);
// Sup-norm bound of a - b over the whole region (exact when the difference
// is affine, padded by the Lipschitz budget otherwise).
double tuple_dist_upper(const Tuple& a, const Tuple& b);

// Right action: (a_1 g, ..., a_n g).
Tuple mul_element(const Tuple& a, const Element& g);
// a* b = sum a_i* b_i.
Element inner(const Tuple& a, const Tuple& b);

}  // namespace csrank
