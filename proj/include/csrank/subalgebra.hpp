#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "csrank/complex_matrix.hpp"

namespace csrank {

// A *-subalgebra of the d-by-d matrices, stored as a basis that is
// orthonormal under the trace inner product <a, b> = tr(a* b).  Construction
// validates the basis: gram matrix within 1e-10 of the identity, and adjoints
// and pairwise products projecting back onto the span with defect at most
// 1e-8 in Frobenius norm.
class Subalgebra {
public:
    Subalgebra(std::size_t ambient_dim, std::vector<ComplexMatrix> basis, bool contains_unit);

    // Matrix units of the full algebra.
    static Subalgebra full_matrix(std::size_t d);
    // Matrix units of diagonal blocks of the given sizes; sizes must sum to
    // at most d, a deficit leaves a zero corner (and drops the unit).
    static Subalgebra block_diagonal(std::size_t d, const std::vector<std::size_t>& blocks);
    static Subalgebra diagonal(std::size_t d);
    // Orthonormalizes a spanning set (two-pass Gram-Schmidt, near-dependent
    // directions dropped), then validates closure.
    static Subalgebra from_span(std::size_t d, const std::vector<ComplexMatrix>& span,
                                bool contains_unit);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<ComplexMatrix>& basis() const { return basis_; }
    bool contains_unit() const { return contains_unit_; }

    // Conjugating unitary recorded by perturb_algebra: this algebra is
    // u S u* for the source S it was built from.
    const std::optional<ComplexMatrix>& conjugator() const { return conjugator_; }

    // Trace-inner-product coordinates and projection onto the span.
    std::vector<Complex> coordinates(const ComplexMatrix& x) const;
    ComplexMatrix project(const ComplexMatrix& x) const;
    ComplexMatrix combine(const std::vector<Complex>& coords) const;
    // Frobenius distance from x to its projection.
    double projection_defect(const ComplexMatrix& x) const;

    // Whether the two spans agree within tol (mutual projection defects).
    bool same_span(const Subalgebra& other, double tol) const;

private:
    friend Subalgebra conjugate_subalgebra(const Subalgebra&, const ComplexMatrix&);

    std::size_t ambient_dim_;
    std::vector<ComplexMatrix> basis_;
    bool contains_unit_;
    std::optional<ComplexMatrix> conjugator_;
};

// u S u* with the conjugator recorded on the result.  u must be unitary to
// 1e-10; the conjugated basis is re-orthonormalized and re-validated.
Subalgebra conjugate_subalgebra(const Subalgebra& s, const ComplexMatrix& u);

// u = exp(i eps H) for a seed-determined Hermitian H with unit operator
// norm, applied via conjugate_subalgebra.
Subalgebra perturb_algebra(const Subalgebra& s, double eps, std::uint64_t seed);

}  // namespace csrank
