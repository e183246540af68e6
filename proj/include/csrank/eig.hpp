#pragma once

#include <vector>

#include "csrank/complex_matrix.hpp"

namespace csrank {

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending; ties keep original diagonal order
    ComplexMatrix eigenvectors;       // unitary, column i pairs with eigenvalues[i]
};

// Full eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
// rotations.  Deterministic: identical bytes in, identical bytes out.
// Requires ||H - H*||_F <= 1e-10 * ||H||_F (ContractViolation otherwise).
EigenDecomposition herm_eig(const ComplexMatrix& H);

// Largest singular value, i.e. sqrt(lambda_max(a* a)).
double op_norm(const ComplexMatrix& a);

// Smallest eigenvalue of a Hermitian matrix.
double min_eig_hermitian(const ComplexMatrix& H);

// Smallest eigenvalue of a* a (a may be rectangular, rows >= cols).
double min_eig_gram(const ComplexMatrix& a);

}  // namespace csrank
