#pragma once

#include "csrank/complex_matrix.hpp"
#include "csrank/eig.hpp"
#include "csrank/profiles.hpp"

namespace csrank {

inline constexpr double kDefaultGapDelta = 1e-6;

// f(H) = U diag(f(lambda_i)) U* for positive Hermitian H.
// Eigenvalues below zero by more than 1e-10 * ||H|| violate the contract;
// smaller negative roundoff is clamped to 0 before applying the profile.
ComplexMatrix func_calc(const ComplexMatrix& H, const ScalarProfile& f);

// (H - lambda)_+ , the positive part of the shifted matrix.
ComplexMatrix pos_part(const ComplexMatrix& H, double lambda);

// Spectral projection onto [0, lambda].  Raises GapError if some eigenvalue
// lies within delta of lambda: without a gap the projection is not stable.
ComplexMatrix spectral_proj_leq(const ComplexMatrix& H, double lambda,
                                double delta = kDefaultGapDelta);

// a * q(|a|) where q(t) = psi(t)/t extended continuously to 0.  Equals
// v * psi(|a|) for the polar factor v, but never leaves the span of a's
// columns, which is what makes it usable inside an algebra.
// psi must have a ratio bounded at zero (DomainError otherwise).
ComplexMatrix right_multiplier(const ComplexMatrix& a, const ScalarProfile& psi);

// (a* a)^(1/2) for a rectangular a with rows >= cols.
ComplexMatrix matrix_abs(const ComplexMatrix& a);

// H^(-1/2) for positive definite H (DomainError at singular H).
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& H);

}  // namespace csrank
