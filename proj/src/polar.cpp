#include "csrank/polar.hpp"

#include <cmath>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"

namespace csrank {

PolarParts polar(const ComplexMatrix& a, double tau) {
    if (!(tau > 0.0)) throw ContractViolation("polar: tau must be positive");
    if (a.rows() < a.cols()) throw ContractViolation("polar: fewer rows than columns");
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();

    const ComplexMatrix gram = (a.adjoint() * a).hermitian_part();
    const auto eig = herm_eig(gram);

    std::vector<double> sigma(k);
    for (std::size_t i = 0; i < k; ++i) sigma[i] = std::sqrt(std::max(0.0, eig.eigenvalues[i]));

    // |a| = W diag(sigma) W*
    ComplexMatrix modulus(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < k; ++t)
                s += eig.eigenvectors(i, t) * sigma[t] * std::conj(eig.eigenvectors(j, t));
            modulus(i, j) = s;
        }
    modulus = modulus.hermitian_part();

    // v = sum_{sigma_t >= tau} (a w_t / sigma_t) w_t*
    ComplexMatrix v(m, k);
    for (std::size_t t = 0; t < k; ++t) {
        if (sigma[t] < tau) continue;
        // u = a w_t / sigma_t
        std::vector<Complex> u(m, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += a(i, j) * eig.eigenvectors(j, t);
            u[i] = s / sigma[t];
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j)
                v(i, j) += u[i] * std::conj(eig.eigenvectors(j, t));
    }

    return {v, modulus};
}

PolarParts polar(const ComplexMatrix& a) {
    const double nrm = op_norm(a);
    return polar(a, std::max(1e-10 * nrm, 1e-300));
}

}  // namespace csrank
