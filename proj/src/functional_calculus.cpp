#include "csrank/functional_calculus.hpp"

#include <cmath>
#include <string>

#include "csrank/error.hpp"

namespace csrank {

namespace {

// U diag(vals) U*
ComplexMatrix assemble(const ComplexMatrix& u, const std::vector<double>& vals) {
    const std::size_t n = u.rows();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (vals[k] == 0.0) continue;
                s += u(i, k) * vals[k] * std::conj(u(j, k));
            }
            out(i, j) = s;
        }
    }
    return out.hermitian_part();
}

std::vector<double> clamped_positive_spectrum(const EigenDecomposition& eig, double norm_scale,
                                              const char* who) {
    std::vector<double> vals = eig.eigenvalues;
    const double tol = 1e-10 * std::max(norm_scale, 1.0);
    for (auto& v : vals) {
        if (v < -tol) {
            throw ContractViolation(std::string(who) + ": input has negative eigenvalue " +
                                    std::to_string(v));
        }
        if (v < 0.0) v = 0.0;
    }
    return vals;
}

}  // namespace

ComplexMatrix func_calc(const ComplexMatrix& H, const ScalarProfile& f) {
    const auto eig = herm_eig(H);
    const double scale = eig.eigenvalues.empty()
                             ? 0.0
                             : std::max(std::abs(eig.eigenvalues.front()),
                                        std::abs(eig.eigenvalues.back()));
    auto vals = clamped_positive_spectrum(eig, scale, "func_calc");
    for (auto& v : vals) v = f(v);
    return assemble(eig.eigenvectors, vals);
}

ComplexMatrix pos_part(const ComplexMatrix& H, double lambda) {
    const auto eig = herm_eig(H);
    std::vector<double> vals = eig.eigenvalues;
    for (auto& v : vals) v = v > lambda ? v - lambda : 0.0;
    return assemble(eig.eigenvectors, vals);
}

ComplexMatrix spectral_proj_leq(const ComplexMatrix& H, double lambda, double delta) {
    if (!(delta > 0.0)) throw ContractViolation("spectral_proj_leq: delta must be positive");
    const auto eig = herm_eig(H);
    const double scale = eig.eigenvalues.empty()
                             ? 0.0
                             : std::max(std::abs(eig.eigenvalues.front()),
                                        std::abs(eig.eigenvalues.back()));
    auto vals = clamped_positive_spectrum(eig, scale, "spectral_proj_leq");
    for (double v : vals) {
        if (std::abs(v - lambda) < delta) {
            throw GapError(v, lambda,
                           "spectral_proj_leq: eigenvalue " + std::to_string(v) +
                               " within delta of level " + std::to_string(lambda));
        }
    }
    for (auto& v : vals) v = v <= lambda ? 1.0 : 0.0;
    return assemble(eig.eigenvectors, vals);
}

ComplexMatrix right_multiplier(const ComplexMatrix& a, const ScalarProfile& psi) {
    if (!psi.ratio_bounded_at_zero()) {
        throw DomainError("right_multiplier: profile " + psi.name() +
                          " has unbounded ratio at zero");
    }
    if (a.rows() < a.cols()) throw ContractViolation("right_multiplier: fewer rows than columns");
    const ComplexMatrix gram = (a.adjoint() * a).hermitian_part();
    const auto eig = herm_eig(gram);
    auto vals = clamped_positive_spectrum(eig, eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back(),
                                          "right_multiplier");
    for (auto& v : vals) v = psi.ratio(std::sqrt(v));
    return a * assemble(eig.eigenvectors, vals);
}

ComplexMatrix matrix_abs(const ComplexMatrix& a) {
    if (a.rows() < a.cols()) throw ContractViolation("matrix_abs: fewer rows than columns");
    const ComplexMatrix gram = (a.adjoint() * a).hermitian_part();
    return func_calc(gram, ScalarProfile::sqrt());
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& H) {
    return func_calc(H, ScalarProfile::inv_sqrt());
}

}  // namespace csrank
