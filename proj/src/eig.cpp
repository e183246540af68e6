#include "csrank/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csrank/error.hpp"

/*
 * Cyclic Jacobi for complex Hermitian matrices.
 *
 * Each sweep visits the strict upper triangle in row-major order.  For a pivot
 * (p, q) the 2x2 block
 *
 *      [ a_pp      a_pq ]        a_pq = r e^{i alpha},  a_pp, a_qq real
 *      [ conj(a_pq) a_qq ]
 *
 * is first de-phased by D = diag(e^{i alpha}, 1), which makes the off-diagonal
 * entry real, then annihilated by the classical symmetric Schur rotation with
 *      tau = (a_qq - a_pp) / (2 r),   t = sgn(tau) / (|tau| + sqrt(1 + tau^2)),
 *      c = 1 / sqrt(1 + t^2),         s = t c.
 * The combined unitary G = D * [[c, s], [-s, c]] is applied as H <- G* H G and
 * accumulated into the eigenvector matrix.  Off-diagonal mass is strictly
 * decreasing, convergence is quadratic; we stop when the off-diagonal
 * Frobenius norm falls below 1e-14 of the matrix norm.
 *
 * The sweep order and all tie-breaking are fixed, so the decomposition is a
 * pure function of the input bytes.
 */

namespace csrank {

namespace {

double offdiag_norm(const ComplexMatrix& h) {
    double s = 0.0;
    const std::size_t n = h.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(h(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition herm_eig(const ComplexMatrix& H) {
    if (!H.square()) throw ContractViolation("herm_eig: matrix not square");
    if (!H.all_finite()) throw ContractViolation("herm_eig: non-finite entries");
    const std::size_t n = H.rows();
    const double scale = H.frobenius_norm();
    if (H.hermitian_defect() > 1e-10 * std::max(scale, 1e-300)) {
        throw ContractViolation("herm_eig: input is not Hermitian within tolerance");
    }

    if (n == 0) return {{}, ComplexMatrix(0, 0)};
    if (n == 1) return {{H(0, 0).real()}, ComplexMatrix::identity(1)};

    ComplexMatrix a = H.hermitian_part();  // exact symmetrization of roundoff
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = 1e-14 * std::max(scale, 1e-300);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (tau >= 0.0) {
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                } else {
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // columns of G restricted to (p, q):
                //   G(p,p) = c*phase   G(p,q) = s*phase
                //   G(q,p) = -s        G(q,q) = c
                const Complex gpp = c * phase;
                const Complex gpq = s * phase;
                const Complex gqp = -s;
                const Complex gqq = c;

                // a <- G* a G ; update columns then rows.
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = aip * gpp + aiq * gqp;
                    a(i, q) = aip * gpq + aiq * gqq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
                    a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
                }
                // keep the pivot block exactly Hermitian
                a(p, q) = Complex(0.0, 0.0);
                a(q, p) = Complex(0.0, 0.0);
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();

    // ascending eigenvalues; stable sort keeps original order on ties
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

double op_norm(const ComplexMatrix& a) {
    if (a.empty()) return 0.0;
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
    const ComplexMatrix g = a.adjoint() * a;
    const auto eig = herm_eig(g);
    return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

double min_eig_hermitian(const ComplexMatrix& H) {
    if (H.rows() == 1 && H.cols() == 1) return H(0, 0).real();
    return herm_eig(H).eigenvalues.front();
}

double min_eig_gram(const ComplexMatrix& a) {
    if (a.rows() < a.cols()) throw ContractViolation("min_eig_gram: fewer rows than columns");
    if (a.rows() == 1 && a.cols() == 1) return std::norm(a(0, 0));
    return std::max(0.0, min_eig_hermitian(a.adjoint() * a));
}

}  // namespace csrank
