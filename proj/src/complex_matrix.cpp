#include "csrank/complex_matrix.hpp"

#include <cmath>

#include "csrank/error.hpp"

namespace csrank {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractViolation(std::string("shape mismatch in ") + op);
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
    if (!square()) throw ContractViolation("hermitian_part: matrix not square");
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex c) {
    for (auto& v : data_) v *= c;
    return *this;
}

Complex ComplexMatrix::trace() const {
    if (!square()) throw ContractViolation("trace: matrix not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::hermitian_defect() const {
    if (!square()) throw ContractViolation("hermitian_defect: matrix not square");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ContractViolation("block: out of range");
    ComplexMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m) {
    if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
        throw ContractViolation("set_block: out of range");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw ContractViolation("operator*: inner dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix operator*(Complex c, ComplexMatrix a) {
    a *= c;
    return a;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    if (!a.square()) throw ContractViolation("inverse: matrix not square");
    const std::size_t n = a.rows();
    ComplexMatrix m = a;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(m(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(m(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            throw ContractViolation("inverse: singular matrix");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        const Complex d = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = m(r, col);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    if (!inv.all_finite()) throw ContractViolation("inverse: non-finite result");
    return inv;
}

}  // namespace csrank
