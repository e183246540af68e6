#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace csrank {

using Complex = std::complex<double>;

// Dense row-major complex matrix.  Dimensions are fixed at construction;
// shape mismatches in arithmetic raise ContractViolation.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& d);
    static ComplexMatrix diagonal(const std::vector<Complex>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix hermitian_part() const;  // (A + A*)/2, square only

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex c);

    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    double hermitian_defect() const;  // ||A - A*||_F
    bool all_finite() const;

    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex c, ComplexMatrix a);

// Inverse by Gaussian elimination with partial pivoting.
// Raises ContractViolation on non-square or numerically singular input.
ComplexMatrix inverse(const ComplexMatrix& a);

}  // namespace csrank
