// Small dense complex matrices (4x4 transfer/monodromy matrices and friends).
#pragma once

#include "cyperiods/numeric.hpp"

#include <cstddef>
#include <vector>

namespace cyp {

using CVector = std::vector<Complex>;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, const CVector& v);

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, const CVector& v);
CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const Complex& s, CMatrix a);
CVector operator+(CVector a, const CVector& b);
CVector operator-(CVector a, const CVector& b);

/// Max-row-sum norm.
Real norm_inf(const CMatrix& a);
Real norm_inf(const CVector& v);

/// Gauss-Jordan inverse with partial pivoting; throws IllConditioned for a singular matrix.
CMatrix inverse(const CMatrix& a);
CVector solve(const CMatrix& a, const CVector& b);

/// Infinity-norm condition number estimate (exact inverse based).
Real condition_number(const CMatrix& a);

/// Numerical rank with relative tolerance (complete pivoting elimination).
int rank(const CMatrix& a, const Real& rel_tol);

CMatrix power(const CMatrix& a, long n);

CMatrix conj(const CMatrix& a);

}  // namespace cyp
