#include "cyperiods/linalg.hpp"

#include "cyperiods/error.hpp"

#include <utility>

namespace cyp {

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1);
    return m;
}

CVector CMatrix::column(std::size_t j) const
{
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void CMatrix::set_column(std::size_t j, const CVector& v)
{
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix& CMatrix::operator+=(const CMatrix& o)
{
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o)
{
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b)
{
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex& aik = a(i, k);
            if (aik.re == 0 && aik.im == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

CVector operator*(const CMatrix& a, const CVector& v)
{
    CVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
    return out;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }

CMatrix operator*(const Complex& s, CMatrix a)
{
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
    return a;
}

CVector operator+(CVector a, const CVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

CVector operator-(CVector a, const CVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

Real norm_inf(const CMatrix& a)
{
    Real best = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Real row = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += abs(a(i, j));
        if (row > best) best = row;
    }
    return best;
}

Real norm_inf(const CVector& v)
{
    Real best = 0;
    for (const auto& z : v) {
        Real m = abs(z);
        if (m > best) best = m;
    }
    return best;
}

CMatrix inverse(const CMatrix& a)
{
    const std::size_t n = a.rows();
    if (n != a.cols()) throw IllConditioned("inverse of a non-square matrix");
    CMatrix m = a;
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        Real best = abs(m(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            Real v = abs(m(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0) throw IllConditioned("singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        Complex d = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            Complex f = m(r, col);
            if (f.re == 0 && f.im == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

CVector solve(const CMatrix& a, const CVector& b) { return inverse(a) * b; }

Real condition_number(const CMatrix& a) { return norm_inf(a) * norm_inf(inverse(a)); }

int rank(const CMatrix& a, const Real& rel_tol)
{
    CMatrix m = a;
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Real scale = norm_inf(a);
    if (scale == 0) return 0;
    int r = 0;
    std::vector<bool> used_col(cols, false);
    for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
        Real best = 0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = static_cast<std::size_t>(r); i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                if (used_col[j]) continue;
                Real v = abs(m(i, j));
                if (v > best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best <= rel_tol * scale) break;
        const std::size_t pr = static_cast<std::size_t>(r);
        for (std::size_t j = 0; j < cols; ++j) std::swap(m(bi, j), m(pr, j));
        used_col[bj] = true;
        for (std::size_t i = pr + 1; i < rows; ++i) {
            Complex f = m(i, bj) / m(pr, bj);
            for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(pr, j);
        }
        ++r;
    }
    return r;
}

CMatrix power(const CMatrix& a, long n)
{
    if (n < 0) return power(inverse(a), -n);
    CMatrix result = CMatrix::identity(a.rows());
    CMatrix base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

CMatrix conj(const CMatrix& a)
{
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = conj(a(i, j));
    return c;
}

}  // namespace cyp
