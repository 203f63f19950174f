// Exact univariate polynomials over Q and multiprecision complex root isolation.
#pragma once

#include "cyperiods/numeric.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cyp {

/// Coefficients in ascending degree; the zero polynomial is empty.
using QPoly = std::vector<Rational>;
using CPoly = std::vector<Complex>;

void trim(QPoly& p);
int degree(const QPoly& p);
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Rational& s);
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly gcd(QPoly a, QPoly b);  // monic
QPoly derivative(const QPoly& p);
Rational evaluate(const QPoly& p, const Rational& x);
Complex evaluate(const QPoly& p, const Complex& x);
Complex evaluate(const CPoly& p, const Complex& x);
/// p(c + T) as a polynomial in T.
QPoly taylor_shift(const QPoly& p, const Rational& c);
CPoly taylor_shift(const QPoly& p, const Complex& c);
/// Order of vanishing at x = c.
int order_at(const QPoly& p, const Rational& c);

/// Yun square-free decomposition: p = lc * prod f_i^{m_i}, f_i monic square-free and coprime.
std::vector<std::pair<QPoly, int>> squarefree_factorization(const QPoly& p);

struct IsolatedRoot {
    Complex value;
    Real radius;                    // a root lies in the disk |z - value| <= radius
    std::optional<Rational> exact;  // set when the root is rational (verified by exact evaluation)
    int multiplicity = 1;
};

/// All complex roots of p (with multiplicity recorded once per distinct root).
/// Disks are pairwise separated: distance > 2 * (r_i + r_j). Real roots have im == 0 exactly,
/// non-real roots come in exactly conjugate pairs. Throws RootIsolationFailure.
std::vector<IsolatedRoot> isolate_roots(const QPoly& p, int digits);

/// Roots of a square-free complex polynomial by the Aberth-Ehrlich iteration.
std::vector<Complex> aberth_roots(const CPoly& p, int digits);

}  // namespace cyp
