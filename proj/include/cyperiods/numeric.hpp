// Multiprecision real/complex scalars and exact rationals shared by every module.
#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace cyp {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Rational = mpq_class;
using Integer = mpz_class;

/// Sets the default MPFR precision (decimal digits) for the lifetime of the scope.
/// Every Real created inside the scope carries at least this precision.
class PrecisionScope {
public:
    explicit PrecisionScope(int digits10);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned previous_;
};

int working_digits();

struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(const Real& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(double r, double i) : re(r), im(i) {}

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator/=(const Real& o);
    Complex operator-() const { return {-re, -im}; }
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator*(Complex a, const Real& b);
Complex operator*(const Real& b, Complex a);
Complex operator/(Complex a, const Real& b);
bool operator==(const Complex& a, const Complex& b);

Real abs(const Complex& z);
Real norm2(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long n);
Complex pow(const Complex& z, const Rational& e);  // principal branch
Complex i_unit();

Real to_real(const Rational& q);
Complex to_complex(const Rational& q);

Real pi();
Real two_pi();

/// Parses a decimal literal such as "-12.5e3"; throws std::invalid_argument.
Real parse_real(std::string_view text);
/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i"; rationals "p/q" are accepted for each part.
Complex parse_complex(std::string_view text);
/// Parses "p/q" or an integer; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Fixed-point style rendering with the requested number of significant digits.
std::string to_string(const Real& x, int digits);
std::string to_string(const Complex& z, int digits);
std::string to_string(const Rational& q);

/// -log10 of |x| relative to |scale|, clamped to [0, 10000].
double decimal_digits_of_agreement(const Real& error, const Real& scale);

/// Continued-fraction recognition of a rational with denominator <= max_den within tol.
bool recognize_rational(const Real& x, const Integer& max_den, const Real& tol, Rational& out);

}  // namespace cyp
