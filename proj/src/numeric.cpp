#include "cyperiods/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cyp {

PrecisionScope::PrecisionScope(int digits10) : previous_(Real::default_precision())
{
    if (digits10 < 10) digits10 = 10;
    Real::default_precision(static_cast<unsigned>(digits10));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_); }

int working_digits() { return static_cast<int>(Real::default_precision()); }

Complex& Complex::operator+=(const Complex& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

Complex& Complex::operator-=(const Complex& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

Complex& Complex::operator*=(const Complex& o)
{
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
}

Complex& Complex::operator/=(const Complex& o)
{
    // Smith's algorithm keeps the intermediate magnitudes bounded.
    if (boost::multiprecision::abs(o.re) >= boost::multiprecision::abs(o.im)) {
        Real t = o.im / o.re;
        Real d = o.re + o.im * t;
        Real r = (re + im * t) / d;
        im = (im - re * t) / d;
        re = std::move(r);
    } else {
        Real t = o.re / o.im;
        Real d = o.re * t + o.im;
        Real r = (re * t + im) / d;
        im = (im * t - re) / d;
        re = std::move(r);
    }
    return *this;
}

Complex& Complex::operator*=(const Real& o)
{
    re *= o;
    im *= o;
    return *this;
}

Complex& Complex::operator/=(const Real& o)
{
    re /= o;
    im /= o;
    return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator*(Complex a, const Real& b) { return a *= b; }
Complex operator*(const Real& b, Complex a) { return a *= b; }
Complex operator/(Complex a, const Real& b) { return a /= b; }
bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }
Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return boost::multiprecision::atan2(z.im, z.re); }
Complex conj(const Complex& z) { return {z.re, -z.im}; }

Complex exp(const Complex& z)
{
    Real m = boost::multiprecision::exp(z.re);
    return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im)};
}

Complex log(const Complex& z)
{
    if (z.re == 0 && z.im == 0) throw std::domain_error("log of zero");
    return {boost::multiprecision::log(abs(z)), arg(z)};
}

Complex sqrt(const Complex& z)
{
    if (z.re == 0 && z.im == 0) return {};
    Real r = boost::multiprecision::sqrt(abs(z));
    Real half = arg(z) / 2;
    return {r * boost::multiprecision::cos(half), r * boost::multiprecision::sin(half)};
}

Complex pow(const Complex& z, long n)
{
    if (n < 0) return Complex(1) / pow(z, -n);
    Complex result(1);
    Complex base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

Complex pow(const Complex& z, const Rational& e)
{
    if (e.get_den() == 1 && e.get_num().fits_slong_p()) return pow(z, e.get_num().get_si());
    if (z.re == 0 && z.im == 0) return {};
    return exp(log(z) * to_real(e));
}

Complex i_unit() { return {Real(0), Real(1)}; }

Real to_real(const Rational& q)
{
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Complex to_complex(const Rational& q) { return Complex(to_real(q)); }

Real pi()
{
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

Real two_pi() { return 2 * pi(); }

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_decimal_literal(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    bool digits = false;
    bool dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!digits) return false;
    if (i == s.size()) return true;
    if (s[i] != 'e' && s[i] != 'E') return false;
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Real parse_real_part(std::string_view s)
{
    s = trim(s);
    if (s.find('/') != std::string_view::npos) return to_real(parse_rational(s));
    if (!is_decimal_literal(s)) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    std::string buf(s);
    if (buf.front() == '+') buf.erase(0, 1);
    return Real(buf);
}

}  // namespace

Real parse_real(std::string_view text) { return parse_real_part(text); }

Complex parse_complex(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i') return Complex(parse_real_part(s));
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_of = [](std::string part) -> Real {
        if (part.empty() || part == "+") return Real(1);
        if (part == "-") return Real(-1);
        if (part.back() == '*') part.pop_back();
        return parse_real_part(part);
    };
    if (split == std::string::npos) return {Real(0), imag_of(s)};
    return {parse_real_part(s.substr(0, split)), imag_of(s.substr(split))};
}

Rational parse_rational(std::string_view text)
{
    std::string s(trim(text));
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.front() == '+') s.erase(0, 1);
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw std::invalid_argument("not a rational: '" + s + "'");
        return Rational(Integer(s, 10));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
        throw std::invalid_argument("not a rational: '" + s + "'");
    Integer d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    Rational q(Integer(num, 10), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Real& x, int digits)
{
    if (digits < 1) digits = 1;
    if (x == 0) return "0";
    std::string sci = x.str(digits - 1, std::ios_base::scientific);
    auto e = sci.find('e');
    long exponent = std::stol(sci.substr(e + 1));
    std::string mant = sci.substr(0, e);
    bool negative = mant.front() == '-';
    if (negative) mant.erase(0, 1);
    mant.erase(std::remove(mant.begin(), mant.end(), '.'), mant.end());
    if (exponent > 40 || exponent < -20) return sci;
    std::string out;
    if (exponent >= 0) {
        if (static_cast<long>(mant.size()) <= exponent + 1) {
            out = mant + std::string(static_cast<std::size_t>(exponent + 1 - static_cast<long>(mant.size())), '0');
        } else {
            out = mant.substr(0, static_cast<std::size_t>(exponent + 1)) + "." +
                  mant.substr(static_cast<std::size_t>(exponent + 1));
        }
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + mant;
    }
    return negative ? "-" + out : out;
}

std::string to_string(const Complex& z, int digits)
{
    if (z.im == 0) return to_string(z.re, digits);
    if (z.re == 0) return to_string(z.im, digits) + "i";
    std::string im = to_string(boost::multiprecision::abs(z.im), digits);
    return to_string(z.re, digits) + (z.im < 0 ? "-" : "+") + im + "i";
}

std::string to_string(const Rational& q) { return q.get_str(); }

double decimal_digits_of_agreement(const Real& error, const Real& scale)
{
    Real e = boost::multiprecision::abs(error);
    Real s = boost::multiprecision::abs(scale);
    if (s == 0) s = 1;
    if (e == 0) return 10000.0;
    double d = -static_cast<double>(boost::multiprecision::log10(e / s));
    return std::clamp(d, 0.0, 10000.0);
}

bool recognize_rational(const Real& x, const Integer& max_den, const Real& tol, Rational& out)
{
    // Convergents p_k/q_k of the continued fraction of x.
    Integer p_prev = 0, q_prev = 1;
    Integer p = 1, q = 0;
    Real r = x;
    for (int iter = 0; iter < 200; ++iter) {
        Real fl = boost::multiprecision::floor(r);
        Integer a;
        mpfr_get_z(a.get_mpz_t(), fl.backend().data(), MPFR_RNDD);
        Integer p_next = a * p + p_prev;
        Integer q_next = a * q + q_prev;
        if (q_next > max_den) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        Rational cand(p, q);
        cand.canonicalize();
        if (boost::multiprecision::abs(x - to_real(cand)) <= tol) {
            out = cand;
            return true;
        }
        Real frac = r - fl;
        if (frac == 0) break;
        r = 1 / frac;
    }
    return false;
}

}  // namespace cyp
